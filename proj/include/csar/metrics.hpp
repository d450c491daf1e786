#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "csar/core_model.hpp"

namespace csar {

/// Level, relative to the peak, at which mainlobe widths are measured.
inline constexpr double kMainlobeLevelDb = -3.0;
inline constexpr double kDefaultValleyDb = 3.0;

/// The -3 dB crossing ran off the edge of the grid.
class LobeTruncatedError : public Error {
public:
    using Error::Error;
};

enum class Axis { Range, Angle };

template <typename Scalar>
struct PeakLocation {
    Eigen::Index range_index = 0;
    Eigen::Index angle_index = 0;
    Scalar value = 0;
};

template <typename Scalar>
struct PolarPoint {
    Scalar range = 0;
    Scalar azimuth = 0;
};

template <typename Scalar>
struct PsfReport {
    PeakLocation<Scalar> peak;
    Scalar mainlobe_width_range = 0;  ///< m
    Scalar mainlobe_width_angle = 0;  ///< rad
    Scalar pslr_db = 0;
};

/// Arg-max; ties go to the lowest range index, then the lowest angle index.
template <typename Derived>
PeakLocation<typename Derived::Scalar> find_peak(const Eigen::MatrixBase<Derived>& image_db) {
    using Scalar = typename Derived::Scalar;
    if (image_db.size() == 0) throw ValidationError("find_peak: empty matrix");
    PeakLocation<Scalar> best{0, 0, image_db(0, 0)};
    for (Eigen::Index i = 0; i < image_db.rows(); ++i)
        for (Eigen::Index j = 0; j < image_db.cols(); ++j)
            if (image_db(i, j) > best.value) best = {i, j, image_db(i, j)};
    return best;
}

/// Cell whose centre is nearest to (range, azimuth), clamped to the grid.
template <typename Scalar>
PeakLocation<Scalar> nearest_cell(const PolarGrid<Scalar>& grid, PolarPoint<Scalar> p) {
    auto index = [](Scalar v, Scalar lo, Scalar step, Eigen::Index n) {
        const auto i = static_cast<Eigen::Index>(std::floor((v - lo) / step));
        return std::clamp<Eigen::Index>(i, 0, n - 1);
    };
    return {index(p.range, grid.r_min, grid.range_step(), grid.n_r),
            index(p.azimuth, grid.theta_min, grid.angle_step(), grid.n_theta), Scalar(0)};
}

namespace detail {

/// Linear-interpolated full width (in cells) of the lobe through `peak` along
/// a 1-D cut, measured at `level` dB relative to the peak.
template <typename Cut>
double cut_width_cells(const Cut& cut, Eigen::Index peak, double level) {
    const double threshold = static_cast<double>(cut[peak]) + level;
    const Eigen::Index n = cut.size();

    Eigen::Index hi = peak;
    while (hi + 1 < n && static_cast<double>(cut[hi + 1]) >= threshold) ++hi;
    if (hi + 1 >= n) throw LobeTruncatedError("mainlobe_width: lobe truncated by grid edge");
    Eigen::Index lo = peak;
    while (lo - 1 >= 0 && static_cast<double>(cut[lo - 1]) >= threshold) --lo;
    if (lo - 1 < 0) throw LobeTruncatedError("mainlobe_width: lobe truncated by grid edge");

    auto fraction = [&](Eigen::Index inside, Eigen::Index outside) {
        const double vin = static_cast<double>(cut[inside]);
        const double vout = static_cast<double>(cut[outside]);
        return (vin - threshold) / (vin - vout);
    };
    return static_cast<double>(hi - lo) + fraction(hi, hi + 1) + fraction(lo, lo - 1);
}

/// Highest level beyond the first null on either side of `peak`, or the cut
/// minimum when the cut falls monotonically to both edges.
template <typename Cut>
double cut_sidelobe(const Cut& cut, Eigen::Index peak, bool& found) {
    double side = -std::numeric_limits<double>::infinity();
    const Eigen::Index n = cut.size();
    for (int dir : {-1, 1}) {
        Eigen::Index i = peak;
        while (i + dir >= 0 && i + dir < n && cut[i + dir] <= cut[i]) i += dir;
        for (Eigen::Index j = i + dir; j >= 0 && j < n; j += dir) {
            side = std::max(side, static_cast<double>(cut[j]));
            found = true;
        }
    }
    return side;
}

template <typename Derived>
bool is_local_max(const Eigen::MatrixBase<Derived>& m, Eigen::Index i, Eigen::Index j) {
    for (Eigen::Index di = -1; di <= 1; ++di)
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
            const Eigen::Index a = i + di, b = j + dj;
            if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= m.rows() || b >= m.cols()) continue;
            if (m(a, b) > m(i, j)) return false;
        }
    return true;
}

template <typename Derived>
double bilinear(const Eigen::MatrixBase<Derived>& m, double ri, double ai) {
    const auto i0 = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(ri)), 0, m.rows() - 1);
    const auto j0 = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(ai)), 0, m.cols() - 1);
    const Eigen::Index i1 = std::min<Eigen::Index>(i0 + 1, m.rows() - 1);
    const Eigen::Index j1 = std::min<Eigen::Index>(j0 + 1, m.cols() - 1);
    const double fr = std::clamp(ri - double(i0), 0.0, 1.0);
    const double fa = std::clamp(ai - double(j0), 0.0, 1.0);
    const double top = (1 - fa) * double(m(i0, j0)) + fa * double(m(i0, j1));
    const double bottom = (1 - fa) * double(m(i1, j0)) + fa * double(m(i1, j1));
    return (1 - fr) * top + fr * bottom;
}

} // namespace detail

/// -3 dB full width of the 1-D cut through `peak` along `axis`, in metres
/// (range) or radians (angle).
template <typename Derived, typename Scalar>
Scalar mainlobe_width_at(const Eigen::MatrixBase<Derived>& image_db, const PolarGrid<Scalar>& grid, Axis axis,
                         const PeakLocation<Scalar>& peak) {
    if (axis == Axis::Range) {
        const auto cut = image_db.col(peak.angle_index);
        return Scalar(detail::cut_width_cells(cut, peak.range_index, kMainlobeLevelDb)) * grid.range_step();
    }
    const auto cut = image_db.row(peak.range_index);
    return Scalar(detail::cut_width_cells(cut, peak.angle_index, kMainlobeLevelDb)) * grid.angle_step();
}

/// -3 dB full width through the image peak.
template <typename Derived, typename Scalar>
Scalar mainlobe_width(const Eigen::MatrixBase<Derived>& image_db, const PolarGrid<Scalar>& grid, Axis axis) {
    const auto peak = find_peak(image_db);
    return mainlobe_width_at(image_db, grid, axis, PeakLocation<Scalar>{peak.range_index, peak.angle_index, peak.value});
}

/// Highest sidelobe along the two principal cuts, relative to the peak (<= 0).
template <typename Derived>
typename Derived::Scalar peak_sidelobe_ratio(const Eigen::MatrixBase<Derived>& image_db) {
    using Scalar = typename Derived::Scalar;
    const auto peak = find_peak(image_db);
    bool found = false;
    const double side = std::max(detail::cut_sidelobe(image_db.col(peak.angle_index), peak.range_index, found),
                                 detail::cut_sidelobe(image_db.row(peak.range_index), peak.angle_index, found));
    if (!found) {
        const Scalar low = std::min(image_db.col(peak.angle_index).minCoeff(), image_db.row(peak.range_index).minCoeff());
        return low - peak.value;
    }
    return std::min(Scalar(side) - peak.value, Scalar(0));
}

template <typename Derived, typename Scalar>
PsfReport<Scalar> psf_report(const Eigen::MatrixBase<Derived>& image_db, const PolarGrid<Scalar>& grid) {
    PsfReport<Scalar> r;
    const auto peak = find_peak(image_db);
    r.peak = {peak.range_index, peak.angle_index, peak.value};
    r.mainlobe_width_range = mainlobe_width_at(image_db, grid, Axis::Range, r.peak);
    r.mainlobe_width_angle = mainlobe_width_at(image_db, grid, Axis::Angle, r.peak);
    r.pslr_db = peak_sidelobe_ratio(image_db);
    return r;
}

template <typename Scalar>
struct TwoTargetAnalysis {
    bool resolved = false;
    bool found_a = false;
    bool found_b = false;
    PeakLocation<Scalar> peak_a;
    PeakLocation<Scalar> peak_b;
    Scalar valley_db = 0;  ///< lowest level on the straight path between the peaks
};

/// Looks for a local maximum within one mainlobe width (measured at the
/// global peak) of each expected position, then checks the valley between them.
template <typename Derived, typename Scalar>
TwoTargetAnalysis<Scalar> analyze_two_targets(const Eigen::MatrixBase<Derived>& image_db,
                                              const PolarGrid<Scalar>& grid, PolarPoint<Scalar> pos_a,
                                              PolarPoint<Scalar> pos_b,
                                              Scalar min_valley_db = Scalar(kDefaultValleyDb)) {
    TwoTargetAnalysis<Scalar> out;
    Scalar width_r, width_a;
    try {
        const auto peak = find_peak(image_db);
        const PeakLocation<Scalar> p{peak.range_index, peak.angle_index, peak.value};
        width_r = mainlobe_width_at(image_db, grid, Axis::Range, p);
        width_a = mainlobe_width_at(image_db, grid, Axis::Angle, p);
    } catch (const LobeTruncatedError&) {
        return out;
    }
    const auto half_r = static_cast<Eigen::Index>(std::ceil(width_r / grid.range_step()));
    const auto half_a = static_cast<Eigen::Index>(std::ceil(width_a / grid.angle_step()));

    auto search = [&](PolarPoint<Scalar> pos, PeakLocation<Scalar>& found) {
        const auto centre = nearest_cell(grid, pos);
        bool any = false;
        for (Eigen::Index i = std::max<Eigen::Index>(0, centre.range_index - half_r);
             i <= std::min<Eigen::Index>(image_db.rows() - 1, centre.range_index + half_r); ++i)
            for (Eigen::Index j = std::max<Eigen::Index>(0, centre.angle_index - half_a);
                 j <= std::min<Eigen::Index>(image_db.cols() - 1, centre.angle_index + half_a); ++j)
                if (!any || image_db(i, j) > found.value) {
                    found = {i, j, image_db(i, j)};
                    any = true;
                }
        return any && detail::is_local_max(image_db, found.range_index, found.angle_index);
    };
    out.found_a = search(pos_a, out.peak_a);
    out.found_b = search(pos_b, out.peak_b);
    if (!out.found_a || !out.found_b) return out;
    if (out.peak_a.range_index == out.peak_b.range_index && out.peak_a.angle_index == out.peak_b.angle_index)
        return out;

    const double ai = double(out.peak_a.range_index), aj = double(out.peak_a.angle_index);
    const double bi = double(out.peak_b.range_index), bj = double(out.peak_b.angle_index);
    const Eigen::Index steps = 4 * std::max<Eigen::Index>(std::abs(out.peak_a.range_index - out.peak_b.range_index),
                                                          std::abs(out.peak_a.angle_index - out.peak_b.angle_index));
    double valley = std::numeric_limits<double>::infinity();
    for (Eigen::Index s = 0; s <= steps; ++s) {
        // written so swapping a and b visits exactly the same points
        const double wa = double(steps - s), wb = double(s);
        const double ri = (ai * wa + bi * wb) / double(steps);
        const double rj = (aj * wa + bj * wb) / double(steps);
        valley = std::min(valley, detail::bilinear(image_db, ri, rj));
    }
    out.valley_db = Scalar(valley);
    const Scalar lower = std::min(out.peak_a.value, out.peak_b.value);
    out.resolved = out.valley_db <= lower - min_valley_db;
    return out;
}

template <typename Derived, typename Scalar>
bool two_target_resolved(const Eigen::MatrixBase<Derived>& image_db, const PolarGrid<Scalar>& grid,
                         PolarPoint<Scalar> pos_a, PolarPoint<Scalar> pos_b,
                         Scalar min_valley_db = Scalar(kDefaultValleyDb)) {
    return analyze_two_targets(image_db, grid, pos_a, pos_b, min_valley_db).resolved;
}

/// Cartesian distance between the centres of two cells.
template <typename Scalar>
Scalar cell_distance(const PolarGrid<Scalar>& grid, const PeakLocation<Scalar>& a, const PeakLocation<Scalar>& b) {
    const Scalar ra = grid.range_at(a.range_index), ta = grid.angle_at(a.angle_index);
    const Scalar rb = grid.range_at(b.range_index), tb = grid.angle_at(b.angle_index);
    return std::hypot(ra * std::cos(ta) - rb * std::cos(tb), ra * std::sin(ta) - rb * std::sin(tb));
}

} // namespace csar
