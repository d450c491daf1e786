#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "csar/core_model.hpp"
#include "csar/parallel.hpp"

namespace csar {

enum class AzimuthTaper { None, Hann };

struct ReconstructOptions {
    unsigned workers = 0;  ///< 0: CSAR_THREADS or hardware concurrency
    AzimuthTaper taper = AzimuthTaper::None;
};

/// Samples between exact re-anchoring of the per-sample phase recurrence.
inline constexpr Eigen::Index kPhaseBlock = 64;

/// Predicted unit-modulus phase history of a hypothetical target over all
/// wavenumbers at one aperture angle: element i = exp(+j k_i R).
template <typename Scalar>
ComplexVector<Scalar> steering_column(const WavenumberVector<Scalar>& k, Scalar cell_range, Scalar cell_azimuth,
                                      Scalar track_radius, Scalar radar_angle) {
    if (!(cell_range >= 0)) throw ValidationError("steering_column: cell range must be >= 0");
    const Scalar slant = slant_range(cell_range, cell_azimuth, track_radius, radar_angle);
    ComplexVector<Scalar> a(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) a[i] = std::polar(Scalar(1), k[i] * slant);
    return a;
}

namespace detail {

/// Everything the per-cell kernel reads, precomputed once per reconstruction.
template <typename Scalar>
struct BackprojectionPlan {
    const Scalar* samples = nullptr;  // interleaved re/im, column-major N x M
    Eigen::Index n = 0;
    Eigen::Index m_count = 0;
    Scalar radius = 0;
    const Scalar* k = nullptr;
    Scalar dk = 0;
    VectorX<Scalar> cos_theta;
    VectorX<Scalar> sin_theta;
    VectorX<Scalar> taper;  // empty when no taper

    BackprojectionPlan(const DataMatrix<Scalar>& data, const WavenumberVector<Scalar>& wavenumbers,
                       AzimuthTaper taper_kind)
        : samples(reinterpret_cast<const Scalar*>(data.samples.data())),
          n(data.samples.rows()),
          m_count(data.samples.cols()),
          radius(data.aperture.radius),
          k(wavenumbers.data()),
          dk(n > 1 ? (wavenumbers[n - 1] - wavenumbers[0]) / Scalar(n - 1) : Scalar(0)),
          cos_theta(data.aperture.angles.array().cos()),
          sin_theta(data.aperture.angles.array().sin()) {
        if (taper_kind == AzimuthTaper::Hann) {
            taper.resize(m_count);
            for (Eigen::Index m = 0; m < m_count; ++m) {
                const Scalar s = std::sin(std::numbers::pi_v<Scalar> * (Scalar(m) + Scalar(0.5)) / Scalar(m_count));
                taper[m] = s * s;
            }
        }
    }
};

/// Sum over i of S(i, m) * exp(-j k_i R) for `Lanes` columns at once. Every lane
/// performs exactly the same sequence of operations as a single-lane call, so
/// the result for a column does not depend on how columns are grouped.
template <typename Scalar, int Lanes>
inline void matched_columns(const BackprojectionPlan<Scalar>& plan, const Eigen::Index* cols, const Scalar* slant,
                            Scalar* out_re, Scalar* out_im) {
    Scalar zr[Lanes], zi[Lanes];
    const Scalar* col[Lanes];
    for (int l = 0; l < Lanes; ++l) {
        const Scalar ph = -plan.dk * slant[l];
        zr[l] = std::cos(ph);
        zi[l] = std::sin(ph);
        col[l] = plan.samples + 2 * plan.n * cols[l];
        out_re[l] = 0;
        out_im[l] = 0;
    }
    for (Eigen::Index start = 0; start < plan.n; start += kPhaseBlock) {
        const Eigen::Index last = std::min(start + kPhaseBlock, plan.n) - 1;
        Scalar hr[Lanes], hi[Lanes];
        for (int l = 0; l < Lanes; ++l) {
            hr[l] = col[l][2 * last];
            hi[l] = col[l][2 * last + 1];
        }
        // Horner in z = exp(-j dk R), walking back to the block anchor
        for (Eigen::Index i = last - 1; i >= start; --i) {
            for (int l = 0; l < Lanes; ++l) {
                const Scalar tr = hr[l] * zr[l] - hi[l] * zi[l] + col[l][2 * i];
                const Scalar ti = hr[l] * zi[l] + hi[l] * zr[l] + col[l][2 * i + 1];
                hr[l] = tr;
                hi[l] = ti;
            }
        }
        for (int l = 0; l < Lanes; ++l) {
            const Scalar ph = -plan.k[start] * slant[l];
            const Scalar ar = std::cos(ph);
            const Scalar ai = std::sin(ph);
            out_re[l] += hr[l] * ar - hi[l] * ai;
            out_im[l] += hr[l] * ai + hi[l] * ar;
        }
    }
}

/// Matched-filter intensity of one cell. The only code path that computes a
/// cell, so serial, parallel and tiled reconstructions agree bit for bit.
template <typename Scalar>
std::complex<Scalar> backproject_cell(const BackprojectionPlan<Scalar>& plan, Scalar cell_range, Scalar cell_azimuth) {
    constexpr int kLanes = 4;
    const Scalar cos_cell = std::cos(cell_azimuth);
    const Scalar sin_cell = std::sin(cell_azimuth);
    const Scalar base = cell_range * cell_range + plan.radius * plan.radius;
    const Scalar cross = Scalar(2) * plan.radius * cell_range;

    auto slant_at = [&](Eigen::Index m) {
        const Scalar cos_diff = plan.cos_theta[m] * cos_cell + plan.sin_theta[m] * sin_cell;
        const Scalar sq = base - cross * cos_diff;
        return std::sqrt(sq > Scalar(0) ? sq : Scalar(0));
    };

    Scalar acc_re = 0;
    Scalar acc_im = 0;
    auto accumulate = [&](Eigen::Index m, Scalar re, Scalar im) {
        if (plan.taper.size() > 0) {
            re *= plan.taper[m];
            im *= plan.taper[m];
        }
        acc_re += re;
        acc_im += im;
    };

    Eigen::Index m = 0;
    for (; m + kLanes <= plan.m_count; m += kLanes) {
        Eigen::Index cols[kLanes];
        Scalar slant[kLanes], re[kLanes], im[kLanes];
        for (int l = 0; l < kLanes; ++l) {
            cols[l] = m + l;
            slant[l] = slant_at(m + l);
        }
        matched_columns<Scalar, kLanes>(plan, cols, slant, re, im);
        for (int l = 0; l < kLanes; ++l) accumulate(m + l, re[l], im[l]);
    }
    for (; m < plan.m_count; ++m) {
        const Scalar slant = slant_at(m);
        Scalar re, im;
        matched_columns<Scalar, 1>(plan, &m, &slant, &re, &im);
        accumulate(m, re, im);
    }
    return {acc_re, acc_im};
}

template <typename Scalar>
void check_dimensions(const DataMatrix<Scalar>& data, const WavenumberVector<Scalar>& k) {
    if (data.samples.rows() != data.params.n_samples || data.samples.cols() != data.aperture.size())
        throw ValidationError("backprojection: data matrix does not match params/aperture");
    if (k.size() != data.samples.rows()) throw ValidationError("backprojection: wavenumber length != n_samples");
    if (data.samples.cols() < 1) throw ValidationError("backprojection: empty aperture");
}

} // namespace detail

/// I(R, theta) = sum over m, i of S(i, m) * conj(A(i, m)): the sum of all
/// elements of S (Hadamard) conj(A) for the cell at (`cell_range`, `cell_azimuth`).
template <typename Scalar>
std::complex<Scalar> reconstruct_cell(const DataMatrix<Scalar>& data, const WavenumberVector<Scalar>& k,
                                      Scalar cell_range, Scalar cell_azimuth,
                                      AzimuthTaper taper = AzimuthTaper::None) {
    detail::check_dimensions(data, k);
    if (!(cell_range >= 0)) throw ValidationError("reconstruct_cell: cell range must be >= 0");
    const detail::BackprojectionPlan<Scalar> plan(data, k, taper);
    return detail::backproject_cell(plan, cell_range, cell_azimuth);
}

/// Backprojection over every cell centre of `grid`. Cells run concurrently;
/// each cell's summation order is fixed.
template <typename Scalar>
Image<Scalar> reconstruct_image(const DataMatrix<Scalar>& data, const PolarGrid<Scalar>& grid,
                                const ReconstructOptions& options = {}) {
    grid.validate();
    data.validate();
    const WavenumberVector<Scalar> k = wavenumber_vector(data.params);
    detail::check_dimensions(data, k);
    const detail::BackprojectionPlan<Scalar> plan(data, k, options.taper);

    Image<Scalar> image{grid, ComplexMatrix<Scalar>(grid.n_r, grid.n_theta)};
    const auto cells = static_cast<std::size_t>(grid.cells());
    // cell index runs along angle first so a chunk shares one range value
    parallel_for(cells, 64, options.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const auto ir = static_cast<Eigen::Index>(c) / grid.n_theta;
            const auto it = static_cast<Eigen::Index>(c) % grid.n_theta;
            image.values(ir, it) = detail::backproject_cell(plan, grid.range_at(ir), grid.angle_at(it));
        }
    });
    return image;
}

/// 20 log10(|I| / max |I|), clamped below at `floor_db`. An all-zero image maps to the floor.
template <typename Scalar>
MatrixX<Scalar> to_db_image(const Image<Scalar>& image, Scalar floor_db) {
    if (!(floor_db < 0)) throw ValidationError("to_db_image: floor_db must be < 0");
    const MatrixX<Scalar> mag = image.values.cwiseAbs();
    const Scalar peak = mag.size() > 0 ? mag.maxCoeff() : Scalar(0);
    if (!(peak > 0)) return MatrixX<Scalar>::Constant(mag.rows(), mag.cols(), floor_db);
    return mag.unaryExpr([peak, floor_db](Scalar v) {
        if (!(v > 0)) return floor_db;
        const Scalar db = Scalar(20) * std::log10(v / peak);
        return db < floor_db ? floor_db : db;
    });
}

} // namespace csar
