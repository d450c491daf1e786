#include "csar/io/image_export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "csar/backprojection.hpp"
#include "csar/errors.hpp"

namespace csar::io {
namespace {

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view s, const std::string& what) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw FormatError(FormatErrorKind::Malformed, "image csv: bad " + what + " \"" + std::string(s) + "\"");
    return v;
}

} // namespace

ImageFormat parse_image_format(const std::string& name) {
    if (name == "pgm") return ImageFormat::Pgm;
    if (name == "csv") return ImageFormat::Csv;
    throw ValidationError("unknown image format \"" + name + "\" (expected pgm or csv)");
}

void write_pgm(const MatrixX<double>& image_db, double floor_db, const std::filesystem::path& path) {
    if (!(floor_db < 0)) throw ValidationError("pgm: floor_db must be < 0");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P5\n" << image_db.cols() << ' ' << image_db.rows() << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(image_db.cols()));
    for (Eigen::Index i = 0; i < image_db.rows(); ++i) {
        for (Eigen::Index j = 0; j < image_db.cols(); ++j) {
            const double t = (image_db(i, j) - floor_db) / -floor_db;
            const double px = std::round(255.0 * std::clamp(t, 0.0, 1.0));
            row[std::size_t(j)] = static_cast<unsigned char>(px);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_db_csv(const MatrixX<double>& image_db, const PolarGridd& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# r_min_m=" << shortest(grid.r_min) << ",r_max_m=" << shortest(grid.r_max) << ",n_r=" << grid.n_r
        << ",theta_min_deg=" << shortest(rad2deg(grid.theta_min)) << ",theta_max_deg="
        << shortest(rad2deg(grid.theta_max)) << ",n_theta=" << grid.n_theta << '\n';
    for (Eigen::Index i = 0; i < image_db.rows(); ++i) {
        for (Eigen::Index j = 0; j < image_db.cols(); ++j) {
            if (j) out << ',';
            out << shortest(image_db(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void export_image(const Imaged& image, ImageFormat format, double floor_db, const std::filesystem::path& path) {
    const MatrixX<double> db = to_db_image(image, floor_db);
    if (format == ImageFormat::Pgm)
        write_pgm(db, floor_db, path);
    else
        write_db_csv(db, image.grid, path);
}

DbImage read_db_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw FormatError(FormatErrorKind::Malformed, "image csv: missing header line");

    DbImage img;
    int seen = 0;
    std::stringstream header(line.substr(2));
    std::string field;
    while (std::getline(header, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw FormatError(FormatErrorKind::Malformed, "image csv: bad header field");
        const std::string key = field.substr(0, eq);
        const double v = parse_double(std::string_view(field).substr(eq + 1), key);
        if (key == "r_min_m") img.grid.r_min = v;
        else if (key == "r_max_m") img.grid.r_max = v;
        else if (key == "n_r") img.grid.n_r = static_cast<Eigen::Index>(v);
        else if (key == "theta_min_deg") img.grid.theta_min = deg2rad(v);
        else if (key == "theta_max_deg") img.grid.theta_max = deg2rad(v);
        else if (key == "n_theta") img.grid.n_theta = static_cast<Eigen::Index>(v);
        else throw FormatError(FormatErrorKind::Malformed, "image csv: unknown header key " + key);
        ++seen;
    }
    if (seen != 6) throw FormatError(FormatErrorKind::Malformed, "image csv: incomplete header");
    try {
        img.grid.validate();
    } catch (const ValidationError& e) {
        throw FormatError(FormatErrorKind::Malformed, std::string("image csv: ") + e.what());
    }

    img.db.resize(img.grid.n_r, img.grid.n_theta);
    for (Eigen::Index i = 0; i < img.grid.n_r; ++i) {
        if (!std::getline(in, line)) throw FormatError(FormatErrorKind::Truncated, "image csv: missing rows");
        std::stringstream row(line);
        Eigen::Index j = 0;
        while (std::getline(row, field, ',')) {
            if (j >= img.grid.n_theta) throw FormatError(FormatErrorKind::Malformed, "image csv: row too long");
            img.db(i, j++) = parse_double(field, "value");
        }
        if (j != img.grid.n_theta) throw FormatError(FormatErrorKind::Truncated, "image csv: row too short");
    }
    return img;
}

} // namespace csar::io
