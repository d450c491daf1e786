#pragma once

#include <filesystem>
#include <string>

#include "csar/core_model.hpp"

namespace csar::io {

enum class ImageFormat { Pgm, Csv };

ImageFormat parse_image_format(const std::string& name);

/// Writes |I| in dB relative to the peak. PGM maps [floor_db, 0] linearly onto
/// [0, 255]; CSV holds one row per range cell after a "# ..." header line with
/// the grid bounds (angles in degrees).
void export_image(const Imaged& image, ImageFormat format, double floor_db, const std::filesystem::path& path);

void write_pgm(const MatrixX<double>& image_db, double floor_db, const std::filesystem::path& path);
void write_db_csv(const MatrixX<double>& image_db, const PolarGridd& grid, const std::filesystem::path& path);

struct DbImage {
    PolarGridd grid;
    MatrixX<double> db;
};

DbImage read_db_csv(const std::filesystem::path& path);

} // namespace csar::io
