#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "csar/core_model.hpp"

namespace csar::io {

/// Raw capture file layout, little-endian throughout:
///
///   offset  size  field
///        0     4  magic "CSAR"
///        4     2  format_version (u16)
///        6     2  flags (u16; bit 0 set = 32-bit float payload)
///        8    56  fc, b, chirp_time, c, track_radius, theta_start, theta_step (f64, angles in rad)
///       64     4  n_samples (u32)
///       68     4  n_angles (u32)
///       72     -  payload: N x M complex, column-major, interleaved (re, im)
inline constexpr std::string_view kCaptureMagic = "CSAR";
inline constexpr std::uint16_t kCaptureVersion = 1;
inline constexpr std::uint16_t kFlagFloat32 = 0x1;
inline constexpr std::size_t kCaptureHeaderSize = 72;

enum class SamplePrecision { Float32, Float64 };

std::vector<std::uint8_t> encode_capture(const DataMatrixd& data, SamplePrecision precision);
DataMatrixd decode_capture(const std::vector<std::uint8_t>& bytes);

void write_capture(const DataMatrixd& data, const std::filesystem::path& path,
                   SamplePrecision precision = SamplePrecision::Float32);
DataMatrixd read_capture(const std::filesystem::path& path);

} // namespace csar::io
