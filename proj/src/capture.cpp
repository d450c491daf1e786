#include "csar/io/capture.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "csar/errors.hpp"

namespace csar::io {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
    using U = std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>;
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(p[b]) << (8 * b);
    return std::bit_cast<T>(bits);
}

Aperture<double>::Uniform uniform_description(const Aperture<double>& ap) {
    if (ap.uniform) return *ap.uniform;
    const Eigen::Index m_count = ap.size();
    if (m_count == 1) return {ap.angles[0], 0.0};
    const double start = ap.angles[0];
    const double step = (ap.angles[m_count - 1] - start) / double(m_count - 1);
    for (Eigen::Index m = 0; m < m_count; ++m) {
        const double expected = start + step * double(m);
        if (std::abs(ap.angles[m] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
            throw ValidationError("capture: aperture angles are not uniformly spaced");
    }
    return {start, step};
}

} // namespace

std::vector<std::uint8_t> encode_capture(const DataMatrixd& data, SamplePrecision precision) {
    data.validate();
    const auto n = data.samples.rows();
    const auto m = data.samples.cols();
    if (n > Eigen::Index(UINT32_MAX) || m > Eigen::Index(UINT32_MAX))
        throw ValidationError("capture: dimensions exceed 32-bit header fields");
    const auto uniform = uniform_description(data.aperture);
    const bool narrow = precision == SamplePrecision::Float32;

    std::vector<std::uint8_t> out;
    out.reserve(kCaptureHeaderSize + std::size_t(2 * n * m) * (narrow ? 4 : 8));
    out.insert(out.end(), kCaptureMagic.begin(), kCaptureMagic.end());
    put_le<std::uint16_t>(out, kCaptureVersion);
    put_le<std::uint16_t>(out, narrow ? kFlagFloat32 : 0);
    for (double v : {data.params.fc, data.params.b, data.params.chirp_time, data.params.c, data.aperture.radius,
                     uniform.start, uniform.step})
        put_le<double>(out, v);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m));

    const double* raw = reinterpret_cast<const double*>(data.samples.data());
    for (Eigen::Index i = 0; i < 2 * n * m; ++i) {
        if (narrow)
            put_le<float>(out, static_cast<float>(raw[i]));
        else
            put_le<double>(out, raw[i]);
    }
    return out;
}

DataMatrixd decode_capture(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kCaptureMagic.size() ||
        std::memcmp(bytes.data(), kCaptureMagic.data(), kCaptureMagic.size()) != 0)
        throw FormatError(FormatErrorKind::BadMagic, "capture: bad magic (expected \"CSAR\")");
    if (bytes.size() < 6) throw FormatError(FormatErrorKind::Truncated, "capture: truncated header");
    const auto version = get_le<std::uint16_t>(bytes.data() + 4);
    if (version != kCaptureVersion)
        throw FormatError(FormatErrorKind::UnsupportedVersion,
                          "capture: unsupported format version " + std::to_string(version));
    if (bytes.size() < kCaptureHeaderSize) throw FormatError(FormatErrorKind::Truncated, "capture: truncated header");

    const auto flags = get_le<std::uint16_t>(bytes.data() + 6);
    const bool narrow = (flags & kFlagFloat32) != 0;
    double header[7];
    for (int f = 0; f < 7; ++f) header[f] = get_le<double>(bytes.data() + 8 + 8 * f);
    const auto n = get_le<std::uint32_t>(bytes.data() + 64);
    const auto m = get_le<std::uint32_t>(bytes.data() + 68);

    const std::size_t width = narrow ? 4 : 8;
    const std::size_t expected = std::size_t(2) * n * m * width;
    const std::size_t payload = bytes.size() - kCaptureHeaderSize;
    if (payload < expected)
        throw FormatError(FormatErrorKind::Truncated, "capture: payload truncated (" + std::to_string(payload) +
                                                          " of " + std::to_string(expected) + " bytes)");
    if (payload > expected) throw FormatError(FormatErrorKind::Malformed, "capture: trailing bytes after payload");

    DataMatrixd data;
    data.params.fc = header[0];
    data.params.b = header[1];
    data.params.chirp_time = header[2];
    data.params.c = header[3];
    data.params.n_samples = n;
    data.params.d = 0;
    data.params.max_range = header[1] > 0 ? double(n) * header[3] / (2 * header[1]) : 0.0;
    data.aperture = Aperture<double>::make_uniform(header[4], header[5], header[6], m);
    try {
        data.params.validate();
        data.aperture.validate();
    } catch (const ValidationError& e) {
        throw FormatError(FormatErrorKind::Malformed, std::string("capture: invalid header: ") + e.what());
    }

    data.samples.resize(n, m);
    double* raw = reinterpret_cast<double*>(data.samples.data());
    const std::uint8_t* p = bytes.data() + kCaptureHeaderSize;
    for (std::size_t i = 0; i < std::size_t(2) * n * m; ++i, p += width) {
        const double v = narrow ? double(get_le<float>(p)) : get_le<double>(p);
        if (!std::isfinite(v)) throw FormatError(FormatErrorKind::NonFinite, "capture: non-finite sample in payload");
        raw[i] = v;
    }
    return data;
}

void write_capture(const DataMatrixd& data, const std::filesystem::path& path, SamplePrecision precision) {
    const auto bytes = encode_capture(data, precision);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

DataMatrixd read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return decode_capture(bytes);
}

} // namespace csar::io
