#include "pnt/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

namespace pnt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

fs::path temp_sibling(const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    return tmp;
}

void commit(const fs::path& tmp, const fs::path& path) {
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot write " + path.string());
    }
}

void write_bytes_atomic(const fs::path& path, const char* data, std::size_t n) {
    const fs::path tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(data, static_cast<std::streamsize>(n));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    commit(tmp, path);
}

std::vector<char> encode_f64le(const std::vector<double>& values) {
    std::vector<char> bytes(values.size() * 8);
    for (std::size_t k = 0; k < values.size(); ++k) {
        auto bits = std::bit_cast<std::uint64_t>(values[k]);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        std::memcpy(bytes.data() + 8 * k, &bits, 8);
    }
    return bytes;
}

std::vector<double> read_f64le(const fs::path& path, std::size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("missing payload " + path.string());
    const auto size = fs::file_size(path);
    if (size != expected * 8) {
        throw FormatError("payload " + path.string() + " has " + std::to_string(size) + " bytes, header implies " +
                          std::to_string(expected * 8));
    }
    std::vector<char> bytes(size);
    in.read(bytes.data(), static_cast<std::streamsize>(size));
    if (!in) throw FormatError("cannot read payload " + path.string());
    std::vector<double> values(expected);
    for (std::size_t k = 0; k < expected; ++k) {
        std::uint64_t bits;
        std::memcpy(&bits, bytes.data() + 8 * k, 8);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        values[k] = std::bit_cast<double>(bits);
    }
    return values;
}

json read_header(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("missing header " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("malformed header " + path.string() + ": " + e.what());
    }
}

template <class T>
T header_get(const json& h, const char* key) {
    if (!h.contains(key)) throw FormatError(std::string("header lacks '") + key + "'");
    try {
        return h.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("header field '") + key + "' has the wrong type");
    }
}

void check_version(const json& h, const char* kind) {
    if (header_get<int>(h, "format_version") != kFormatVersion) throw FormatError("unsupported format_version");
    if (header_get<std::string>(h, "kind") != kind) throw FormatError(std::string("header is not a ") + kind);
    if (header_get<std::string>(h, "dtype") != "f64le") throw FormatError("dtype must be f64le");
}

void write_pair(const fs::path& path, const json& header, const std::vector<double>& payload) {
    const ArtifactPaths p = artifact_paths(path);
    const auto bytes = encode_f64le(payload);
    write_bytes_atomic(p.payload, bytes.data(), bytes.size());
    write_text_atomic(p.header, header.dump(2) + "\n");
}

}  // namespace

ArtifactPaths artifact_paths(const fs::path& path) {
    fs::path stem = path;
    if (stem.extension() == ".json" || stem.extension() == ".raw") stem.replace_extension();
    ArtifactPaths p;
    p.header = stem;
    p.header += ".json";
    p.payload = stem;
    p.payload += ".raw";
    return p;
}

void write_text_atomic(const fs::path& path, const std::string& contents) {
    write_bytes_atomic(path, contents.data(), contents.size());
}

void write_field(const fs::path& path, const VectorField2D& field) {
    field.validate();
    const GridSpec& g = field.spec;
    json h;
    h["format_version"] = kFormatVersion;
    h["kind"] = "field";
    h["nx"] = g.nx;
    h["ny"] = g.ny;
    h["voxel_size_m"] = g.voxel_size;
    h["origin_m"] = {g.origin.x(), g.origin.y()};
    h["components"] = 3;
    h["dtype"] = "f64le";
    h["order"] = "row-major, component-innermost";
    h["payload"] = artifact_paths(path).payload.filename().string();
    std::vector<double> payload;
    payload.reserve(field.values.size() * 3);
    for (const Vec3& v : field.values) payload.insert(payload.end(), {v.x(), v.y(), v.z()});
    write_pair(path, h, payload);
}

VectorField2D read_field(const fs::path& path) {
    const ArtifactPaths p = artifact_paths(path);
    const json h = read_header(p.header);
    check_version(h, "field");
    if (header_get<int>(h, "components") != 3) throw FormatError("field must have 3 components");
    GridSpec g;
    g.nx = header_get<int>(h, "nx");
    g.ny = header_get<int>(h, "ny");
    g.voxel_size = header_get<double>(h, "voxel_size_m");
    const auto origin = header_get<std::vector<double>>(h, "origin_m");
    if (origin.size() != 2) throw FormatError("origin_m must have two entries");
    g.origin = Vec2(origin[0], origin[1]);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad grid in header: ") + e.what());
    }
    const auto values = read_f64le(p.payload, g.size() * 3);
    VectorField2D field(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        field.values[k] = Vec3(values[3 * k], values[3 * k + 1], values[3 * k + 2]);
    }
    try {
        field.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(p.payload.string() + ": " + e.what());
    }
    return field;
}

void write_sinogram_set(const fs::path& path, const SinogramSet& data) {
    data.validate();
    const ScanGeometry& g = data.geometry;
    json h;
    h["format_version"] = kFormatVersion;
    h["kind"] = "sinogram_set";
    h["n_angles"] = g.n_angles;
    h["n_detectors"] = g.n_detectors;
    h["angle_start_deg"] = g.angle_start / kDeg;
    h["angle_step_deg"] = g.angle_step / kDeg;
    // radians as well, so a round trip does not depend on degree conversion
    h["angle_start_rad"] = g.angle_start;
    h["angle_step_rad"] = g.angle_step;
    h["detector_pitch_m"] = g.detector_pitch;
    h["neutron_speed_mps"] = g.neutron_speed;
    h["planes"] = 9;
    h["plane_order"] = "(j,k) row-major";
    h["dtype"] = "f64le";
    h["payload"] = artifact_paths(path).payload.filename().string();
    std::vector<double> payload;
    payload.reserve(9 * g.n_rays());
    for (const auto& plane : data.planes) payload.insert(payload.end(), plane.begin(), plane.end());
    write_pair(path, h, payload);
}

SinogramSet read_sinogram_set(const fs::path& path) {
    const ArtifactPaths p = artifact_paths(path);
    const json h = read_header(p.header);
    check_version(h, "sinogram_set");
    if (header_get<int>(h, "planes") != 9) throw FormatError("sinogram set must have 9 planes");
    ScanGeometry g;
    g.n_angles = header_get<int>(h, "n_angles");
    g.n_detectors = header_get<int>(h, "n_detectors");
    g.angle_start = h.contains("angle_start_rad") ? header_get<double>(h, "angle_start_rad")
                                                  : header_get<double>(h, "angle_start_deg") * kDeg;
    g.angle_step = h.contains("angle_step_rad") ? header_get<double>(h, "angle_step_rad")
                                                : header_get<double>(h, "angle_step_deg") * kDeg;
    g.detector_pitch = header_get<double>(h, "detector_pitch_m");
    g.neutron_speed = header_get<double>(h, "neutron_speed_mps");
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bad geometry in header: ") + e.what());
    }
    const std::size_t n = g.n_rays();
    const auto values = read_f64le(p.payload, 9 * n);
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        throw FormatError(p.payload.string() + ": non-finite value in payload");
    }
    SinogramSet data;
    data.geometry = g;
    for (std::size_t q = 0; q < 9; ++q) {
        data.planes[q].assign(values.begin() + static_cast<std::ptrdiff_t>(q * n),
                              values.begin() + static_cast<std::ptrdiff_t>((q + 1) * n));
    }
    return data;
}

std::string artifact_kind(const fs::path& path) {
    return header_get<std::string>(read_header(artifact_paths(path).header), "kind");
}

void write_csv(const fs::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw std::invalid_argument("csv row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

}  // namespace pnt
