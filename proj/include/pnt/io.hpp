#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnt/grid.hpp"
#include "pnt/sinogram.hpp"

namespace pnt {

/// Malformed header, missing payload, or a size that disagrees with the header.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

/// Both artifact kinds are stored as a JSON header `<stem>.json` next to a
/// raw little-endian float64 payload `<stem>.raw`. Any of `stem`,
/// `stem.json` or `stem.raw` names the pair.
struct ArtifactPaths {
    std::filesystem::path header;
    std::filesystem::path payload;
};
ArtifactPaths artifact_paths(const std::filesystem::path& path);

/// Row-major (x fastest), component innermost.
void write_field(const std::filesystem::path& path, const VectorField2D& field);
VectorField2D read_field(const std::filesystem::path& path);

/// Nine planes in (row, col) row-major order, each angle-major.
void write_sinogram_set(const std::filesystem::path& path, const SinogramSet& data);
SinogramSet read_sinogram_set(const std::filesystem::path& path);

/// "field" or "sinogram_set", read from the header's `kind` key.
std::string artifact_kind(const std::filesystem::path& path);

/// Writes `contents` to a temporary sibling and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

/// Comma-separated table with a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace pnt
