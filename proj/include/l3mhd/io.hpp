#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "l3mhd/scheme.hpp"

namespace l3mhd {

enum class Representation : std::uint32_t { physical = 0, spectral = 1 };

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Field snapshot: magic "L3MHDSNP", u32 version, u32 n, f64 box_length,
/// u32 component count, u32 representation, then little-endian doubles.
/// Physical data is row-major with z fastest; spectral data is (re, im) pairs
/// in the stored half-spectrum order.
void write_snapshot(const std::filesystem::path& path, const std::vector<VectorField>& fields,
                    Representation rep = Representation::physical);

struct Snapshot {
  GridPtr grid;
  Representation rep = Representation::physical;
  std::vector<VectorField> fields;
};
/// Throws FormatError on a bad header or truncated payload. With `grid` the
/// header must match it (GridMismatch otherwise) and the fields share it.
Snapshot read_snapshot(const std::filesystem::path& path, GridPtr grid = nullptr);

/// Writes through a temporary file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// 16 hex digits of the 64-bit FNV-1a digest.
std::string fnv1a_hex(std::string_view bytes);

/// Directory with one snapshot per stored node (v1, H1, v2, H2) and
/// manifest.json holding nodes, params, certificates and checksums.
void export_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                       Representation rep = Representation::physical);
/// Rebuilds windows from the snapshots; each window's caloric pair is
/// recomputed from its node-0 caloric fields. Throws FormatError on a missing
/// file or checksum mismatch.
Trajectory import_trajectory(const std::filesystem::path& dir);

/// printf("%.17g").
std::string format_double(double x);

}  // namespace l3mhd
