#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fcct/transform.hpp"

namespace fcct {

// Real voxel samples on an n^3 grid, lexicographic layout (same as
// SignalTensor). metadata is free-form string pairs carried through io.
struct VoxelGrid {
    int n = 0;
    std::vector<double> values;
    std::map<std::string, std::string> metadata;

    std::int64_t size() const { return static_cast<std::int64_t>(n) * n * n; }
};

enum class GridFormat { json, raw };

// Picks json for a ".json" extension, raw otherwise.
GridFormat format_for_path(const std::filesystem::path& path);

// json: one object {"n": ..., "values": [...], "metadata": {...}}.
// raw: little-endian f64 payload plus a ".json" sidecar holding n and
// metadata. Throws MalformedFile / SizeMismatch(io) on structural problems.
VoxelGrid load_grid(const std::filesystem::path& path, GridFormat fmt);
void save_grid(const VoxelGrid& grid, const std::filesystem::path& path,
               GridFormat fmt);

// Identity complexification: same layout, zero imaginary parts.
SignalTensor z_transform(const VoxelGrid& grid);

// Inverse reindexing: real parts of the signal. Exact round trip with
// z_transform.
VoxelGrid grid_from_signal(const SignalTensor& s);

// Deterministic test solid for n >= 8: axis-aligned blade of length about
// 0.7n with cross-section max(1, n/8)^2, a one-slab cross-guard three blades
// wide, and a short hilt. Values are exactly 0 or 1; occupancy stays in
// (0, 0.5). Throws std::invalid_argument for n < 8.
VoxelGrid synthetic_sword(int n);

// CSV "i,j,k,x,y,z,re,im,magnitude": node indices, node real coordinates,
// spectrum value. Lexicographic row order, %.17g numbers. A header comment
// line carries n and the grid offsets so the file round-trips.
void export_spectrum(const Spectrum& spec, const NodeGrid& nodes,
                     std::ostream& out);
Spectrum load_spectrum_csv(const std::filesystem::path& path);

// CSV "dx,dy,dz" of the 14 nearest-neighbor shift vectors of the
// face-centered cubic lattice.
void export_geometry(const WeylGroup& g, std::ostream& out);

// FNV-1a 64 over the '0'/'1' occupancy bytes in lexicographic order.
std::uint64_t occupancy_checksum(const VoxelGrid& grid);

} // namespace fcct
