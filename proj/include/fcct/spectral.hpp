#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fcct/chebyshev.hpp"
#include "fcct/weyl_s4.hpp"

namespace fcct {

// Skew offsets (r, s, t) of a node grid, in turns.
struct SkewParams {
    double r = 0.0, s = 0.0, t = 0.0;

    // The offsets that make the grid coincide with the lattice common zeros.
    static SkewParams canonical();

    // Offsets of the half-size child grid in octant (ir, is, it).
    SkewParams child(int ir, int is, int it) const;

    // Stable text encoding used for cache keys and file headers: exact small
    // rationals as "a/b", everything else as %.17g.
    std::string encode() const;

    bool operator==(const SkewParams&) const = default;
};

std::string encode_param(double value);

// Inverse of encode_param: accepts "a/b" rationals and plain decimals.
// Throws std::invalid_argument on anything else.
double parse_param(const std::string& text);

// Parses "r,s,t" using parse_param for each field.
SkewParams parse_params(const std::string& text);

// Degree-one symmetrized exponentials as closed trigonometric expressions of
// the offsets; sigma doubles as the x coordinate of the base node.
Complex sigma(double r, double s, double t);
Complex tau(double r, double s, double t);
Complex rho(double r, double s, double t);

struct GridNode {
    Index3 ijk;        // grid index, each in [0, n)
    UVWPoint uvw;
    SpectralPoint xyz; // carries uvw as origin
};

// n^3 nodes in lexicographic ijk order (last index fastest).
struct NodeGrid {
    int n = 0;
    SkewParams params;
    std::vector<GridNode> nodes;

    const GridNode& at(int i, int j, int k) const {
        return nodes[static_cast<std::size_t>((i * n + j)) * n + k];
    }
};

// The n^3 common zeros of the three shifted degree-n generators
// (u-roots 8n-th roots of unity at residue 1, v-roots n-th, w-roots 8n-th at
// residue 3). Built independently from skew_nodes for cross-checking.
NodeGrid common_zeros(int n);

// Skew grid node(i,j,k) = exp(2 pi i ((r+i)/n, (s+j)/n, (t+k)/n)).
// Throws DegenerateNodes if two nodes land on the same spectral point
// (pairwise xyz distance below 1e-9; checked for n <= 16).
NodeGrid skew_nodes(int n, const SkewParams& p);

// Exponent vectors appearing in the degree-one recurrences: the orbits of the
// three unit indices. 14 vectors; the nearest-neighbor directions of the
// face-centered cubic lattice.
std::vector<Index3> shift_vectors(const WeylGroup& g);

// CSV of node real coordinates: header "i,j,k,x,y,z", one row per node in
// lexicographic order, numbers printed with %.17g.
void export_nodes_csv(const NodeGrid& grid, std::ostream& out);

} // namespace fcct
