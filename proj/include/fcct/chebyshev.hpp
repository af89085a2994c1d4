#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "fcct/weyl_s4.hpp"

namespace fcct {

using Complex = std::complex<double>;

// A point on the unit 3-torus, angles in turns. Construction wraps each
// coordinate into [0, 1); values within 1e-15 of the upper boundary snap to 0
// so e^{2 pi i theta} stays stable across the period seam.
struct TorusPoint {
    std::array<double, 3> theta{0.0, 0.0, 0.0};

    static TorusPoint wrapped(double a, double b, double c);
};

// Image of a torus point under (u,v,w) = e^{2 pi i theta}. Off-torus values
// (non-unit modulus) are allowed wherever a UVWPoint is consumed.
struct UVWPoint {
    Complex u{1.0}, v{1.0}, w{1.0};

    static UVWPoint from_torus(const TorusPoint& t);
};

// A point in the spectral coordinates (x, y, z). If it was produced from a
// (u,v,w) point the origin is kept so evaluation can route back through it.
struct SpectralPoint {
    Complex x, y, z;
    std::optional<UVWPoint> origin;
};

// Linear combination of canonical-index basis polynomials with weights that
// are exact multiples of 1/|W|. Stored as integer multiplicities over 24.
struct OrbitCombination {
    static constexpr int denominator = 24;

    struct Term {
        Index3 index;     // canonical representative
        int multiplicity; // weight = multiplicity / denominator
    };

    std::vector<Term> terms; // sorted by index, no duplicates

    double weight(std::size_t i) const {
        return static_cast<double>(terms[i].multiplicity) / denominator;
    }
    int multiplicity_sum() const;
};

// (1/|W|) sum_w exp(2 pi i (w k)^T theta). Equals 1 when k = 0 or theta = 0.
Complex symmetrized_exponential(const Index3& k, const TorusPoint& theta,
                                const WeylGroup& g);

// Same polynomial as a Laurent sum: (1/|W|) sum_w u^{(wk)_1} v^{(wk)_2} w^{(wk)_3}.
// Valid off the torus; on the torus it agrees with symmetrized_exponential.
Complex cheb_eval_uvw(const Index3& k, const UVWPoint& p, const WeylGroup& g);

// Spectral coordinates of a uvw point: x, y, z are the degree-one basis
// polynomials evaluated at p. On the torus conj(x) = z and y is real.
SpectralPoint coords_from_uvw(const UVWPoint& p);

// Rotated real coordinates ((x+z)/2, Re y, (x-z)/(2i)) of a torus-image
// point. Imaginary residues below 1e-10 are checked and discarded; residues
// above 1e-8 raise std::invalid_argument (the point is not a torus image).
std::array<double, 3> real_coords(const SpectralPoint& s);

// Product linearization: T_k * T_l = (1/|W|) sum_w T_{k + w l}, returned as
// canonical indices with exact rational weights summing to 1.
OrbitCombination recurrence_product(const Index3& k, const Index3& l,
                                    const WeylGroup& g);

struct ComposeResult {
    Index3 composite;     // k * l * e_axis
    double max_deviation; // worst error of the semigroup identity over pts
};

// Checks T_{k l e_j}(p) = T_{k e_j}(u^l, v^l, w^l) together with the
// coordinate identity behind it, over the given sample points. axis is 1-based
// (1, 2 or 3); k, l >= 0.
ComposeResult compose_scaled(int k, int l, int axis,
                             std::span<const TorusPoint> pts,
                             const WeylGroup& g);

// Evaluation through spectral coordinates: for degree-one indices returns the
// matching coordinate of s directly; otherwise routes through the uvw origin.
// Throws std::invalid_argument if that origin is absent and needed.
Complex cheb_eval_xyz(const Index3& k, const SpectralPoint& s,
                      const WeylGroup& g);

} // namespace fcct
