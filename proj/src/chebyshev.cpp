#include "fcct/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace fcct {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Complex ipow(Complex base, int e) {
    if (e < 0) {
        base = 1.0 / base;
        e = -e;
    }
    Complex acc{1.0, 0.0};
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

} // namespace

TorusPoint TorusPoint::wrapped(double a, double b, double c) {
    TorusPoint t;
    const std::array<double, 3> raw{a, b, c};
    for (int i = 0; i < 3; ++i) {
        double f = raw[i] - std::floor(raw[i]);
        if (f >= 1.0 - 1e-15) f = 0.0;
        t.theta[i] = f;
    }
    return t;
}

UVWPoint UVWPoint::from_torus(const TorusPoint& t) {
    auto unit = [](double angle) {
        return Complex{std::cos(two_pi * angle), std::sin(two_pi * angle)};
    };
    return UVWPoint{unit(t.theta[0]), unit(t.theta[1]), unit(t.theta[2])};
}

int OrbitCombination::multiplicity_sum() const {
    int acc = 0;
    for (const auto& t : terms) acc += t.multiplicity;
    return acc;
}

Complex symmetrized_exponential(const Index3& k, const TorusPoint& theta,
                                const WeylGroup& g) {
    Complex acc{0.0, 0.0};
    for (const auto& w : g.elements) {
        const Index3 wk = w.apply(k);
        const double phase =
            two_pi * (wk[0] * theta.theta[0] + wk[1] * theta.theta[1] +
                      wk[2] * theta.theta[2]);
        acc += Complex{std::cos(phase), std::sin(phase)};
    }
    return acc / static_cast<double>(g.order());
}

Complex cheb_eval_uvw(const Index3& k, const UVWPoint& p, const WeylGroup& g) {
    Complex acc{0.0, 0.0};
    for (const auto& w : g.elements) {
        const Index3 wk = w.apply(k);
        acc += ipow(p.u, wk[0]) * ipow(p.v, wk[1]) * ipow(p.w, wk[2]);
    }
    return acc / static_cast<double>(g.order());
}

SpectralPoint coords_from_uvw(const UVWPoint& p) {
    const Complex u = p.u, v = p.v, w = p.w;
    const Complex ui = 1.0 / u, vi = 1.0 / v, wi = 1.0 / w;
    SpectralPoint s;
    s.x = 0.25 * (u + ui * v + vi * w + wi);
    s.y = (vi + v + u * wi + ui * v * wi + ui * w + u * vi * w) / 6.0;
    s.z = 0.25 * (ui + u * vi + v * wi + w);
    s.origin = p;
    return s;
}

std::array<double, 3> real_coords(const SpectralPoint& s) {
    const Complex xt = 0.5 * (s.x + s.z);
    const Complex zt = (s.x - s.z) / Complex{0.0, 2.0};
    const double residue = std::max(
        {std::abs(xt.imag()), std::abs(s.y.imag()), std::abs(zt.imag())});
    if (residue > 1e-8)
        throw std::invalid_argument(
            "real_coords: imaginary residue " + std::to_string(residue) +
            " exceeds 1e-8; point is not the image of a torus point");
    return {xt.real(), s.y.real(), zt.real()};
}

OrbitCombination recurrence_product(const Index3& k, const Index3& l,
                                    const WeylGroup& g) {
    std::map<Index3, int> counts;
    for (const auto& w : g.elements) {
        const Index3 wl = w.apply(l);
        const Index3 sum{k[0] + wl[0], k[1] + wl[1], k[2] + wl[2]};
        ++counts[canonical_index(sum, g)];
    }
    OrbitCombination combo;
    combo.terms.reserve(counts.size());
    for (const auto& [idx, mult] : counts)
        combo.terms.push_back({idx, mult});
    return combo;
}

ComposeResult compose_scaled(int k, int l, int axis,
                             std::span<const TorusPoint> pts,
                             const WeylGroup& g) {
    if (axis < 1 || axis > 3)
        throw std::invalid_argument("compose_scaled: axis must be 1, 2 or 3");
    if (k < 0 || l < 0)
        throw std::invalid_argument("compose_scaled: factors must be >= 0");

    Index3 unit{0, 0, 0};
    unit[axis - 1] = 1;
    const Index3 outer{k * unit[0], k * unit[1], k * unit[2]};
    const Index3 composite{k * l * unit[0], k * l * unit[1], k * l * unit[2]};

    double worst = 0.0;
    for (const auto& t : pts) {
        const UVWPoint p = UVWPoint::from_torus(t);
        const UVWPoint pl{ipow(p.u, l), ipow(p.v, l), ipow(p.w, l)};

        const Complex lhs = cheb_eval_uvw(composite, p, g);
        const Complex rhs = cheb_eval_uvw(outer, pl, g);
        worst = std::max(worst, std::abs(lhs - rhs));

        // The scaled point's coordinates are the degree-l polynomials at p,
        // which is what makes the right side a composition.
        const SpectralPoint sc = coords_from_uvw(pl);
        worst = std::max(worst, std::abs(sc.x - cheb_eval_uvw({l, 0, 0}, p, g)));
        worst = std::max(worst, std::abs(sc.y - cheb_eval_uvw({0, l, 0}, p, g)));
        worst = std::max(worst, std::abs(sc.z - cheb_eval_uvw({0, 0, l}, p, g)));
    }
    return ComposeResult{composite, worst};
}

Complex cheb_eval_xyz(const Index3& k, const SpectralPoint& s,
                      const WeylGroup& g) {
    const Index3 canon = canonical_index(k, g);
    if (canon == Index3{0, 0, 0}) return Complex{1.0, 0.0};
    if (canon == canonical_index({1, 0, 0}, g)) return s.x;
    if (canon == canonical_index({0, 1, 0}, g)) return s.y;
    if (canon == canonical_index({0, 0, 1}, g)) return s.z;
    if (!s.origin)
        throw std::invalid_argument(
            "cheb_eval_xyz: index is not degree one and the point carries no "
            "uvw origin");
    return cheb_eval_uvw(k, *s.origin, g);
}

} // namespace fcct
