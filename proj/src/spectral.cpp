#include "fcct/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include "fcct/detail/format.hpp"
#include "fcct/errors.hpp"

namespace fcct {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Complex unit_phase(double turns) {
    return Complex{std::cos(two_pi * turns), std::sin(two_pi * turns)};
}

double node_distance_sq(const SpectralPoint& a, const SpectralPoint& b) {
    return std::norm(a.x - b.x) + std::norm(a.y - b.y) + std::norm(a.z - b.z);
}

void check_not_degenerate(const NodeGrid& grid) {
    if (grid.n > 16) return; // quadratic scan; larger grids skip the check
    constexpr double threshold_sq = 1e-9 * 1e-9;
    const auto& nodes = grid.nodes;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            if (node_distance_sq(nodes[a].xyz, nodes[b].xyz) < threshold_sq) {
                const auto& ia = nodes[a].ijk;
                const auto& ib = nodes[b].ijk;
                throw DegenerateNodes(
                    "nodes (" + std::to_string(ia[0]) + "," +
                    std::to_string(ia[1]) + "," + std::to_string(ia[2]) +
                    ") and (" + std::to_string(ib[0]) + "," +
                    std::to_string(ib[1]) + "," + std::to_string(ib[2]) +
                    ") map to the same spectral point for n=" +
                    std::to_string(grid.n));
            }
}

} // namespace

SkewParams SkewParams::canonical() { return SkewParams{0.125, 0.0, 0.375}; }

SkewParams SkewParams::child(int ir, int is, int it) const {
    return SkewParams{(r + ir) / 2.0, (s + is) / 2.0, (t + it) / 2.0};
}

std::string encode_param(double value) {
    if (value == 0.0) return "0";
    // Continued-fraction search for an exactly representable small rational.
    double x = value;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int step = 0; step < 40; ++step) {
        const double fa = std::floor(x);
        if (std::abs(fa) > 1e15) break;
        const long long a = static_cast<long long>(fa);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > 1000000 || q2 < 0) break;
        if (q2 != 0 &&
            static_cast<double>(p2) / static_cast<double>(q2) == value) {
            if (q2 == 1) return std::to_string(p2);
            return std::to_string(p2) + "/" + std::to_string(q2);
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = x - fa;
        if (frac == 0.0) break;
        x = 1.0 / frac;
    }
    return detail::g17(value);
}

std::string SkewParams::encode() const {
    return encode_param(r) + "," + encode_param(s) + "," + encode_param(t);
}

double parse_param(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty grid offset");
    const auto slash = text.find('/');
    std::size_t used = 0;
    double value = 0.0;
    try {
        if (slash != std::string::npos) {
            std::size_t used_den = 0;
            const double num = std::stod(text.substr(0, slash), &used);
            const std::string den_text = text.substr(slash + 1);
            const double den = std::stod(den_text, &used_den);
            if (used != slash || used_den != den_text.size() || den == 0.0)
                throw std::invalid_argument("");
            return num / den;
        }
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse grid offset '" + text + "'");
    }
    if (used != text.size())
        throw std::invalid_argument("cannot parse grid offset '" + text + "'");
    return value;
}

SkewParams parse_params(const std::string& text) {
    const auto first = text.find(',');
    const auto second = first == std::string::npos
                            ? std::string::npos
                            : text.find(',', first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        text.find(',', second + 1) != std::string::npos)
        throw std::invalid_argument("grid offsets must be 'r,s,t', got '" +
                                    text + "'");
    return SkewParams{parse_param(text.substr(0, first)),
                      parse_param(text.substr(first + 1, second - first - 1)),
                      parse_param(text.substr(second + 1))};
}

Complex sigma(double r, double s, double t) {
    return 0.25 * (unit_phase(r) + unit_phase(s - r) + unit_phase(t - s) +
                   unit_phase(-t));
}

Complex tau(double r, double s, double t) {
    return (unit_phase(-s) + unit_phase(s) + unit_phase(r - t) +
            unit_phase(-r + s - t) + unit_phase(-r + t) +
            unit_phase(r - s + t)) /
           6.0;
}

Complex rho(double r, double s, double t) {
    return 0.25 * (unit_phase(-r) + unit_phase(r - s) + unit_phase(s - t) +
                   unit_phase(t));
}

NodeGrid common_zeros(int n) {
    if (n < 1) throw std::invalid_argument("common_zeros: n must be >= 1");
    NodeGrid grid;
    grid.n = n;
    grid.params = SkewParams::canonical();
    grid.nodes.reserve(static_cast<std::size_t>(n) * n * n);
    // u ranges over the 8n-th roots of unity with residue 1 mod 8, v over the
    // n-th roots, w over the 8n-th roots with residue 3 mod 8.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                UVWPoint p{unit_phase(double(1 + 8 * i) / (8.0 * n)),
                           unit_phase(double(j) / n),
                           unit_phase(double(3 + 8 * k) / (8.0 * n))};
                grid.nodes.push_back(GridNode{{i, j, k}, p, coords_from_uvw(p)});
            }
    return grid;
}

NodeGrid skew_nodes(int n, const SkewParams& p) {
    if (n < 1) throw std::invalid_argument("skew_nodes: n must be >= 1");
    NodeGrid grid;
    grid.n = n;
    grid.params = p;
    grid.nodes.reserve(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const TorusPoint t = TorusPoint::wrapped(
                    (p.r + i) / n, (p.s + j) / n, (p.t + k) / n);
                const UVWPoint q = UVWPoint::from_torus(t);
                grid.nodes.push_back(GridNode{{i, j, k}, q, coords_from_uvw(q)});
            }
    check_not_degenerate(grid);
    return grid;
}

std::vector<Index3> shift_vectors(const WeylGroup& g) {
    std::set<Index3> out;
    for (const Index3 e : {Index3{1, 0, 0}, Index3{0, 1, 0}, Index3{0, 0, 1}})
        for (const auto& v : orbit(e, g)) out.insert(v);
    return {out.begin(), out.end()};
}

void export_nodes_csv(const NodeGrid& grid, std::ostream& out) {
    out << "i,j,k,x,y,z\n";
    for (const auto& node : grid.nodes) {
        const auto c = real_coords(node.xyz);
        out << node.ijk[0] << ',' << node.ijk[1] << ',' << node.ijk[2] << ','
            << detail::g17(c[0]) << ',' << detail::g17(c[1]) << ','
            << detail::g17(c[2]) << '\n';
    }
}

} // namespace fcct
