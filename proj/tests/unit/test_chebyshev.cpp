#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fcct/chebyshev.hpp"
#include "fcct/weyl_s4.hpp"

using namespace fcct;

namespace {

std::vector<TorusPoint> sample_points(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<TorusPoint> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i)
        pts.push_back(TorusPoint::wrapped(unit(rng), unit(rng), unit(rng)));
    return pts;
}

const std::vector<Index3> kSampleIndices{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 1, 1},
    {2, 1, 0}, {3, 0, 2}, {-2, 1, 4}, {5, -3, 1}, {0, 4, 0}, {2, 2, 2},
};

} // namespace

TEST_CASE("torus wrapping lands in the half open unit cube") {
    const TorusPoint t = TorusPoint::wrapped(1.25, -0.25, 3.0);
    CHECK(t.theta[0] == doctest::Approx(0.25));
    CHECK(t.theta[1] == doctest::Approx(0.75));
    CHECK(t.theta[2] == doctest::Approx(0.0));

    // The seam snaps down instead of returning 1 - epsilon.
    const TorusPoint seam = TorusPoint::wrapped(0.0, 1.0 - 1e-16, -1e-16);
    CHECK(seam.theta[1] == 0.0);
    CHECK(seam.theta[2] == 0.0);
}

TEST_CASE("exponential and laurent evaluation agree on the torus") {
    const auto& g = WeylGroup::s4();
    for (const auto& t : sample_points(25, 101)) {
        const UVWPoint p = UVWPoint::from_torus(t);
        for (const auto& k : kSampleIndices) {
            const Complex a = symmetrized_exponential(k, t, g);
            const Complex b = cheb_eval_uvw(k, p, g);
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("index zero evaluates to one everywhere") {
    const auto& g = WeylGroup::s4();
    for (const auto& t : sample_points(10, 11)) {
        CHECK(std::abs(symmetrized_exponential({0, 0, 0}, t, g) - 1.0) < 1e-13);
        const UVWPoint p = UVWPoint::from_torus(t);
        CHECK(std::abs(cheb_eval_uvw({0, 0, 0}, p, g) - 1.0) < 1e-13);
    }
    CHECK(std::abs(symmetrized_exponential({2, 1, 0}, TorusPoint{}, g) - 1.0) <
          1e-13);
}

TEST_CASE("coordinates are the degree one evaluations") {
    const auto& g = WeylGroup::s4();
    for (const auto& t : sample_points(20, 23)) {
        const UVWPoint p = UVWPoint::from_torus(t);
        const SpectralPoint s = coords_from_uvw(p);
        CHECK(std::abs(s.x - cheb_eval_uvw({1, 0, 0}, p, g)) < 1e-13);
        CHECK(std::abs(s.y - cheb_eval_uvw({0, 1, 0}, p, g)) < 1e-13);
        CHECK(std::abs(s.z - cheb_eval_uvw({0, 0, 1}, p, g)) < 1e-13);

        // On the torus z is the conjugate of x and y is real.
        CHECK(std::abs(std::conj(s.x) - s.z) < 1e-13);
        CHECK(std::abs(s.y.imag()) < 1e-13);
    }
}

TEST_CASE("all three coordinates vanish at the base angles") {
    const TorusPoint t = TorusPoint::wrapped(1.0 / 8, 0.0, 3.0 / 8);
    const SpectralPoint s = coords_from_uvw(UVWPoint::from_torus(t));
    CHECK(std::abs(s.x) < 1e-15);
    CHECK(std::abs(s.y) < 1e-15);
    CHECK(std::abs(s.z) < 1e-15);

    const auto r = real_coords(s);
    CHECK(std::abs(r[0]) < 1e-15);
    CHECK(std::abs(r[1]) < 1e-15);
    CHECK(std::abs(r[2]) < 1e-15);
}

TEST_CASE("real coordinates reject points far off the torus") {
    SpectralPoint bad;
    bad.x = Complex{0.3, 0.0};
    bad.y = Complex{0.1, 0.5};
    bad.z = Complex{0.3, 0.0};
    CHECK_THROWS_AS((void)real_coords(bad), std::invalid_argument);

    SpectralPoint ok;
    ok.x = Complex{0.25, 0.125};
    ok.y = Complex{-0.5, 1e-12};
    ok.z = Complex{0.25, -0.125};
    const auto r = real_coords(ok);
    CHECK(r[0] == doctest::Approx(0.25));
    CHECK(r[1] == doctest::Approx(-0.5));
    CHECK(r[2] == doctest::Approx(0.125));
}

TEST_CASE("product linearization has rational weights that sum to one") {
    const auto& g = WeylGroup::s4();
    const std::vector<std::pair<Index3, Index3>> cases{
        {{1, 0, 0}, {1, 0, 0}}, {{1, 0, 0}, {0, 1, 0}}, {{0, 1, 0}, {0, 0, 1}},
        {{2, 1, 0}, {1, 0, 0}}, {{1, 1, 1}, {1, 1, 1}}, {{3, 0, 1}, {0, 2, 0}},
    };
    for (const auto& [k, l] : cases) {
        const OrbitCombination combo = recurrence_product(k, l, g);
        CHECK(combo.multiplicity_sum() == OrbitCombination::denominator);
        for (std::size_t i = 0; i < combo.terms.size(); ++i) {
            CHECK(combo.terms[i].multiplicity > 0);
            CHECK(canonical_index(combo.terms[i].index, g) ==
                  combo.terms[i].index);
            if (i > 0) CHECK(combo.terms[i - 1].index < combo.terms[i].index);
        }
    }
}

TEST_CASE("product linearization reproduces the pointwise product") {
    const auto& g = WeylGroup::s4();
    const auto pts = sample_points(15, 37);
    const std::vector<std::pair<Index3, Index3>> cases{
        {{1, 0, 0}, {1, 0, 0}}, {{1, 0, 0}, {0, 0, 1}}, {{0, 1, 0}, {0, 1, 0}},
        {{2, 1, 0}, {1, 1, 1}}, {{-1, 2, 0}, {0, 1, 3}},
    };
    for (const auto& [k, l] : cases) {
        const OrbitCombination kl = recurrence_product(k, l, g);
        const OrbitCombination lk = recurrence_product(l, k, g);
        for (const auto& t : pts) {
            const UVWPoint p = UVWPoint::from_torus(t);
            const Complex prod =
                cheb_eval_uvw(k, p, g) * cheb_eval_uvw(l, p, g);
            Complex sum{0.0, 0.0};
            for (std::size_t i = 0; i < kl.terms.size(); ++i)
                sum += kl.weight(i) * cheb_eval_uvw(kl.terms[i].index, p, g);
            CHECK(std::abs(prod - sum) < 1e-12);

            Complex sum2{0.0, 0.0};
            for (std::size_t i = 0; i < lk.terms.size(); ++i)
                sum2 += lk.weight(i) * cheb_eval_uvw(lk.terms[i].index, p, g);
            CHECK(std::abs(sum - sum2) < 1e-12);
        }
    }
}

TEST_CASE("composition with a scaled argument") {
    const auto& g = WeylGroup::s4();
    const auto pts = sample_points(12, 53);
    for (int axis = 1; axis <= 3; ++axis) {
        for (const auto [k, l] : {std::pair{2, 3}, {1, 4}, {3, 2}, {0, 5}}) {
            const ComposeResult res = compose_scaled(k, l, axis, pts, g);
            Index3 expect{0, 0, 0};
            expect[axis - 1] = k * l;
            CHECK(res.composite == expect);
            CHECK(res.max_deviation < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)compose_scaled(1, 1, 0, pts, g),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)compose_scaled(-1, 1, 1, pts, g),
                    std::invalid_argument);
}

TEST_CASE("evaluation through coordinates matches the laurent route") {
    const auto& g = WeylGroup::s4();
    for (const auto& t : sample_points(10, 71)) {
        const UVWPoint p = UVWPoint::from_torus(t);
        const SpectralPoint s = coords_from_uvw(p);
        for (const auto& k : kSampleIndices) {
            const Complex via_xyz = cheb_eval_xyz(k, s, g);
            const Complex via_uvw = cheb_eval_uvw(k, p, g);
            CHECK(std::abs(via_xyz - via_uvw) < 1e-12);
        }
        // Orbit members of the unit indices resolve to plain coordinates.
        CHECK(std::abs(cheb_eval_xyz({0, 0, -1}, s, g) - s.x) < 1e-15);
        CHECK(std::abs(cheb_eval_xyz({-1, 1, 0}, s, g) - s.x) < 1e-15);
    }
}

TEST_CASE("coordinate only points reject higher indices") {
    SpectralPoint s;
    s.x = Complex{0.1, 0.2};
    s.y = Complex{0.3, 0.0};
    s.z = Complex{0.1, -0.2};
    const auto& g = WeylGroup::s4();
    CHECK(cheb_eval_xyz({0, 0, 0}, s, g) == Complex{1.0, 0.0});
    CHECK(cheb_eval_xyz({1, 0, 0}, s, g) == s.x);
    CHECK(cheb_eval_xyz({0, 1, 0}, s, g) == s.y);
    CHECK(cheb_eval_xyz({0, 0, 1}, s, g) == s.z);
    CHECK_THROWS_AS((void)cheb_eval_xyz({1, 1, 0}, s, g),
                    std::invalid_argument);
}
