#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fcct {

using Index3 = std::array<int, 3>;

// One element of the symmetry group as an integer 3x3 matrix, row major.
// Entries stay in {-1, 0, 1} for the whole group.
struct GroupElement {
    std::array<int, 9> m;

    static GroupElement identity();

    GroupElement operator*(const GroupElement& rhs) const;
    GroupElement transposed() const;
    int det() const;

    // Direct action on an integer index: w * k.
    Index3 apply(const Index3& k) const;

    // Transposed action on a (real) torus angle: w^T theta.
    std::array<double, 3> apply_transposed(const std::array<double, 3>& theta) const;

    bool operator==(const GroupElement&) const = default;
    auto operator<=>(const GroupElement&) const = default;
};

// The three reflection generators, in the order they define the group.
std::array<GroupElement, 3> group_generators();

struct WeylGroup {
    std::vector<GroupElement> elements; // identity first, then BFS order

    int order() const { return static_cast<int>(elements.size()); }
    bool contains(const GroupElement& g) const;

    // Shared immutable instance; generated once, safe to use from any thread.
    static const WeylGroup& s4();
};

// Breadth-first closure of the generators. Throws std::logic_error if the
// closure does not come out to exactly 24 elements.
WeylGroup generate_group();

// Orbit of k under the direct action, sorted lexicographically, deduplicated.
std::vector<Index3> orbit(const Index3& k, const WeylGroup& g);

// Lexicographically largest member of orbit(k); the canonical representative.
Index3 canonical_index(const Index3& k, const WeylGroup& g);

} // namespace fcct
