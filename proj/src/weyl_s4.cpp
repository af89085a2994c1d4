#include "fcct/weyl_s4.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace fcct {

GroupElement GroupElement::identity() {
    return GroupElement{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    GroupElement out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int acc = 0;
            for (int k = 0; k < 3; ++k) acc += m[i * 3 + k] * rhs.m[k * 3 + j];
            out.m[i * 3 + j] = acc;
        }
    return out;
}

GroupElement GroupElement::transposed() const {
    GroupElement out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.m[i * 3 + j] = m[j * 3 + i];
    return out;
}

int GroupElement::det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Index3 GroupElement::apply(const Index3& k) const {
    Index3 out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m[i * 3 + 0] * k[0] + m[i * 3 + 1] * k[1] + m[i * 3 + 2] * k[2];
    return out;
}

std::array<double, 3> GroupElement::apply_transposed(
    const std::array<double, 3>& theta) const {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m[0 * 3 + i] * theta[0] + m[1 * 3 + i] * theta[1] +
                 m[2 * 3 + i] * theta[2];
    return out;
}

std::array<GroupElement, 3> group_generators() {
    return {GroupElement{{-1, 0, 0, 1, 1, 0, 0, 0, 1}},
            GroupElement{{1, 1, 0, 0, -1, 0, 0, 1, 1}},
            GroupElement{{1, 0, 0, 0, 1, 1, 0, 0, -1}}};
}

WeylGroup generate_group() {
    const auto gens = group_generators();
    WeylGroup group;
    std::set<GroupElement> seen;

    std::deque<GroupElement> frontier{GroupElement::identity()};
    seen.insert(frontier.front());
    while (!frontier.empty()) {
        GroupElement g = frontier.front();
        frontier.pop_front();
        group.elements.push_back(g);
        if (group.elements.size() > 24)
            throw std::logic_error("group closure exceeded 24 elements");
        for (const auto& s : gens) {
            GroupElement next = g * s;
            if (seen.insert(next).second) frontier.push_back(next);
        }
    }
    if (group.elements.size() != 24)
        throw std::logic_error("group closure has " +
                               std::to_string(group.elements.size()) +
                               " elements, expected 24");
    return group;
}

bool WeylGroup::contains(const GroupElement& g) const {
    return std::find(elements.begin(), elements.end(), g) != elements.end();
}

const WeylGroup& WeylGroup::s4() {
    static const WeylGroup instance = generate_group();
    return instance;
}

std::vector<Index3> orbit(const Index3& k, const WeylGroup& g) {
    std::set<Index3> out;
    for (const auto& w : g.elements) out.insert(w.apply(k));
    return {out.begin(), out.end()};
}

Index3 canonical_index(const Index3& k, const WeylGroup& g) {
    Index3 best = k;
    for (const auto& w : g.elements) best = std::max(best, w.apply(k));
    return best;
}

} // namespace fcct
