// Copyright 2026 The zerot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared generators for the test suites.

#ifndef ZEROT_TESTS_SUPPORT_HPP
#define ZEROT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "zerot/lattice.hpp"
#include "zerot/rng.hpp"

namespace zerot::testing {

inline Site random_site(const LatticeSpec& spec, CounterRng& rng) {
    return spec.site_at(rng.below(spec.site_count()));
}

/// Each bond independently with probability density.
inline Chain random_chain(const LatticeSpec& spec, CounterRng& rng, double density) {
    Chain c;
    for (std::uint64_t b = 0; b < spec.bond_count(); ++b)
        if (rng.uniform() < density)
            c.toggle(b);
    return c;
}

/// Boundary of the elementary plaquette at s spanned by axes a < b.
inline Chain plaquette(const LatticeSpec& spec, const Site& s, int a, int b) {
    Chain c;
    c.toggle(DualBond{s, a}, spec);
    c.toggle(DualBond{spec.step(s, a, +1), b}, spec);
    c.toggle(DualBond{spec.step(s, b, +1), a}, spec);
    c.toggle(DualBond{s, b}, spec);
    return c;
}

/// Straight loop of L bonds along axis through s.
inline Chain winding_loop(const LatticeSpec& spec, Site s, int axis) {
    Chain c;
    for (int i = 0; i < spec.size(); ++i) {
        c.toggle(DualBond{s, axis}, spec);
        s = spec.step(s, axis, +1);
    }
    return c;
}

/// A random cycle with known class: a sum of random plaquettes (trivial) and
/// random straight winding loops (one bit each).
struct KnownCycle {
    Chain chain;
    CycleClass cls;
};

inline KnownCycle random_cycle(const LatticeSpec& spec, CounterRng& rng, int plaquettes = 12, int loops = 3) {
    KnownCycle out;
    out.cls.dimension = spec.dimension();
    const int d = spec.dimension();
    for (int i = 0; i < plaquettes; ++i) {
        int a = static_cast<int>(rng.below(d));
        int b = static_cast<int>(rng.below(d - 1));
        if (b >= a)
            ++b;
        out.chain += plaquette(spec, random_site(spec, rng), std::min(a, b), std::max(a, b));
    }
    const int n_loops = static_cast<int>(rng.below(static_cast<std::uint64_t>(loops) + 1));
    for (int i = 0; i < n_loops; ++i) {
        const int axis = static_cast<int>(rng.below(d));
        out.chain += winding_loop(spec, random_site(spec, rng), axis);
        out.cls.winding[axis] ^= 1;
    }
    return out;
}

/// Distinct random sites, even count.
inline std::vector<Site> random_defects(const LatticeSpec& spec, CounterRng& rng, std::size_t k) {
    std::vector<std::size_t> idx;
    while (idx.size() < k) {
        const std::size_t i = rng.below(spec.site_count());
        if (std::find(idx.begin(), idx.end(), i) == idx.end())
            idx.push_back(i);
    }
    std::vector<Site> out;
    for (auto i : idx)
        out.push_back(spec.site_at(i));
    return out;
}

}  // namespace zerot::testing

#endif
