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

#include <set>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "zerot/decoder.hpp"
#include "zerot/errors.hpp"

using namespace zerot;

namespace {

Matching single_pair(const Site& a, const Site& b, const LatticeSpec& spec) {
    Matching m;
    m.pairs.emplace_back(a, b);
    m.total_weight = torus_distance(a, b, spec);
    return m;
}

Chain straight(const LatticeSpec& spec, Site s, int axis, int steps) {
    Chain c;
    for (int i = 0; i < steps; ++i) {
        c.toggle(DualBond{s, axis}, spec);
        s = spec.step(s, axis, +1);
    }
    return c;
}

// Classes of E + E' over every admissible geodesic for the given pairs. A
// path along an axis crosses that axis' L-1 -> 0 seam iff it runs past it.
std::set<unsigned> geodesic_classes(const Chain& error, const Matching& m, const LatticeSpec& spec) {
    const int L = spec.size();
    std::vector<std::vector<unsigned>> options;  // per pair: possible seam masks
    for (const auto& [a, b] : m.pairs) {
        std::vector<unsigned> masks = {0};
        for (int axis = 0; axis < spec.dimension(); ++axis) {
            const int fwd = ((b[axis] - a[axis]) % L + L) % L;
            if (fwd == 0)
                continue;
            const int bwd = L - fwd;
            std::vector<unsigned> bits;
            if (fwd <= bwd)
                bits.push_back(a[axis] + fwd >= L ? 1u : 0u);
            if (bwd <= fwd)
                bits.push_back(a[axis] - bwd < 0 ? 1u : 0u);
            std::vector<unsigned> next;
            for (unsigned mask : masks)
                for (unsigned bit : bits)
                    next.push_back(mask ^ (bit << axis));
            masks = next;
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        options.push_back(masks);
    }
    std::set<unsigned> classes = {seam_parities(error, spec).bits()};
    for (const auto& masks : options) {
        std::set<unsigned> next;
        for (unsigned c : classes)
            for (unsigned mask : masks)
                next.insert(c ^ mask);
        classes = next;
    }
    return classes;
}

}  // namespace

TEST_CASE("recovery chain examples") {
    const LatticeSpec spec(2, 8);
    CHECK(build_recovery_chain(Matching{}, spec, 1).empty());

    const Matching m = single_pair({0, 0, 0}, {2, 0, 0}, spec);
    const Chain c = build_recovery_chain(m, spec, 1);
    CHECK(c == straight(spec, {0, 0, 0}, 0, 2));
    std::vector<Site> ends = {{0, 0, 0}, {2, 0, 0}};
    CHECK(boundary(c, spec) == DefectSet::from_sites(ends, spec));
}

TEST_CASE("half-lattice separation wraps either way") {
    const LatticeSpec spec(2, 8);
    const Chain right = straight(spec, {0, 0, 0}, 0, 4);
    const Chain left = straight(spec, {4, 0, 0}, 0, 4);
    CHECK(right.size() == 4);
    CHECK(left.size() == 4);
    CHECK(boundary(right, spec) == boundary(left, spec));
    int n_right = 0;
    int n_left = 0;
    for (std::uint64_t tie = 0; tie < 200; ++tie) {
        const Chain c = build_recovery_chain(single_pair({0, 0, 0}, {4, 0, 0}, spec), spec, tie);
        REQUIRE((c == right || c == left));
        ++(c == right ? n_right : n_left);
        // Orientation of the pair does not matter.
        CHECK(build_recovery_chain(single_pair({4, 0, 0}, {0, 0, 0}, spec), spec, tie) == c);
    }
    CHECK(n_right > 50);
    CHECK(n_left > 50);
}

TEST_CASE("p = 0 trials succeed trivially") {
    const RngPolicy rng{1};
    for (Model m : {Model::rbim2d, Model::rpgm3d}) {
        const LatticeSpec spec(model_dimension(m), 5);
        for (std::uint64_t i = 0; i < 50; ++i) {
            const TrialOutcome t = run_trial(spec, m, Decimal{}, i, rng);
            CHECK(t.success);
            CHECK(t.cycle_class.trivial());
            CHECK(t.error_weight == 0);
            CHECK(t.recovery_weight == 0);
        }
    }
}

TEST_CASE("an injected noncontractible loop fails") {
    const LatticeSpec spec(2, 6);
    const Chain loop = zerot::testing::winding_loop(spec, {0, 3, 0}, 0);
    const TrialRecord rec = decode(loop, spec, 9);
    CHECK(rec.defects.empty());
    CHECK(rec.recovery_chain.empty());
    CHECK(rec.cycle == loop);
    CHECK(!rec.outcome.success);
    CHECK(rec.outcome.cycle_class.winding[0] == 1);
    CHECK(rec.outcome.cycle_class.winding[1] == 0);

    const LatticeSpec s3(3, 4);
    const TrialRecord r3 = decode(zerot::testing::winding_loop(s3, {1, 1, 1}, 1), s3, 9);
    CHECK(!r3.outcome.success);
    CHECK(r3.outcome.cycle_class.bits() == 2);
}

TEST_CASE("a short error is corrected") {
    const LatticeSpec spec(2, 8);
    const Chain e = straight(spec, {2, 2, 0}, 1, 2);
    const TrialRecord rec = decode(e, spec, 3);
    CHECK(rec.outcome.success);
    CHECK(rec.recovery_chain == e);
    CHECK(rec.cycle.empty());
}

TEST_CASE("small trials match an independent re-derivation") {
    const LatticeSpec spec(2, 4);
    const RngPolicy rng{31337};
    const Decimal p = Decimal::parse("0.3");
    int checked = 0;
    for (std::uint64_t i = 0; i < 400; ++i) {
        const auto sample = generate_sample(spec, Model::rbim2d, p, i, rng);
        const std::uint64_t tie = rng.tie_seed(Model::rbim2d, 4, p, i);
        const TrialRecord rec = decode(sample.error_chain, spec, tie);
        const auto sites = rec.defects.sites(spec);
        if (sites.size() > kBruteForceLimit)
            continue;
        ++checked;
        CHECK(rec.matching.total_weight == brute_force_matching(sites, spec).total_weight);
        const auto classes = geodesic_classes(sample.error_chain, rec.matching, spec);
        CHECK(classes.count(rec.outcome.cycle_class.bits()) == 1);
        CHECK(rec.outcome.success == rec.outcome.cycle_class.trivial());
        const TrialOutcome t = run_trial(spec, Model::rbim2d, p, i, rng);
        CHECK(t.success == rec.outcome.success);
        CHECK(t.cycle_class == rec.outcome.cycle_class);
        CHECK(t.error_weight == sample.error_chain.size());
    }
    CHECK(checked > 300);
}

TEST_CASE("defects always cancel and path shape does not change the class") {
    const RngPolicy rng{8};
    for (Model m : {Model::rbim2d, Model::rpgm3d}) {
        for (int L : {5, 6, 8}) {
            const LatticeSpec spec(model_dimension(m), L);
            const Decimal p = Decimal::parse(m == Model::rbim2d ? "0.12" : "0.04");
            for (std::uint64_t i = 0; i < 100; ++i) {
                const auto sample = generate_sample(spec, m, p, i, rng);
                const TrialRecord rec = decode(sample.error_chain, spec, i);
                CHECK(boundary(rec.cycle, spec).empty());
                const Chain other = build_recovery_chain(rec.matching, spec, i, PathOrder::axes_descending);
                CHECK(boundary(other, spec) == rec.defects);
                CHECK(classify_homology(sample.error_chain + other, spec) == rec.outcome.cycle_class);
            }
        }
    }
}

TEST_CASE("recovery path length before cancellation is the matching weight") {
    const LatticeSpec spec(3, 6);
    CounterRng rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto a = zerot::testing::random_site(spec, rng);
        const auto b = zerot::testing::random_site(spec, rng);
        if (a == b)
            continue;
        const Chain c = build_recovery_chain(single_pair(a, b, spec), spec, rng());
        CHECK(static_cast<int>(c.size()) == torus_distance(a, b, spec));
    }
}

TEST_CASE("trials are deterministic") {
    const LatticeSpec spec(3, 6);
    const RngPolicy rng{2};
    const Decimal p = Decimal::parse("0.05");
    for (std::uint64_t i = 0; i < 30; ++i) {
        const TrialOutcome a = run_trial(spec, Model::rpgm3d, p, i, rng);
        const TrialOutcome b = run_trial(spec, Model::rpgm3d, p, i, rng);
        CHECK(a.success == b.success);
        CHECK(a.cycle_class == b.cycle_class);
        CHECK(a.recovery_weight == b.recovery_weight);
    }
}
