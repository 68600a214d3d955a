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

#include "zerot/decoder.hpp"

#include <utility>

#include "zerot/errors.hpp"
#include "zerot/rng.hpp"

namespace zerot {

namespace {

constexpr std::uint64_t kWrapTag = 0x57524150ULL;  // "WRAP"

}  // namespace

Chain build_recovery_chain(const Matching& matching, const LatticeSpec& spec, std::uint64_t tie_seed,
                           PathOrder order) {
    const int L = spec.size();
    const int d = spec.dimension();
    Chain chain;
    chain.reserve(static_cast<std::size_t>(matching.total_weight) * 2 + 4);
    for (const auto& pair : matching.pairs) {
        auto [from, to] = pair;
        if (!spec.contains(from) || !spec.contains(to))
            throw InputError("matched site out of range for lattice");
        // Walk from the lower-indexed site so the path and its coin flips
        // depend only on the unordered pair.
        std::uint64_t lo = spec.site_index(from);
        std::uint64_t hi = spec.site_index(to);
        if (hi < lo) {
            std::swap(from, to);
            std::swap(lo, hi);
        }
        Site at = from;
        for (int n = 0; n < d; ++n) {
            const int axis = order == PathOrder::axes_ascending ? n : d - 1 - n;
            const int forward = ((to[axis] - from[axis]) % L + L) % L;
            const int backward = L - forward;
            if (forward == 0)
                continue;
            int direction;
            if (forward < backward) {
                direction = +1;
            } else if (forward > backward) {
                direction = -1;
            } else {
                direction = (hash_words({kWrapTag, tie_seed, lo, hi, static_cast<std::uint64_t>(axis)}) & 1) ? +1 : -1;
            }
            const int steps = direction > 0 ? forward : backward;
            for (int s = 0; s < steps; ++s) {
                Site next = spec.step(at, axis, direction);
                chain.toggle(DualBond{direction > 0 ? at : next, axis}, spec);
                at = next;
            }
        }
    }
    return chain;
}

TrialRecord decode(const Chain& error_chain, const LatticeSpec& spec, std::uint64_t tie_seed,
                   const MatchOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec{spec, error_chain, boundary(error_chain, spec), {}, {}, {}, {}};
    rec.matching = min_weight_perfect_matching(rec.defects, spec, tie_seed, options);
    rec.recovery_chain = build_recovery_chain(rec.matching, spec, tie_seed);
    rec.cycle = error_chain + rec.recovery_chain;
    rec.outcome.cycle_class = classify_homology(rec.cycle, spec);
    rec.outcome.success = rec.outcome.cycle_class.trivial();
    rec.outcome.error_weight = error_chain.size();
    rec.outcome.recovery_weight = rec.recovery_chain.size();
    rec.outcome.elapsed = std::chrono::steady_clock::now() - start;
    return rec;
}

TrialOutcome run_trial(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                       const RngPolicy& rng, std::uint64_t tie_seed, const MatchOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const DisorderSample sample = generate_sample(spec, model, p, sample_index, rng);
    TrialOutcome out = decode(sample.error_chain, spec, tie_seed, options).outcome;
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

TrialOutcome run_trial(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                       const RngPolicy& rng, const MatchOptions& options) {
    return run_trial(spec, model, p, sample_index, rng, rng.tie_seed(model, spec.size(), p, sample_index), options);
}

}  // namespace zerot
