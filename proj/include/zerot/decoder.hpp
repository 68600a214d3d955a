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

#ifndef ZEROT_DECODER_HPP
#define ZEROT_DECODER_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>

#include "zerot/disorder.hpp"
#include "zerot/lattice.hpp"
#include "zerot/matcher.hpp"

namespace zerot {

/// Order in which a pair's geodesic walks the axes. The winding of the
/// resulting cycle does not depend on it once wrap directions are fixed.
enum class PathOrder { axes_ascending, axes_descending };

/// E' as the mod-2 sum of one geodesic per matched pair. Along each axis the
/// path takes the shorter way round; at an exact half-lattice separation the
/// direction is a fair coin from tie_seed, per pair and per axis.
Chain build_recovery_chain(const Matching& matching, const LatticeSpec& spec, std::uint64_t tie_seed,
                           PathOrder order = PathOrder::axes_ascending);

struct TrialOutcome {
    bool success = true;
    CycleClass cycle_class;
    std::size_t error_weight = 0;     // |E|
    std::size_t recovery_weight = 0;  // |E'| after mod-2 cancellation
    std::chrono::nanoseconds elapsed{0};
};

/// Everything a trial computes, kept for debug dumps and regression tests.
struct TrialRecord {
    LatticeSpec spec;
    Chain error_chain;
    DefectSet defects;
    Matching matching;
    Chain recovery_chain;
    Chain cycle;
    TrialOutcome outcome;
};

/// Decodes an explicit error chain (sampled or injected): match its boundary,
/// build E', classify D = E + E'.
TrialRecord decode(const Chain& error_chain, const LatticeSpec& spec, std::uint64_t tie_seed,
                   const MatchOptions& options = {});

/// Samples E for (model, L, p, sample_index) and decodes it. Success iff D is
/// homologically trivial.
TrialOutcome run_trial(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                       const RngPolicy& rng, std::uint64_t tie_seed, const MatchOptions& options = {});

/// Same, with the tie seed derived from the sample's stream.
TrialOutcome run_trial(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                       const RngPolicy& rng, const MatchOptions& options = {});

}  // namespace zerot

#endif
