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

#ifndef ZEROT_MATCHER_HPP
#define ZEROT_MATCHER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zerot/lattice.hpp"

namespace zerot {

struct Matching {
    std::vector<std::pair<Site, Site>> pairs;
    /// Sum of torus distances over pairs.
    std::int64_t total_weight = 0;
    /// Objective actually minimized: distance plus tie-breaking jitter. Zero for
    /// the brute-force oracle.
    double jittered_weight = 0.0;
    /// Set when the solve ran on a locality-pruned graph.
    bool approximate = false;
    /// Number of distinct minimum-weight matchings. Only the oracle fills it.
    std::optional<std::uint64_t> degeneracy;
};

struct MatchOptions {
    /// Connect each defect only to its m nearest neighbors. Exactness is only
    /// guaranteed on the complete graph, so results are flagged approximate.
    std::optional<int> nearest_neighbors;
};

/// Exact minimum-weight perfect matching of defects under the torus metric.
///
/// Each edge weight is the integer distance plus an independent jitter in
/// [0, 1/(k^2+1)) drawn from tie_seed and the pair's sites, where k is the
/// defect count. The jitter summed over any matching stays below 1, so the
/// jittered optimum is always an integer-weight optimum; it only picks one of
/// several degenerate ground states at random.
///
/// ContractViolation on an odd number of defects, InputError on sites out of
/// range or repeated sites.
Matching min_weight_perfect_matching(std::span<const Site> defects, const LatticeSpec& spec,
                                     std::uint64_t tie_seed, const MatchOptions& options = {});
Matching min_weight_perfect_matching(const DefectSet& defects, const LatticeSpec& spec, std::uint64_t tie_seed,
                                     const MatchOptions& options = {});

inline constexpr std::size_t kBruteForceLimit = 14;

/// Exhaustive enumeration over all (k-1)!! perfect matchings. Returns one of
/// minimum weight and the number of minimum-weight matchings in `degeneracy`.
/// SizeError above kBruteForceLimit defects.
Matching brute_force_matching(std::span<const Site> defects, const LatticeSpec& spec);

struct OracleSummary {
    std::uint64_t instances = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t instances_2d = 0;
    std::uint64_t instances_3d = 0;
    std::size_t largest_instance = 0;  // defects
};

/// Random instances on L in {4..8} with an even number of distinct defects up
/// to max_defects, alternating 2D and 3D unless dimension is given. Counts
/// instances where the blossom weight differs from the exhaustive minimum.
/// SizeError if max_defects exceeds kBruteForceLimit.
OracleSummary run_oracle_check(std::uint64_t instances, int max_defects, std::uint64_t seed,
                               std::optional<int> dimension = std::nullopt);

}  // namespace zerot

#endif
