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

#ifndef ZEROT_BLOSSOM_HPP
#define ZEROT_BLOSSOM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace zerot {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    std::int64_t weight = 0;
};

/// Edmonds' weighted blossom algorithm (primal-dual, O(n^3)) on a general
/// graph with integer weights. Finds a maximum-weight matching among all
/// maximum-cardinality matchings; on a graph that has a perfect matching this
/// is the maximum-weight perfect matching.
///
/// With greedy_start the solver first raises a feasible dual solution and a
/// matching on its tight edges, so only the leftover vertices go through the
/// stage loop. Those duals differ between free vertices, which only certifies
/// a perfect matching, so an imperfect result is re-solved from the plain
/// start. The optimum is unchanged.
///
/// Returns mate[v] (or -1 for an unmatched vertex).
std::vector<int> max_weight_matching(int vertex_count, std::span<const WeightedEdge> edges,
                                     bool greedy_start = true);

/// Final primal-dual state of a solve. The duals certify optimality against
/// any edge set that includes the solved one: the matching stays optimal for
/// a larger graph iff every added edge has non-negative reduced slack.
struct BlossomCertificate {
    std::vector<int> mate;
    std::vector<std::int64_t> dual;  // 2n entries, vertices then blossoms, doubled units
    std::vector<int> parent;         // immediate enclosing blossom, or -1

    /// y_u + y_v - 2 w + sum of z_B over blossoms containing both u and v,
    /// all in the solver's doubled units. Negative means the edge (u, v) of
    /// weight w would violate dual feasibility.
    std::int64_t reduced_slack(int u, int v, std::int64_t weight) const;
};

BlossomCertificate max_weight_matching_certified(int vertex_count, std::span<const WeightedEdge> edges,
                                                 bool greedy_start = true);

}  // namespace zerot

#endif
