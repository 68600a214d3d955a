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

#include "zerot/matcher.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "zerot/blossom.hpp"
#include "zerot/errors.hpp"
#include "zerot/rng.hpp"

namespace zerot {

namespace {

constexpr std::uint64_t kJitterTag = 0x4a4954544552ULL;  // "JITTER"

void check_input(std::span<const Site> defects, const LatticeSpec& spec) {
    if (defects.size() % 2 != 0)
        throw ContractViolation("perfect matching needs an even number of defects, got " +
                                std::to_string(defects.size()));
    std::vector<std::size_t> idx;
    idx.reserve(defects.size());
    for (const auto& s : defects) {
        if (!spec.contains(s))
            throw InputError("defect site out of range for lattice");
        idx.push_back(spec.site_index(s));
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw InputError("repeated defect site");
}

struct JitterScale {
    std::int64_t scale;      // integer weight of one lattice unit
    std::uint64_t quantum;   // jitter drawn uniformly from [0, quantum)
};

// scale = (k^2 + 1) * quantum, so each edge's jitter is < 1/(k^2+1) lattice
// units and k/2 of them sum to < 1.
JitterScale jitter_scale(std::size_t k, int max_distance) {
    const unsigned __int128 ksq = static_cast<unsigned __int128>(k) * k + 1;
    const unsigned __int128 budget = static_cast<unsigned __int128>(1) << 58;
    const unsigned __int128 per_quantum = ksq * static_cast<unsigned __int128>(max_distance + 1);
    if (per_quantum > budget)
        throw SizeError("too many defects for exact integer tie-breaking");
    auto quantum = static_cast<std::uint64_t>(std::min<unsigned __int128>(budget / per_quantum, 1ULL << 32));
    return {static_cast<std::int64_t>(ksq * quantum), quantum};
}

}  // namespace

Matching min_weight_perfect_matching(std::span<const Site> defects, const LatticeSpec& spec,
                                     std::uint64_t tie_seed, const MatchOptions& options) {
    check_input(defects, spec);
    Matching result;
    const std::size_t k = defects.size();
    if (k == 0)
        return result;

    const int n = static_cast<int>(k);
    const int L = spec.size();
    const int dim = spec.dimension();
    const int max_distance = dim * (L / 2);
    const JitterScale js = jitter_scale(k, max_distance);
    const std::uint64_t jitter_key = hash_words({kJitterTag, tie_seed});
    const auto site_count = static_cast<std::uint64_t>(spec.site_count());

    std::vector<std::uint64_t> site_idx(k);
    for (std::size_t i = 0; i < k; ++i)
        site_idx[i] = spec.site_index(defects[i]);

    // Keyed by the unordered pair of sites, so the draw does not depend on
    // input order.
    auto jitter = [&](int a, int b) -> std::int64_t {
        std::uint64_t lo = std::min(site_idx[a], site_idx[b]);
        std::uint64_t hi = std::max(site_idx[a], site_idx[b]);
        return static_cast<std::int64_t>(mix64(jitter_key ^ mix64(lo * site_count + hi)) % js.quantum);
    };

    std::vector<int> dist(k * k, 0);
    for (int a = 0; a < n; ++a) {
        const Site& sa = defects[a];
        for (int b = a + 1; b < n; ++b) {
            const Site& sb = defects[b];
            int d = 0;
            for (int i = 0; i < dim; ++i) {
                int delta = sa[i] > sb[i] ? sa[i] - sb[i] : sb[i] - sa[i];
                d += delta < L - delta ? delta : L - delta;
            }
            dist[a * k + b] = dist[b * k + a] = d;
        }
    }

    // Solver maximizes, so weights are flipped against a common ceiling.
    const std::int64_t top = static_cast<std::int64_t>(max_distance + 1) * js.scale;
    auto weight = [&](int a, int b) {
        return top - (static_cast<std::int64_t>(dist[a * k + b]) * js.scale + jitter(a, b));
    };

    // m nearest neighbors of every defect, symmetrized.
    std::vector<char> in_graph(k * k, 0);
    std::vector<WeightedEdge> edges;
    auto add_nearest = [&](int m) {
        std::vector<int> order(k);
        for (int a = 0; a < n; ++a) {
            std::iota(order.begin(), order.end(), 0);
            std::swap(order[a], order.back());
            auto last = order.end() - 1;
            const int take = std::min(m, n - 1);
            std::nth_element(order.begin(), order.begin() + (take - 1), last, [&](int x, int y) {
                int dx = dist[a * k + x];
                int dy = dist[a * k + y];
                return dx != dy ? dx < dy : x < y;
            });
            for (int i = 0; i < take; ++i) {
                int b = order[i];
                int lo = std::min(a, b);
                int hi = std::max(a, b);
                if (!in_graph[lo * k + hi]) {
                    in_graph[lo * k + hi] = 1;
                    edges.push_back(WeightedEdge{lo, hi, weight(lo, hi)});
                }
            }
        }
    };

    auto perfect = [](const std::vector<int>& mate) {
        return std::none_of(mate.begin(), mate.end(), [](int v) { return v < 0; });
    };

    std::vector<int> mate;
    bool approximate = false;
    if (options.nearest_neighbors) {
        if (*options.nearest_neighbors < 1)
            throw InputError("nearest-neighbor pruning needs m >= 1");
        add_nearest(*options.nearest_neighbors);
        mate = max_weight_matching(n, edges, true);
        approximate = static_cast<std::size_t>(*options.nearest_neighbors) < k - 1;
        if (!perfect(mate)) {
            // The pruned graph had no perfect matching; price it out exactly instead.
            approximate = false;
        }
    }

    if (mate.empty() || !perfect(mate)) {
        // Exact solve on the complete graph by pricing: solve a sparse
        // subgraph, then check every absent edge against the final duals and
        // add the ones that violate feasibility. When none do, the dual
        // solution certifies optimality on the complete graph.
        int m = 6;
        add_nearest(m);
        while (true) {
            BlossomCertificate cert = max_weight_matching_certified(n, edges, true);
            if (!perfect(cert.mate)) {
                m *= 2;
                add_nearest(m);
                continue;
            }
            std::size_t added = 0;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    if (in_graph[a * k + b])
                        continue;
                    // Cheap bound first: the largest weight any jitter can give.
                    const std::int64_t wmax = top - static_cast<std::int64_t>(dist[a * k + b]) * js.scale;
                    if (cert.dual[a] + cert.dual[b] - 4 * wmax >= 0)
                        continue;
                    const std::int64_t w = weight(a, b);
                    if (cert.reduced_slack(a, b, w) < 0) {
                        in_graph[a * k + b] = 1;
                        edges.push_back(WeightedEdge{a, b, w});
                        ++added;
                    }
                }
            }
            if (added == 0) {
                mate = std::move(cert.mate);
                break;
            }
        }
    }

    result.approximate = approximate;
    long double jittered = 0;
    for (int a = 0; a < n; ++a) {
        int b = mate[a];
        if (b < 0)
            throw ContractViolation("blossom solver returned an imperfect matching");
        if (a < b) {
            result.pairs.emplace_back(defects[a], defects[b]);
            result.total_weight += dist[a * k + b];
            jittered += dist[a * k + b] +
                        static_cast<long double>(jitter(a, b)) / static_cast<long double>(js.scale);
        }
    }
    result.jittered_weight = static_cast<double>(jittered);
    return result;
}

Matching min_weight_perfect_matching(const DefectSet& defects, const LatticeSpec& spec, std::uint64_t tie_seed,
                                     const MatchOptions& options) {
    const auto sites = defects.sites(spec);
    return min_weight_perfect_matching(std::span<const Site>(sites), spec, tie_seed, options);
}

namespace {

struct Enumerator {
    const std::vector<int>& dist;
    std::size_t k;
    std::vector<char> used;
    std::vector<int> current;
    std::vector<int> best;
    std::int64_t best_weight = std::numeric_limits<std::int64_t>::max();
    std::uint64_t best_count = 0;

    void run(std::int64_t weight) {
        std::size_t first = 0;
        while (first < k && used[first])
            ++first;
        if (first == k) {
            if (weight < best_weight) {
                best_weight = weight;
                best_count = 1;
                best = current;
            } else if (weight == best_weight) {
                ++best_count;
            }
            return;
        }
        used[first] = 1;
        for (std::size_t j = first + 1; j < k; ++j) {
            if (used[j])
                continue;
            used[j] = 1;
            current.push_back(static_cast<int>(first));
            current.push_back(static_cast<int>(j));
            run(weight + dist[first * k + j]);
            current.pop_back();
            current.pop_back();
            used[j] = 0;
        }
        used[first] = 0;
    }
};

}  // namespace

Matching brute_force_matching(std::span<const Site> defects, const LatticeSpec& spec) {
    if (defects.size() > kBruteForceLimit)
        throw SizeError("brute-force matching is limited to " + std::to_string(kBruteForceLimit) +
                        " defects, got " + std::to_string(defects.size()));
    check_input(defects, spec);
    Matching result;
    const std::size_t k = defects.size();
    if (k == 0) {
        result.degeneracy = 1;
        return result;
    }
    std::vector<int> dist(k * k, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            dist[a * k + b] = torus_distance(defects[a], defects[b], spec);
    Enumerator e{dist, k, std::vector<char>(k, 0), {}, {}};
    e.run(0);
    for (std::size_t i = 0; i < e.best.size(); i += 2)
        result.pairs.emplace_back(defects[e.best[i]], defects[e.best[i + 1]]);
    result.total_weight = e.best_weight;
    result.jittered_weight = static_cast<double>(e.best_weight);
    result.degeneracy = e.best_count;
    return result;
}

OracleSummary run_oracle_check(std::uint64_t instances, int max_defects, std::uint64_t seed,
                               std::optional<int> dimension) {
    if (max_defects < 0)
        throw InputError("max_defects must be >= 0");
    if (static_cast<std::size_t>(max_defects) > kBruteForceLimit)
        throw SizeError("oracle instances are limited to " + std::to_string(kBruteForceLimit) + " defects, asked for " +
                        std::to_string(max_defects));
    if (dimension && *dimension != 2 && *dimension != 3)
        throw InputError("oracle dimension must be 2 or 3");
    constexpr std::uint64_t kOracleTag = 0x6f7261636c65ULL;
    OracleSummary out;
    for (std::uint64_t i = 0; i < instances; ++i) {
        CounterRng rng(hash_words({kOracleTag, seed, i}));
        const int d = dimension.value_or(i % 2 == 0 ? 2 : 3);
        const LatticeSpec spec(d, 4 + static_cast<int>(rng.below(5)));
        const std::size_t k = 2 * rng.below(static_cast<std::uint64_t>(max_defects / 2) + 1);
        std::vector<std::size_t> chosen;
        while (chosen.size() < k) {
            const std::size_t idx = rng.below(spec.site_count());
            if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end())
                chosen.push_back(idx);
        }
        std::vector<Site> sites;
        for (auto idx : chosen)
            sites.push_back(spec.site_at(idx));
        const Matching fast = min_weight_perfect_matching(sites, spec, rng());
        const Matching slow = brute_force_matching(sites, spec);
        ++out.instances;
        ++(d == 2 ? out.instances_2d : out.instances_3d);
        out.largest_instance = std::max(out.largest_instance, k);
        if (fast.total_weight != slow.total_weight)
            ++out.mismatches;
    }
    return out;
}

}  // namespace zerot
