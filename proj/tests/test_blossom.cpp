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

#include <utility>
#include <vector>

#include "doctest.h"
#include "zerot/blossom.hpp"
#include "zerot/rng.hpp"

using namespace zerot;

namespace {

struct Score {
    int cardinality = 0;
    std::int64_t weight = 0;
    auto operator<=>(const Score&) const = default;
};

// Exhaustive best (cardinality, weight) over all matchings of a small graph.
Score best_matching(int n, const std::vector<WeightedEdge>& edges) {
    std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, -1));
    for (const auto& e : edges)
        w[e.u][e.v] = w[e.v][e.u] = e.weight;
    std::vector<bool> used(n, false);
    Score best;
    auto rec = [&](auto&& self, int i, Score cur) -> void {
        while (i < n && used[i])
            ++i;
        if (i == n) {
            best = std::max(best, cur);
            return;
        }
        used[i] = true;
        self(self, i + 1, cur);
        for (int j = i + 1; j < n; ++j) {
            if (used[j] || w[i][j] < 0)
                continue;
            used[j] = true;
            self(self, i + 1, Score{cur.cardinality + 1, cur.weight + w[i][j]});
            used[j] = false;
        }
        used[i] = false;
    };
    rec(rec, 0, Score{});
    return best;
}

Score score_of(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges) {
    Score s;
    for (const auto& e : edges) {
        if (mate[e.u] == e.v) {
            REQUIRE(mate[e.v] == e.u);
            ++s.cardinality;
            s.weight += e.weight;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("trivial graphs") {
    CHECK(max_weight_matching(0, {}).empty());
    CHECK(max_weight_matching(3, {}) == std::vector<int>{-1, -1, -1});
    const std::vector<WeightedEdge> one = {{0, 1, 1}};
    CHECK(max_weight_matching(2, one) == std::vector<int>{1, 0});
    const std::vector<WeightedEdge> tri = {{0, 1, 1}, {1, 2, 2}, {0, 2, 3}};
    CHECK(max_weight_matching(3, tri) == std::vector<int>{2, -1, 0});
}

TEST_CASE("blossom cases with known optima") {
    SUBCASE("S-blossom used for augmentation") {
        std::vector<WeightedEdge> e = {{1, 2, 8}, {1, 3, 9}, {2, 3, 10}, {3, 4, 7}};
        CHECK(max_weight_matching(5, e) == std::vector<int>{-1, 2, 1, 4, 3});
        e.push_back({1, 6, 5});
        e.push_back({4, 5, 6});
        CHECK(max_weight_matching(7, e) == std::vector<int>{-1, 6, 3, 2, 5, 4, 1});
    }
    SUBCASE("nested S-blossom expanded") {
        const std::vector<WeightedEdge> e = {{1, 2, 19}, {1, 3, 20}, {1, 8, 8}, {2, 3, 25}, {2, 4, 18},
                                             {3, 5, 18}, {4, 5, 13}, {4, 7, 7},  {5, 6, 7}};
        CHECK(max_weight_matching(9, e) == std::vector<int>{-1, 8, 3, 2, 7, 6, 5, 4, 1});
    }
    SUBCASE("T-blossom") {
        std::vector<WeightedEdge> e = {{1, 2, 9}, {1, 3, 8}, {2, 3, 10}, {1, 4, 5}, {4, 5, 4}, {1, 6, 3}};
        CHECK(max_weight_matching(7, e) == std::vector<int>{-1, 6, 3, 2, 5, 4, 1});
        e[4].weight = 3;
        e[5].weight = 4;
        CHECK(max_weight_matching(7, e) == std::vector<int>{-1, 6, 3, 2, 5, 4, 1});
        e[5] = {3, 6, 4};
        CHECK(max_weight_matching(7, e) == std::vector<int>{-1, 2, 1, 6, 5, 4, 3});
    }
    SUBCASE("nested S-blossom augmented and expanded recursively") {
        const std::vector<WeightedEdge> e = {{1, 2, 40}, {1, 3, 40}, {2, 3, 60}, {2, 4, 55}, {3, 5, 55}, {4, 5, 50},
                                             {1, 8, 15}, {5, 7, 30}, {7, 6, 10}, {8, 10, 10}, {4, 9, 30}};
        CHECK(max_weight_matching(11, e) == std::vector<int>{-1, 2, 1, 5, 9, 3, 7, 6, 10, 4, 8});
    }
    SUBCASE("T-blossom relabeled") {
        const std::vector<WeightedEdge> e = {{1, 2, 45}, {1, 5, 45}, {2, 3, 50}, {3, 4, 45},
                                             {4, 5, 50}, {1, 6, 30}, {3, 9, 35}, {4, 8, 35},
                                             {5, 7, 26}, {9, 10, 5}};
        CHECK(max_weight_matching(11, e) == std::vector<int>{-1, 6, 3, 2, 8, 7, 1, 5, 4, 10, 9});
    }
}

TEST_CASE("random graphs match exhaustive search") {
    CounterRng rng(99);
    for (int trial = 0; trial < 600; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(9));
        std::vector<WeightedEdge> edges;
        const double density = 0.3 + 0.7 * rng.uniform();
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.uniform() < density)
                    edges.push_back({u, v, 1 + static_cast<std::int64_t>(rng.below(trial % 2 ? 4 : 30))});
        const Score want = best_matching(n, edges);
        for (bool greedy : {true, false}) {
            const auto cert = max_weight_matching_certified(n, edges, greedy);
            const Score got = score_of(cert.mate, edges);
            INFO("trial " << trial << " greedy " << greedy << " n " << n << " got " << got.cardinality << "/"
                          << got.weight << " want " << want.cardinality << "/" << want.weight);
            REQUIRE(got == want);
            for (const auto& e : edges) {
                const auto slack = cert.reduced_slack(e.u, e.v, e.weight);
                CHECK(slack >= 0);
                if (cert.mate[e.u] == e.v)
                    CHECK(slack == 0);
            }
        }
    }
}
