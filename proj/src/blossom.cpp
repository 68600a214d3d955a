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

#include "zerot/blossom.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <utility>

#include "zerot/errors.hpp"

// Layout follows the classic formulation with edge endpoints: edge k has
// endpoints 2k and 2k+1, endpoint_[p] is the vertex at endpoint p, and p ^ 1
// is the opposite end. Blossom ids are n..2n-1. Labels: 0 free, 1 S, 2 T.
// Dual variables are stored doubled so that slack(k) = y_u + y_v - 2 w_k.

namespace zerot {

namespace {

class BlossomSolver {
  public:
    BlossomSolver(int n, std::span<const WeightedEdge> edges);
    std::vector<int> solve(bool greedy_start);
    BlossomCertificate certificate(std::vector<int> mate) const {
        return BlossomCertificate{std::move(mate), dual_, parent_};
    }

  private:
    using Weight = std::int64_t;

    Weight slack(int k) const { return dual_[endpoint_[2 * k]] + dual_[endpoint_[2 * k + 1]] - 2 * weight_[k]; }

    template <typename F>
    void for_each_leaf(int b, F&& f) {
        if (b < n_) {
            f(b);
            return;
        }
        leaf_stack_.clear();
        leaf_stack_.push_back(b);
        while (!leaf_stack_.empty()) {
            int t = leaf_stack_.back();
            leaf_stack_.pop_back();
            if (t < n_) {
                f(t);
            } else {
                for (int c : childs_[t])
                    leaf_stack_.push_back(c);
            }
        }
    }

    // Python-style wraparound index into a blossom's cyclic child list.
    static int cyc(const std::vector<int>& v, int j) {
        int s = static_cast<int>(v.size());
        return v[static_cast<std::size_t>(((j % s) + s) % s)];
    }

    void greedy_init();
    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    int m_;
    std::vector<int> endpoint_;
    std::vector<Weight> weight_;
    std::vector<int> nb_start_;
    std::vector<int> nb_endp_;  // remote endpoints of edges incident to each vertex

    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> childs_;
    std::vector<std::vector<int>> endps_;
    std::vector<int> base_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> best_list_;
    std::vector<char> has_best_list_;
    std::vector<int> unused_;
    std::vector<Weight> dual_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;

    std::vector<int> leaf_stack_;
    std::vector<int> bestedgeto_;
};

BlossomSolver::BlossomSolver(int n, std::span<const WeightedEdge> edges)
    : n_(n), m_(static_cast<int>(edges.size())) {
    endpoint_.resize(2 * static_cast<std::size_t>(m_));
    weight_.resize(static_cast<std::size_t>(m_));
    nb_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int k = 0; k < m_; ++k) {
        const auto& e = edges[static_cast<std::size_t>(k)];
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_ || e.u == e.v)
            throw InputError("invalid edge in matching graph");
        if (e.weight > std::numeric_limits<Weight>::max() / 8 || e.weight < std::numeric_limits<Weight>::min() / 8)
            throw InputError("edge weight too large for exact matching");
        endpoint_[2 * k] = e.u;
        endpoint_[2 * k + 1] = e.v;
        weight_[k] = 2 * e.weight;  // keeps every dual update integral
        ++nb_start_[e.u + 1];
        ++nb_start_[e.v + 1];
    }
    for (int v = 0; v < n_; ++v)
        nb_start_[v + 1] += nb_start_[v];
    nb_endp_.resize(2 * static_cast<std::size_t>(m_));
    std::vector<int> fill(nb_start_.begin(), nb_start_.end() - 1);
    for (int k = 0; k < m_; ++k) {
        nb_endp_[fill[endpoint_[2 * k]]++] = 2 * k + 1;
        nb_endp_[fill[endpoint_[2 * k + 1]]++] = 2 * k;
    }

    const auto n2 = 2 * static_cast<std::size_t>(n_);
    mate_.assign(n_, -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(n_);
    for (int v = 0; v < n_; ++v)
        inblossom_[v] = v;
    parent_.assign(n2, -1);
    childs_.assign(n2, {});
    endps_.assign(n2, {});
    base_.assign(n2, -1);
    for (int v = 0; v < n_; ++v)
        base_[v] = v;
    bestedge_.assign(n2, -1);
    best_list_.assign(n2, {});
    has_best_list_.assign(n2, 0);
    for (int b = 2 * n_ - 1; b >= n_; --b)
        unused_.push_back(b);
    Weight maxw = 0;
    for (auto w : weight_)
        maxw = std::max(maxw, w);
    dual_.assign(n2, 0);
    for (int v = 0; v < n_; ++v)
        dual_[v] = maxw;
    allowedge_.assign(static_cast<std::size_t>(m_), 0);
    bestedgeto_.assign(n2, -1);
}

void BlossomSolver::greedy_init() {
    // Tightest feasible vertex duals: y_v = max incident weight.
    for (int v = 0; v < n_; ++v) {
        Weight best = 0;
        bool any = false;
        for (int i = nb_start_[v]; i < nb_start_[v + 1]; ++i) {
            Weight w = weight_[nb_endp_[i] / 2];
            if (!any || w > best)
                best = w;
            any = true;
        }
        dual_[v] = best;
    }
    // Lower each free vertex until one incident edge is tight; match if the
    // other end is free too. Slacks stay non-negative throughout.
    for (int v = 0; v < n_; ++v) {
        if (mate_[v] != -1)
            continue;
        int best_p = -1;
        Weight best_slack = 0;
        int best_free_p = -1;
        for (int i = nb_start_[v]; i < nb_start_[v + 1]; ++i) {
            int p = nb_endp_[i];
            Weight s = slack(p / 2);
            if (best_p == -1 || s < best_slack) {
                best_slack = s;
                best_p = p;
            }
        }
        if (best_p == -1)
            continue;
        dual_[v] -= best_slack;
        for (int i = nb_start_[v]; i < nb_start_[v + 1]; ++i) {
            int p = nb_endp_[i];
            if (mate_[endpoint_[p]] == -1 && slack(p / 2) == 0) {
                best_free_p = p;
                break;
            }
        }
        if (best_free_p != -1) {
            int w = endpoint_[best_free_p];
            mate_[v] = best_free_p;
            mate_[w] = best_free_p ^ 1;
        }
    }
}

void BlossomSolver::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    assert(label_[w] == 0 && label_[b] == 0);
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        for_each_leaf(b, [&](int v) { queue_.push_back(v); });
    } else {
        int base = base_[b];
        assert(mate_[base] >= 0);
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int BlossomSolver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = base_[b];
            break;
        }
        assert(label_[b] == 1);
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            assert(label_[b] == 2);
            v = endpoint_[labelend_[b]];
        }
        if (w != -1)
            std::swap(v, w);
    }
    for (int b : path)
        label_[b] = 1;
    return base;
}

void BlossomSolver::add_blossom(int base, int k) {
    int v = endpoint_[2 * k];
    int w = endpoint_[2 * k + 1];
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    auto& path = childs_[b];
    auto& endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        parent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        parent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for_each_leaf(b, [&](int leaf) {
        if (label_[inblossom_[leaf]] == 2)
            queue_.push_back(leaf);
        inblossom_[leaf] = b;
    });

    std::vector<int> touched;
    auto consider = [&](int edge) {
        int i = endpoint_[2 * edge];
        int j = endpoint_[2 * edge + 1];
        if (inblossom_[j] == b)
            std::swap(i, j);
        int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto_[bj] == -1 || slack(edge) < slack(bestedgeto_[bj]))) {
            if (bestedgeto_[bj] == -1)
                touched.push_back(bj);
            bestedgeto_[bj] = edge;
        }
    };
    for (int sub : path) {
        if (!has_best_list_[sub]) {
            for_each_leaf(sub, [&](int leaf) {
                for (int i = nb_start_[leaf]; i < nb_start_[leaf + 1]; ++i)
                    consider(nb_endp_[i] / 2);
            });
        } else {
            for (int edge : best_list_[sub])
                consider(edge);
        }
        best_list_[sub].clear();
        has_best_list_[sub] = 0;
        bestedge_[sub] = -1;
    }
    auto& list = best_list_[b];
    list.clear();
    std::sort(touched.begin(), touched.end());
    for (int bj : touched) {
        list.push_back(bestedgeto_[bj]);
        bestedgeto_[bj] = -1;
    }
    has_best_list_[b] = 1;
    bestedge_[b] = -1;
    for (int edge : list) {
        if (bestedge_[b] == -1 || slack(edge) < slack(bestedge_[b]))
            bestedge_[b] = edge;
    }
}

void BlossomSolver::expand_blossom(int b, bool endstage) {
    for (int s : childs_[b]) {
        parent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for_each_leaf(s, [&](int v) { inblossom_[v] = s; });
        }
    }
    if (!endstage && label_[b] == 2) {
        assert(labelend_[b] >= 0);
        const auto& childs = childs_[b];
        const auto& endps = endps_[b];
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= static_cast<int>(childs.size());
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[cyc(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[cyc(endps, j - endptrick) / 2] = 1;
            j += jstep;
            p = cyc(endps, j - endptrick) ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int bv = cyc(childs, j);
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (cyc(childs, j) != entrychild) {
            bv = cyc(childs, j);
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for_each_leaf(bv, [&](int v) {
                if (found == -1 && label_[v] != 0)
                    found = v;
            });
            if (found != -1) {
                assert(label_[found] == 2);
                assert(inblossom_[found] == bv);
                label_[found] = 0;
                label_[endpoint_[mate_[base_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    best_list_[b].clear();
    has_best_list_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void BlossomSolver::augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b)
        t = parent_[t];
    if (t >= n_)
        augment_blossom(t, v);
    auto& childs = childs_[b];
    auto& endps = endps_[b];
    int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= static_cast<int>(childs.size());
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = cyc(childs, j);
        int p = cyc(endps, j - endptrick) ^ endptrick;
        if (t >= n_)
            augment_blossom(t, endpoint_[p]);
        j += jstep;
        t = cyc(childs, j);
        if (t >= n_)
            augment_blossom(t, endpoint_[p ^ 1]);
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    base_[b] = base_[childs[0]];
    assert(base_[b] == v);
}

void BlossomSolver::augment_matching(int k) {
    const int ends[2][2] = {{endpoint_[2 * k], 2 * k + 1}, {endpoint_[2 * k + 1], 2 * k}};
    for (const auto& [start, start_p] : ends) {
        int s = start;
        int p = start_p;
        while (true) {
            int bs = inblossom_[s];
            assert(label_[bs] == 1);
            if (bs >= n_)
                augment_blossom(bs, s);
            mate_[s] = p;
            if (labelend_[bs] == -1)
                break;
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            assert(label_[bt] == 2);
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            assert(base_[bt] == t);
            if (bt >= n_)
                augment_blossom(bt, j);
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> BlossomSolver::solve(bool greedy_start) {
    if (greedy_start)
        greedy_init();

    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (int b = n_; b < 2 * n_; ++b) {
            best_list_[b].clear();
            has_best_list_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();

        bool any_free = false;
        for (int v = 0; v < n_; ++v) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
                any_free = true;
            }
        }
        if (!any_free)
            break;

        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                assert(label_[inblossom_[v]] == 1);
                for (int i = nb_start_[v]; i < nb_start_[v + 1]; ++i) {
                    int p = nb_endp_[i];
                    int k = p / 2;
                    int w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w])
                        continue;
                    Weight kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0)
                            allowedge_[k] = 1;
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            int base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            assert(label_[inblossom_[w]] == 2);
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        int b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
                            bestedge_[b] = k;
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
                            bestedge_[w] = k;
                    }
                }
            }
            if (augmented)
                break;

            int deltatype = -1;
            Weight delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            for (int v = 0; v < n_; ++v) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    Weight d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    Weight ks = slack(bestedge_[b]);
                    assert(ks % 2 == 0);
                    Weight d = ks / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                // No augmenting path remains: the matching has maximum cardinality.
                deltatype = 1;
                delta = 0;
            }

            for (int v = 0; v < n_; ++v) {
                int l = label_[inblossom_[v]];
                if (l == 1)
                    dual_[v] -= delta;
                else if (l == 2)
                    dual_[v] += delta;
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base_[b] >= 0 && parent_[b] == -1) {
                    if (label_[b] == 1)
                        dual_[b] += delta;
                    else if (label_[b] == 2)
                        dual_[b] -= delta;
                }
            }

            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = endpoint_[2 * deltaedge];
                int j = endpoint_[2 * deltaedge + 1];
                if (label_[inblossom_[i]] == 0)
                    std::swap(i, j);
                assert(label_[inblossom_[i]] == 1);
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                int i = endpoint_[2 * deltaedge];
                assert(label_[inblossom_[i]] == 1);
                queue_.push_back(i);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented)
            break;

        for (int b = n_; b < 2 * n_; ++b) {
            if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0)
                expand_blossom(b, true);
        }
    }

    std::vector<int> mate(static_cast<std::size_t>(n_), -1);
    for (int v = 0; v < n_; ++v) {
        if (mate_[v] >= 0)
            mate[v] = endpoint_[mate_[v]];
    }
    return mate;
}

bool is_perfect(const std::vector<int>& mate) {
    return std::none_of(mate.begin(), mate.end(), [](int v) { return v < 0; });
}

}  // namespace

std::vector<int> max_weight_matching(int vertex_count, std::span<const WeightedEdge> edges, bool greedy_start) {
    if (vertex_count < 0)
        throw InputError("negative vertex count");
    if (vertex_count == 0 || edges.empty())
        return std::vector<int>(static_cast<std::size_t>(vertex_count), -1);
    BlossomSolver solver(vertex_count, edges);
    auto mate = solver.solve(greedy_start);
    if (greedy_start && !is_perfect(mate))
        return BlossomSolver(vertex_count, edges).solve(false);
    return mate;
}

BlossomCertificate max_weight_matching_certified(int vertex_count, std::span<const WeightedEdge> edges,
                                                 bool greedy_start) {
    if (vertex_count < 0)
        throw InputError("negative vertex count");
    if (vertex_count == 0 || edges.empty()) {
        const auto n = static_cast<std::size_t>(vertex_count);
        return BlossomCertificate{std::vector<int>(n, -1), std::vector<std::int64_t>(2 * n, 0),
                                  std::vector<int>(2 * n, -1)};
    }
    BlossomSolver solver(vertex_count, edges);
    auto mate = solver.solve(greedy_start);
    if (greedy_start && !is_perfect(mate)) {
        BlossomSolver plain(vertex_count, edges);
        auto plain_mate = plain.solve(false);
        return plain.certificate(std::move(plain_mate));
    }
    return solver.certificate(std::move(mate));
}

std::int64_t BlossomCertificate::reduced_slack(int u, int v, std::int64_t weight) const {
    std::int64_t s = dual[u] + dual[v] - 4 * weight;
    if (parent[u] == -1 || parent[v] == -1)
        return s;
    // Blossoms are laminar: walk both ancestor chains and add the duals of the
    // ones they share.
    thread_local std::vector<int> up;
    up.clear();
    for (int b = parent[u]; b != -1; b = parent[b])
        up.push_back(b);
    for (int b = parent[v]; b != -1; b = parent[b]) {
        if (std::find(up.begin(), up.end(), b) != up.end())
            s += 2 * dual[b];
    }
    return s;
}

}  // namespace zerot
