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

#include "zerot/lattice.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"
#include "zerot/errors.hpp"

namespace zerot {

LatticeSpec::LatticeSpec(int dimension, int size) : dimension_(dimension), size_(size) {
    if (dimension != 2 && dimension != 3)
        throw InputError("lattice dimension must be 2 or 3, got " + std::to_string(dimension));
    if (size < 2 || size > 4096)
        throw InputError("lattice size must be in [2, 4096], got " + std::to_string(size));
    site_count_ = 1;
    for (int i = 0; i < dimension; ++i)
        site_count_ *= static_cast<std::size_t>(size);
}

bool LatticeSpec::contains(const Site& s) const {
    for (int i = 0; i < 3; ++i) {
        if (i < dimension_ ? (s[i] < 0 || s[i] >= size_) : s[i] != 0)
            return false;
    }
    return true;
}

std::size_t LatticeSpec::site_index(const Site& s) const {
    std::size_t idx = 0;
    for (int i = dimension_ - 1; i >= 0; --i)
        idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(s[i]);
    return idx;
}

Site LatticeSpec::site_at(std::size_t index) const {
    Site s{};
    for (int i = 0; i < dimension_; ++i) {
        s[i] = static_cast<int>(index % static_cast<std::size_t>(size_));
        index /= static_cast<std::size_t>(size_);
    }
    return s;
}

Site LatticeSpec::step(Site s, int axis, int direction) const {
    int c = s[axis] + direction;
    if (c >= size_)
        c -= size_;
    else if (c < 0)
        c += size_;
    s[axis] = c;
    return s;
}

std::uint64_t bond_index(const DualBond& bond, const LatticeSpec& spec) {
    if (!spec.contains(bond.base) || bond.axis < 0 || bond.axis >= spec.dimension())
        throw InputError("bond out of range for lattice");
    return spec.site_index(bond.base) * static_cast<std::uint64_t>(spec.dimension()) +
           static_cast<std::uint64_t>(bond.axis);
}

DualBond bond_at(std::uint64_t index, const LatticeSpec& spec) {
    if (index >= spec.bond_count())
        throw InputError("bond index " + std::to_string(index) + " out of range");
    const auto d = static_cast<std::uint64_t>(spec.dimension());
    return DualBond{spec.site_at(index / d), static_cast<int>(index % d)};
}

std::array<Site, 2> bond_endpoints(const DualBond& bond, const LatticeSpec& spec) {
    return {bond.base, spec.step(bond.base, bond.axis, +1)};
}

Chain Chain::from_bonds(std::span<const DualBond> bonds, const LatticeSpec& spec) {
    Chain c;
    for (const auto& b : bonds)
        c.toggle(b, spec);
    return c;
}

std::vector<std::uint64_t> Chain::sorted() const {
    std::vector<std::uint64_t> out(bonds_.begin(), bonds_.end());
    std::sort(out.begin(), out.end());
    return out;
}

Chain& Chain::operator+=(const Chain& other) {
    if (this == &other) {
        bonds_.clear();
        return *this;
    }
    for (auto idx : other.bonds_)
        toggle(idx);
    return *this;
}

DefectSet DefectSet::from_sites(std::span<const Site> sites, const LatticeSpec& spec) {
    DefectSet out;
    out.indices_.reserve(sites.size());
    for (const auto& s : sites) {
        if (!spec.contains(s))
            throw InputError("defect site out of range for lattice");
        out.indices_.push_back(spec.site_index(s));
    }
    std::sort(out.indices_.begin(), out.indices_.end());
    if (std::adjacent_find(out.indices_.begin(), out.indices_.end()) != out.indices_.end())
        throw ContractViolation("defect set contains a repeated site");
    if (out.indices_.size() % 2 != 0)
        throw ContractViolation("defect set must have even cardinality, got " +
                                std::to_string(out.indices_.size()));
    return out;
}

std::vector<Site> DefectSet::sites(const LatticeSpec& spec) const {
    std::vector<Site> out;
    out.reserve(indices_.size());
    for (auto idx : indices_)
        out.push_back(spec.site_at(idx));
    return out;
}

DefectSet symmetric_difference(const DefectSet& a, const DefectSet& b) {
    DefectSet out;
    std::set_symmetric_difference(a.indices_.begin(), a.indices_.end(), b.indices_.begin(), b.indices_.end(),
                                  std::back_inserter(out.indices_));
    return out;
}

DefectSet boundary(const Chain& chain, const LatticeSpec& spec) {
    const auto d = static_cast<std::uint64_t>(spec.dimension());
    const auto nbonds = static_cast<std::uint64_t>(spec.bond_count());
    std::vector<std::uint8_t> parity(spec.site_count(), 0);
    for (auto idx : chain) {
        if (idx >= nbonds)
            throw InputError("chain bond index " + std::to_string(idx) + " out of range for lattice");
        const std::size_t site = idx / d;
        const int axis = static_cast<int>(idx % d);
        parity[site] ^= 1;
        parity[spec.site_index(spec.step(spec.site_at(site), axis, +1))] ^= 1;
    }
    DefectSet out;
    for (std::size_t i = 0; i < parity.size(); ++i) {
        if (parity[i])
            out.indices_.push_back(i);
    }
    return out;
}

int torus_distance(const Site& a, const Site& b, const LatticeSpec& spec) {
    if (!spec.contains(a) || !spec.contains(b))
        throw InputError("site out of range for lattice");
    const int L = spec.size();
    int total = 0;
    for (int i = 0; i < spec.dimension(); ++i) {
        int delta = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
        total += std::min(delta, L - delta);
    }
    return total;
}

std::uint8_t cut_parity(const Chain& chain, const LatticeSpec& spec, int axis, int offset) {
    if (axis < 0 || axis >= spec.dimension() || offset < 0 || offset >= spec.size())
        throw InputError("cut axis/offset out of range");
    const auto d = static_cast<std::uint64_t>(spec.dimension());
    std::uint8_t parity = 0;
    for (auto idx : chain) {
        if (static_cast<int>(idx % d) != axis)
            continue;
        if (spec.site_at(idx / d)[axis] == offset)
            parity ^= 1;
    }
    return parity;
}

CycleClass seam_parities(const Chain& chain, const LatticeSpec& spec) {
    CycleClass c;
    c.dimension = spec.dimension();
    for (int axis = 0; axis < spec.dimension(); ++axis)
        c.winding[axis] = cut_parity(chain, spec, axis, spec.size() - 1);
    return c;
}

CycleClass classify_homology(const Chain& cycle, const LatticeSpec& spec) {
    if (!boundary(cycle, spec).empty())
        throw ContractViolation("homology class requested for a chain with nonempty boundary");
    return seam_parities(cycle, spec);
}

namespace {

nlohmann::json site_tuple(const Site& s, const LatticeSpec& spec) {
    auto t = nlohmann::json::array();
    for (int i = 0; i < spec.dimension(); ++i)
        t.push_back(s[i]);
    return t;
}

}  // namespace

std::string chain_json(const Chain& chain, const LatticeSpec& spec) {
    auto out = nlohmann::json::array();
    for (auto index : chain.sorted()) {
        const auto ends = bond_endpoints(bond_at(index, spec), spec);
        out.push_back({site_tuple(ends[0], spec), site_tuple(ends[1], spec)});
    }
    return out.dump();
}

std::string defects_json(const DefectSet& defects, const LatticeSpec& spec) {
    auto out = nlohmann::json::array();
    for (const auto& s : defects.sites(spec))
        out.push_back(site_tuple(s, spec));
    return out.dump();
}

}  // namespace zerot
