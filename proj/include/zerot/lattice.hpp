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

#ifndef ZEROT_LATTICE_HPP
#define ZEROT_LATTICE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace zerot {

/// Dual-lattice site coordinates. Components beyond the lattice dimension are 0.
using Site = std::array<int, 3>;

/// A periodic L^d cubic lattice, d in {2, 3}. All objects the simulator works
/// with (error chains, recovery chains, defects) live on its dual lattice,
/// which is again an L^d torus, so only the dual is ever represented.
class LatticeSpec {
  public:
    LatticeSpec(int dimension, int size);

    int dimension() const { return dimension_; }
    int size() const { return size_; }
    std::size_t site_count() const { return site_count_; }
    std::size_t bond_count() const { return site_count_ * static_cast<std::size_t>(dimension_); }

    bool contains(const Site& s) const;
    std::size_t site_index(const Site& s) const;
    Site site_at(std::size_t index) const;

    /// Neighbor of s one step along axis in direction +1 or -1, with wraparound.
    Site step(Site s, int axis, int direction) const;

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

  private:
    int dimension_;
    int size_;
    std::size_t site_count_;
};

/// A dual bond in canonical form: it joins `base` to base + e_axis.
struct DualBond {
    Site base{};
    int axis = 0;

    friend bool operator==(const DualBond&, const DualBond&) = default;
};

std::uint64_t bond_index(const DualBond& bond, const LatticeSpec& spec);
DualBond bond_at(std::uint64_t index, const LatticeSpec& spec);
std::array<Site, 2> bond_endpoints(const DualBond& bond, const LatticeSpec& spec);

/// Mod-2 one-chain: a set of canonical bond indices, added by symmetric difference.
class Chain {
  public:
    using Storage = std::unordered_set<std::uint64_t>;

    Chain() = default;
    static Chain from_bonds(std::span<const DualBond> bonds, const LatticeSpec& spec);

    /// Adds one bond mod 2.
    void toggle(std::uint64_t index) {
        if (auto it = bonds_.find(index); it != bonds_.end())
            bonds_.erase(it);
        else
            bonds_.insert(index);
    }
    void toggle(const DualBond& bond, const LatticeSpec& spec) { toggle(bond_index(bond, spec)); }

    bool contains(std::uint64_t index) const { return bonds_.count(index) != 0; }
    std::size_t size() const { return bonds_.size(); }
    bool empty() const { return bonds_.empty(); }
    void reserve(std::size_t n) { bonds_.reserve(n); }

    Storage::const_iterator begin() const { return bonds_.begin(); }
    Storage::const_iterator end() const { return bonds_.end(); }

    /// Bond indices in increasing order (stable output for dumps and tests).
    std::vector<std::uint64_t> sorted() const;

    Chain& operator+=(const Chain& other);
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend bool operator==(const Chain& a, const Chain& b) { return a.bonds_ == b.bonds_; }

  private:
    Storage bonds_;
};

/// Dual sites where a chain has nonzero boundary: Ising vortices in 2D,
/// magnetic monopoles in 3D. Always of even cardinality.
class DefectSet {
  public:
    DefectSet() = default;

    /// Throws ContractViolation on odd cardinality or repeated sites, InputError
    /// on out-of-range sites.
    static DefectSet from_sites(std::span<const Site> sites, const LatticeSpec& spec);

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    const std::vector<std::size_t>& indices() const { return indices_; }
    std::vector<Site> sites(const LatticeSpec& spec) const;

    friend bool operator==(const DefectSet&, const DefectSet&) = default;
    friend DefectSet symmetric_difference(const DefectSet& a, const DefectSet& b);

  private:
    friend DefectSet boundary(const Chain& chain, const LatticeSpec& spec);
    std::vector<std::size_t> indices_;  // sorted, unique
};

/// Winding parity of a one-cycle along each torus axis.
struct CycleClass {
    int dimension = 2;
    std::array<std::uint8_t, 3> winding{};

    bool trivial() const { return winding[0] == 0 && winding[1] == 0 && winding[2] == 0; }
    /// Class label in [0, 2^d).
    unsigned bits() const { return winding[0] | (winding[1] << 1) | (winding[2] << 2); }

    friend CycleClass operator^(CycleClass a, const CycleClass& b) {
        for (int i = 0; i < 3; ++i)
            a.winding[i] ^= b.winding[i];
        return a;
    }
    friend bool operator==(const CycleClass&, const CycleClass&) = default;
};

/// Sites touched by an odd number of chain bonds. InputError if a bond index
/// is out of range for spec.
DefectSet boundary(const Chain& chain, const LatticeSpec& spec);

/// L1 distance on the torus: sum over axes of min(|d|, L - |d|).
int torus_distance(const Site& a, const Site& b, const LatticeSpec& spec);

/// Parity of the number of bonds along `axis` crossing the codimension-1 cut
/// between coordinate offset and offset+1 (mod L).
std::uint8_t cut_parity(const Chain& chain, const LatticeSpec& spec, int axis, int offset);

/// Homology class of a cycle, read off at the L-1 -> 0 seam of every axis.
/// ContractViolation if the chain has a boundary.
CycleClass classify_homology(const Chain& cycle, const LatticeSpec& spec);

/// Same seam parities without the boundary check. Additive over chain sums,
/// which lets callers combine classes of non-closed pieces.
CycleClass seam_parities(const Chain& chain, const LatticeSpec& spec);

/// Debug dumps. A chain is an array of bonds, each written as the coordinate
/// tuples of its two endpoint sites, in bond-index order; a defect set is an
/// array of site tuples.
std::string chain_json(const Chain& chain, const LatticeSpec& spec);
std::string defects_json(const DefectSet& defects, const LatticeSpec& spec);

}  // namespace zerot

#endif
