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

#ifndef ZEROT_DISORDER_HPP
#define ZEROT_DISORDER_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "zerot/decimal.hpp"
#include "zerot/lattice.hpp"

namespace zerot {

/// rbim2d: random-bond Ising model on the square torus (E = antiferromagnetic
/// bonds, defects = Ising vortices).
/// rpgm3d: random-plaquette Z2 gauge model on the 3-torus (E = wrong-sign
/// plaquettes seen as dual bonds, defects = magnetic monopoles).
enum class Model { rbim2d, rpgm3d };

int model_dimension(Model model);
std::string_view model_name(Model model);
Model parse_model(std::string_view name);
/// Fraction of homology classes that are nontrivial: 3/4 in 2D, 7/8 in 3D.
double failure_asymptote(Model model);

/// Seed derivation for reproducible, order-independent sampling.
struct RngPolicy {
    std::uint64_t master_seed = 0;

    /// Key for the error chain of one sample.
    std::uint64_t sample_key(Model model, int size, Decimal p, std::uint64_t sample_index) const;
    /// Tie-breaking seed for the matcher and path builder of the same sample.
    std::uint64_t tie_seed(Model model, int size, Decimal p, std::uint64_t sample_index) const;
};

struct DisorderSample {
    LatticeSpec spec;
    Model model;
    Decimal p;
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;  // stream key the chain was drawn from
    Chain error_chain;
};

/// Each dual bond joins E independently with probability p. InputError on a
/// model/dimension mismatch or p outside [0, 1].
DisorderSample generate_sample(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                               const RngPolicy& rng);

DefectSet defects(const DisorderSample& sample);

/// K_p = 1/2 ln((1-p)/p), the Nishimori-line coupling. DomainError unless 0 < p < 1.
double nishimori_coupling(double p);

}  // namespace zerot

#endif
