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

#include "zerot/disorder.hpp"

#include <cmath>

#include "zerot/errors.hpp"
#include "zerot/rng.hpp"

namespace zerot {

namespace {

constexpr std::uint64_t kSampleTag = 0x53414d504c45ULL;  // "SAMPLE"
constexpr std::uint64_t kTieTag = 0x544945ULL;           // "TIE"

std::uint64_t model_id(Model model) { return model == Model::rbim2d ? 1 : 2; }

// Threshold t such that a uniform 64-bit word u satisfies u < t with
// probability exactly p (for p < 1).
std::uint64_t bernoulli_threshold(Decimal p) {
    unsigned __int128 num = static_cast<unsigned __int128>(p.micros()) << 64;
    return static_cast<std::uint64_t>(num / static_cast<unsigned __int128>(Decimal::kScale));
}

}  // namespace

int model_dimension(Model model) { return model == Model::rbim2d ? 2 : 3; }

std::string_view model_name(Model model) { return model == Model::rbim2d ? "rbim2d" : "rpgm3d"; }

Model parse_model(std::string_view name) {
    if (name == "rbim2d")
        return Model::rbim2d;
    if (name == "rpgm3d")
        return Model::rpgm3d;
    throw InputError("unknown model '" + std::string(name) + "' (expected rbim2d or rpgm3d)");
}

double failure_asymptote(Model model) { return model == Model::rbim2d ? 0.75 : 0.875; }

std::uint64_t RngPolicy::sample_key(Model model, int size, Decimal p, std::uint64_t sample_index) const {
    return hash_words({kSampleTag, master_seed, model_id(model), static_cast<std::uint64_t>(size),
                       static_cast<std::uint64_t>(p.micros()), sample_index});
}

std::uint64_t RngPolicy::tie_seed(Model model, int size, Decimal p, std::uint64_t sample_index) const {
    return hash_words({kTieTag, sample_key(model, size, p, sample_index)});
}

DisorderSample generate_sample(const LatticeSpec& spec, Model model, Decimal p, std::uint64_t sample_index,
                               const RngPolicy& rng) {
    if (model_dimension(model) != spec.dimension())
        throw InputError(std::string(model_name(model)) + " requires a " +
                         std::to_string(model_dimension(model)) + "D lattice");
    if (p < Decimal{} || p > Decimal::from_micros(Decimal::kScale))
        throw InputError("p must lie in [0, 1], got " + p.str());

    DisorderSample sample{spec, model, p, sample_index, rng.sample_key(model, spec.size(), p, sample_index), {}};
    const std::uint64_t nbonds = spec.bond_count();
    if (p.micros() == 0)
        return sample;
    if (p.micros() == Decimal::kScale) {
        sample.error_chain.reserve(nbonds);
        for (std::uint64_t b = 0; b < nbonds; ++b)
            sample.error_chain.toggle(b);
        return sample;
    }
    const std::uint64_t threshold = bernoulli_threshold(p);
    CounterRng gen(sample.seed);
    sample.error_chain.reserve(static_cast<std::size_t>(2.0 * p.value() * static_cast<double>(nbonds)) + 8);
    for (std::uint64_t b = 0; b < nbonds; ++b) {
        if (gen() < threshold)
            sample.error_chain.toggle(b);
    }
    return sample;
}

DefectSet defects(const DisorderSample& sample) { return boundary(sample.error_chain, sample.spec); }

double nishimori_coupling(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("Nishimori coupling needs 0 < p < 1");
    return 0.5 * std::log((1.0 - p) / p);
}

}  // namespace zerot
