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

#ifndef ZEROT_RNG_HPP
#define ZEROT_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace zerot {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive hash of a word sequence. Used to derive stream keys.
constexpr std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t w : words)
        h = mix64(h ^ mix64(w));
    return h;
}

/// Counter-based generator: the n-th output is a pure function of (key, n),
/// so any stream can be regenerated from its key alone.
class CounterRng {
  public:
    explicit constexpr CounterRng(std::uint64_t key) : key_(mix64(key)) {}

    constexpr std::uint64_t operator()() { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift; the rejection loop removes modulo bias.
        while (true) {
            unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
            auto low = static_cast<std::uint64_t>(m);
            if (low >= n || low >= (-n) % n)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    constexpr std::uint64_t key() const { return key_; }
    constexpr std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace zerot

#endif
