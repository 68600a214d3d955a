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

#ifndef ZEROT_DECIMAL_HPP
#define ZEROT_DECIMAL_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace zerot {

/// Fixed-point decimal with 10^-6 resolution. Probabilities and grid steps are
/// carried in this form so that seeds and grid points never depend on float
/// rounding.
class Decimal {
  public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr Decimal() = default;
    static constexpr Decimal from_micros(std::int64_t micros) {
        Decimal d;
        d.micros_ = micros;
        return d;
    }

    /// Parses "0.103", "1", ".5", "-0.01". More than six fractional digits is
    /// an InputError unless the extra digits are zeros.
    static Decimal parse(std::string_view text);

    constexpr std::int64_t micros() const { return micros_; }
    double value() const { return static_cast<double>(micros_) / static_cast<double>(kScale); }

    /// Shortest decimal rendering: 0.1, 0.0293, 0, 1.
    std::string str() const;

    friend constexpr auto operator<=>(Decimal, Decimal) = default;
    friend constexpr Decimal operator+(Decimal a, Decimal b) { return from_micros(a.micros_ + b.micros_); }
    friend constexpr Decimal operator-(Decimal a, Decimal b) { return from_micros(a.micros_ - b.micros_); }

  private:
    std::int64_t micros_ = 0;
};

}  // namespace zerot

#endif
