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

#include "zerot/decimal.hpp"

#include <cstdlib>

#include "zerot/errors.hpp"

namespace zerot {

Decimal Decimal::parse(std::string_view text) {
    const std::string original(text);
    if (text.empty())
        throw InputError("empty decimal");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot)
                throw InputError("malformed decimal '" + original + "'");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw InputError("malformed decimal '" + original + "'");
        seen_digit = true;
        int digit = c - '0';
        if (!seen_dot) {
            whole = whole * 10 + digit;
            if (whole > 1'000'000'000'000LL)
                throw InputError("decimal out of range '" + original + "'");
        } else if (frac_digits < 6) {
            frac = frac * 10 + digit;
            ++frac_digits;
        } else if (digit != 0) {
            throw InputError("decimal '" + original + "' has more than 6 fractional digits");
        }
    }
    if (!seen_digit)
        throw InputError("malformed decimal '" + original + "'");
    while (frac_digits < 6) {
        frac *= 10;
        ++frac_digits;
    }
    std::int64_t micros = whole * kScale + frac;
    return from_micros(negative ? -micros : micros);
}

std::string Decimal::str() const {
    std::int64_t m = micros_;
    std::string out;
    if (m < 0) {
        out.push_back('-');
        m = -m;
    }
    out += std::to_string(m / kScale);
    std::int64_t frac = m % kScale;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 6 - digits.size(), '0');
        while (digits.back() == '0')
            digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

}  // namespace zerot
