// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bcdof {

using Rational = mpq_class;

/// "num/den" with den >= 1, always including the denominator.
std::string to_string(const Rational& q);

/// Accepts "n", "n/d" or a finite decimal such as "-0.25". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational from_double(double x);

} // namespace bcdof
