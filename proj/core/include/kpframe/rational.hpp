#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kpf {

using Rational = mpq_class;

std::string to_string(const Rational& q);

// Accepts "3", "-3", "3/4", "-3/4"; result is canonical.
Rational parse_rational(std::string_view text);

}  // namespace kpf
