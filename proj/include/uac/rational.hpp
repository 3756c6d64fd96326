#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace uac {

using Rational = mpq_class;
using Vec = std::vector<Rational>;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view s);
std::string to_string(const Rational& r);

Rational dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& v);

/// Scales v by a positive factor so its entries are coprime integers.
Vec primitive(const Vec& v);

Vec vec_from_ints(const std::vector<long>& xs);
std::vector<long> to_ints(const Vec& v);
std::string vec_str(const Vec& v);

/// Lexicographic comparison, used for deterministic ordering of rays.
bool lex_less(const Vec& a, const Vec& b);

} // namespace uac
