#pragma once

#include <gmpxx.h>

#include <string>

namespace isingclt {

using ExactRational = mpq_class;
using BigInt = mpz_class;

/// Always "p/q", including q == 1.
std::string to_fraction_string(const ExactRational& q);

/// Parses "p/q" or "p".
ExactRational parse_fraction(const std::string& s);

BigInt factorial(unsigned n);

}  // namespace isingclt
