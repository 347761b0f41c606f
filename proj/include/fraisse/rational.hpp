#ifndef FRAISSE_RATIONAL_HPP
#define FRAISSE_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "fraisse/errors.hpp"

namespace fraisse {

// Arbitrary-precision rational. All normed-space arithmetic is exact;
// there are no tolerances anywhere in the library.
using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;

// Parses "p/q" or "p" (q > 0 after normalization).
Rat parse_rat(const std::string& tok);

// Prints "p/q", or just "p" when the denominator is 1.
std::string rat_to_string(const Rat& q);

} // namespace fraisse

#endif
