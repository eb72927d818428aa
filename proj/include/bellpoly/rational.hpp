#pragma once

// Exact arithmetic used throughout: arbitrary-precision integers and
// normalized rationals, backed by GMP.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellpoly {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// "7", "-3/4"; denominator must be positive after normalization.
Rat rat_parse(const std::string& s);
std::string rat_str(const Rat& r);

// Least common multiple of the denominators of v (>= 1).
Int common_denominator(const RatVec& v);

// v scaled by the common denominator; exact.
IntVec to_integer_row(const RatVec& v);

// Divide an integer row by the gcd of its entries (gcd of all |entries|);
// the zero row is left untouched. Does not touch signs.
void reduce_by_gcd(IntVec& v);

// reduce_by_gcd + flip signs so the first nonzero entry is positive.
// Canonical representative of a line through the origin.
void canonicalize_line(IntVec& v);

RatVec to_rational_row(const IntVec& v);

// Exact dot products.
Rat dot(const RatVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);

struct IntVecLess {
  bool operator()(const IntVec& a, const IntVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
      int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull);

}  // namespace bellpoly
