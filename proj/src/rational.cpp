#include "bellpoly/rational.hpp"

namespace bellpoly {

Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  if (r.get_den() <= 0) throw std::invalid_argument("bad rational: " + s);
  return r;
}

std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Int common_denominator(const RatVec& v) {
  Int l = 1;
  for (const Rat& r : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
  return l;
}

IntVec to_integer_row(const RatVec& v) {
  Int l = common_denominator(v);
  IntVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Int q = l / v[i].get_den();
    out[i] = v[i].get_num() * q;
  }
  return out;
}

void reduce_by_gcd(IntVec& v) {
  Int g = 0;
  for (const Int& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g == 0 || g == 1) return;
  for (Int& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

void canonicalize_line(IntVec& v) {
  reduce_by_gcd(v);
  for (const Int& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = -y;
    break;
  }
}

RatVec to_rational_row(const IntVec& v) {
  RatVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

Rat dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s = 0;
  Rat t;
  for (size_t i = 0; i < a.size(); ++i) {
    t = a[i] * b[i];
    s += t;
  }
  return s;
}

Int dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

uint64_t fnv1a(const std::string& s, uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace bellpoly
