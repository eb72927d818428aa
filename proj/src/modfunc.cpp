#include "bellpoly/modfunc.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bellpoly {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; (long long)q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

long long digits_to_index(const std::vector<int>& digits, const std::vector<int>& radix) {
  if (digits.size() != radix.size()) throw std::invalid_argument("digit/radix size mismatch");
  long long idx = 0;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= radix[i]) throw std::out_of_range("digit out of range");
    idx = idx * radix[i] + digits[i];
  }
  return idx;
}

std::vector<int> index_to_digits(long long index, const std::vector<int>& radix) {
  std::vector<int> digits(radix.size());
  for (size_t i = radix.size(); i-- > 0;) {
    digits[i] = (int)(index % radix[i]);
    index /= radix[i];
  }
  if (index != 0) throw std::out_of_range("index out of range");
  return digits;
}

Setting::Setting(int n_, int c_uniform, int d_) : n(n_), c(n_ > 0 ? n_ : 0, c_uniform), d(d_) {
  validate();
}

Setting::Setting(std::vector<int> c_, int d_) : n((int)c_.size()), c(std::move(c_)), d(d_) {
  validate();
}

void Setting::validate() const {
  if (n < 1) throw std::invalid_argument("setting: need n >= 1");
  if ((int)c.size() != n) throw std::invalid_argument("setting: c size != n");
  for (int cj : c)
    if (cj < 2) throw std::invalid_argument("setting: need c_j >= 2");
  if (d < 2) throw std::invalid_argument("setting: need outcome modulus d >= 2");
}

bool Setting::uniform() const {
  return std::all_of(c.begin(), c.end(), [&](int cj) { return cj == c[0]; });
}

long long Setting::setting_count() const {
  long long p = 1;
  for (int cj : c) p *= cj;
  return p;
}

long long Setting::outcome_string_count() const {
  long long p = 1;
  for (int j = 0; j < n; ++j) p *= d;
  return p;
}

int Setting::reduced_dim() const { return (int)((d - 1) * setting_count()); }

long long Setting::linear_function_count() const {
  long long e = 1;
  for (int cj : c) e += cj - 1;
  long long p = 1;
  for (long long i = 0; i < e; ++i) p *= d;
  return p;
}

std::string Setting::str() const {
  std::ostringstream os;
  if (uniform()) {
    os << "(" << n << "," << c[0] << "," << d << ")";
  } else {
    os << "(" << n << ",[";
    for (int j = 0; j < n; ++j) os << (j ? " " : "") << c[j];
    os << "]," << d << ")";
  }
  return os.str();
}

FunctionOverSettings::FunctionOverSettings(Setting s, std::vector<int> t)
    : setting(std::move(s)), table(std::move(t)) {
  if ((long long)table.size() != setting.setting_count())
    throw std::invalid_argument("function table has wrong size");
  for (int v : table)
    if (v < 0 || v >= setting.d) throw std::invalid_argument("function value out of Z_d");
}

int FunctionOverSettings::operator()(const std::vector<int>& s) const {
  return table[digits_to_index(s, setting.c)];
}

std::string FunctionOverSettings::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < table.size(); ++i) os << (i ? "," : "") << table[i];
  return os.str();
}

std::vector<int> delta_polynomial(int y, int c) {
  if (!is_prime(c)) throw NonPrimeModulus("delta_polynomial: modulus must be prime");
  if (y < 0 || y >= c) throw std::invalid_argument("delta_polynomial: y out of Z_c");
  // 1 - (s - y)^{c-1}: expand with binomials mod c.
  std::vector<long long> binom(c, 0);
  binom[0] = 1;
  for (int row = 1; row <= c - 1; ++row)
    for (int k = row; k > 0; --k) binom[k] = (binom[k] + binom[k - 1]) % c;
  std::vector<int> coeff(c, 0);
  // (s - y)^{c-1} = sum_k C(c-1,k) s^k (-y)^{c-1-k}
  for (int k = 0; k <= c - 1; ++k) {
    long long my = ((-y) % c + c) % c;
    long long pw = 1;
    for (int t = 0; t < c - 1 - k; ++t) pw = pw * my % c;
    long long v = binom[k] * pw % c;
    coeff[k] = (int)((c - v) % c);  // negated
  }
  coeff[0] = (coeff[0] + 1) % c;  // the leading 1
  return coeff;
}

FunctionOverSettings function_from_linear(const Setting& s, const LinearDecomposition& dec) {
  if ((int)dec.beta.size() != s.n) throw std::invalid_argument("beta size != n");
  std::vector<int> table(s.setting_count());
  std::vector<int> digits(s.n, 0);
  for (long long idx = 0; idx < (long long)table.size(); ++idx) {
    auto sd = index_to_digits(idx, s.c);
    int v = dec.alpha % s.d;
    for (int j = 0; j < s.n; ++j) v = (v + dec.beta[j][sd[j]]) % s.d;
    table[idx] = v;
  }
  return FunctionOverSettings(s, std::move(table));
}

bool is_n_partite_linear(const FunctionOverSettings& f, LinearDecomposition* dec) {
  const Setting& st = f.setting;
  std::vector<int> origin(st.n, 0);
  int f0 = f(origin);
  LinearDecomposition cand;
  cand.alpha = f0;
  cand.beta.assign(st.n, {});
  for (int j = 0; j < st.n; ++j) {
    cand.beta[j].assign(st.c[j], 0);
    std::vector<int> s = origin;
    for (int a = 1; a < st.c[j]; ++a) {
      s[j] = a;
      cand.beta[j][a] = ((f(s) - f0) % st.d + st.d) % st.d;
    }
  }
  FunctionOverSettings g = function_from_linear(st, cand);
  if (g.table != f.table) return false;
  if (dec) *dec = cand;
  return true;
}

std::vector<FunctionOverSettings> enumerate_n_partite_linear(const Setting& s) {
  long long count = s.linear_function_count();
  if (count > 20'000'000LL) throw std::runtime_error("linear family too large to enumerate");
  // parameter digits: alpha, then beta[j][a] for a = 1..c_j-1, party-major
  int nparams = 1;
  for (int cj : s.c) nparams += cj - 1;
  std::vector<int> radix(nparams, s.d);
  std::vector<FunctionOverSettings> out;
  out.reserve(count);
  for (long long p = 0; p < count; ++p) {
    auto digits = index_to_digits(p, radix);
    LinearDecomposition dec;
    dec.alpha = digits[0];
    dec.beta.assign(s.n, {});
    int pos = 1;
    for (int j = 0; j < s.n; ++j) {
      dec.beta[j].assign(s.c[j], 0);
      for (int a = 1; a < s.c[j]; ++a) dec.beta[j][a] = digits[pos++];
    }
    out.push_back(function_from_linear(s, dec));
  }
  return out;
}

bool is_bipartite_linear(const FunctionOverSettings& f, std::vector<int>* group) {
  const Setting& st = f.setting;
  if (st.n < 2) throw std::invalid_argument("bi-partite linearity needs n >= 2");
  if (st.n > 24) throw std::invalid_argument("too many parties");
  long long m = st.setting_count();
  std::vector<int> origin(st.n, 0);
  int f0 = f(origin);
  // mask over parties: group A = bits set; require 0 < mask, party 0 in A to
  // halve the search. f separable iff f(s) = f(s_A,0) + f(0,s_B) - f(0).
  for (unsigned mask = 1; mask < (1u << st.n); mask += 2) {
    if (mask == (1u << st.n) - 1) continue;
    bool ok = true;
    for (long long idx = 0; idx < m && ok; ++idx) {
      auto sd = index_to_digits(idx, st.c);
      std::vector<int> sa(st.n, 0), sb(st.n, 0);
      for (int j = 0; j < st.n; ++j) ((mask >> j) & 1 ? sa : sb)[j] = sd[j];
      int want = ((f(sa) + f(sb) - f0) % st.d + st.d) % st.d;
      ok = want == f.at_index(idx);
    }
    if (ok) {
      if (group) {
        group->assign(st.n, 0);
        for (int j = 0; j < st.n; ++j) (*group)[j] = (mask >> j) & 1;
      }
      return true;
    }
  }
  return false;
}

int PolynomialForm::eval(const std::vector<int>& x) const {
  if ((int)x.size() != nvars) throw std::invalid_argument("poly eval: arity mismatch");
  long long acc = 0;
  for (const auto& [expo, coef] : terms) {
    long long t = coef;
    for (int i = 0; i < nvars; ++i) {
      for (int e = 0; e < expo[i]; ++e) t = t * x[i] % modulus;
    }
    acc = (acc + t) % modulus;
  }
  return (int)((acc % modulus + modulus) % modulus);
}

int PolynomialForm::total_degree() const {
  int deg = 0;
  for (const auto& [expo, coef] : terms) {
    if (coef % modulus == 0) continue;
    int t = 0;
    for (int e : expo) t += e;
    deg = std::max(deg, t);
  }
  return deg;
}

int PolynomialForm::degree_in(int var) const {
  int deg = 0;
  for (const auto& [expo, coef] : terms)
    if (coef % modulus != 0) deg = std::max(deg, expo[var]);
  return deg;
}

std::string PolynomialForm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [expo, coef] : terms) {
    int cv = ((coef % modulus) + modulus) % modulus;
    if (cv == 0) continue;
    if (!first) os << " + ";
    first = false;
    bool constant = std::all_of(expo.begin(), expo.end(), [](int e) { return e == 0; });
    if (cv != 1 || constant) os << cv;
    for (int i = 0; i < nvars; ++i) {
      if (expo[i] == 0) continue;
      os << "x" << i + 1;
      if (expo[i] > 1) os << "^" << expo[i];
    }
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// One-variable Lagrange basis polynomial through points {0..m-1} subset Z_d:
// L_y(x) = prod_{t != y} (x - t) / (y - t), coefficients mod d (d prime).
std::vector<int> lagrange_basis(int y, int m, int d) {
  std::vector<long long> poly{1};
  long long denom = 1;
  for (int t = 0; t < m; ++t) {
    if (t == y) continue;
    // multiply by (x - t)
    std::vector<long long> next(poly.size() + 1, 0);
    for (size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] = (next[k + 1] + poly[k]) % d;
      next[k] = (next[k] + poly[k] * ((d - t % d) % d)) % d;
    }
    poly = std::move(next);
    denom = denom * (((y - t) % d + d) % d) % d;
  }
  // modular inverse of denom via Fermat
  long long inv = 1, base = denom, e = d - 2;
  while (e) {
    if (e & 1) inv = inv * base % d;
    base = base * base % d;
    e >>= 1;
  }
  std::vector<int> out(poly.size());
  for (size_t k = 0; k < poly.size(); ++k) out[k] = (int)(poly[k] * inv % d);
  return out;
}

}  // namespace

PolynomialForm interpolate_polynomial(const std::vector<int>& table, int nvars,
                                      int domain_size, int d) {
  if (!is_prime(d)) throw NonPrimeModulus("interpolation modulus must be prime");
  if (domain_size < 2 || domain_size > d)
    throw std::invalid_argument("domain must embed in Z_d");
  long long npoints = 1;
  for (int i = 0; i < nvars; ++i) npoints *= domain_size;
  if ((long long)table.size() != npoints) throw std::invalid_argument("table size mismatch");

  // cache the one-variable basis polys
  std::vector<std::vector<int>> basis(domain_size);
  for (int y = 0; y < domain_size; ++y) basis[y] = lagrange_basis(y, domain_size, d);

  PolynomialForm poly;
  poly.modulus = d;
  poly.nvars = nvars;
  std::vector<int> radix(nvars, domain_size);
  for (long long idx = 0; idx < npoints; ++idx) {
    int v = table[idx] % d;
    if (v == 0) continue;
    auto y = index_to_digits(idx, radix);
    // term v * prod_i L_{y_i}(x_i): expand over basis coefficient choices
    std::vector<int> expo(nvars, 0);
    // iterate the product expansion with an odometer over exponents
    std::vector<int> lim(nvars);
    for (int i = 0; i < nvars; ++i) lim[i] = (int)basis[y[i]].size();
    std::vector<int> k(nvars, 0);
    while (true) {
      long long coef = v;
      for (int i = 0; i < nvars; ++i) coef = coef * basis[y[i]][k[i]] % d;
      if (coef != 0) {
        auto& slot = poly.terms[k];
        slot = (int)((slot + coef) % d);
      }
      int i = nvars - 1;
      while (i >= 0 && ++k[i] == lim[i]) k[i--] = 0;
      if (i < 0) break;
    }
  }
  // drop zero coefficients
  for (auto it = poly.terms.begin(); it != poly.terms.end();)
    it = (it->second % d == 0) ? poly.terms.erase(it) : std::next(it);
  return poly;
}

PolynomialForm single_site_map_polynomial(const std::vector<int>& g, int d) {
  return interpolate_polynomial(g, 1, (int)g.size(), d);
}

std::vector<int> factor_setting_alphabet(int c) {
  if (c < 2) throw std::invalid_argument("alphabet size must be >= 2");
  std::vector<int> out;
  for (int p = 2; (long long)p * p <= c; ++p)
    while (c % p == 0) {
      out.push_back(p);
      c /= p;
    }
  if (c > 1) out.push_back(c);
  return out;
}

}  // namespace bellpoly
