#pragma once

// Scenarios (n parties, per-party setting alphabets, outcome modulus d >= 2),
// functions over joint settings, and the linear / bi-partite-linear structure
// theory on them. Everything operates on value tables, which work uniformly
// for prime and composite moduli; the polynomial views below additionally
// require a prime modulus and throw NonPrimeModulus otherwise.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellpoly {

bool is_prime(int p);

struct NonPrimeModulus : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Mixed-radix codec, most-significant digit first: digits[0] has radix
// radix[0] and carries the largest weight.
long long digits_to_index(const std::vector<int>& digits, const std::vector<int>& radix);
std::vector<int> index_to_digits(long long index, const std::vector<int>& radix);

// A measurement scenario: n >= 1 parties, party j chooses a setting in
// Z_{c[j]} (c[j] >= 2), outcomes live in Z_d (d >= 2, prime or composite).
struct Setting {
  int n = 0;
  std::vector<int> c;
  int d = 2;

  Setting() = default;
  Setting(int n_, int c_uniform, int d_);
  Setting(std::vector<int> c_, int d_);

  void validate() const;  // throws std::invalid_argument
  bool uniform() const;
  long long setting_count() const;        // prod_j c[j]
  long long outcome_string_count() const; // d^n
  int reduced_dim() const;                // (d-1) * setting_count
  long long linear_function_count() const;  // d^{1 + sum_j (c[j]-1)}
  std::string str() const;

  bool operator==(const Setting&) const = default;
};

// Total function f : Z_{c1} x ... x Z_{cn} -> Z_d as a value table indexed by
// the mixed-radix setting index (s1 most significant).
struct FunctionOverSettings {
  Setting setting;
  std::vector<int> table;

  FunctionOverSettings() = default;
  FunctionOverSettings(Setting s, std::vector<int> t);

  int operator()(const std::vector<int>& s) const;
  int at_index(long long idx) const { return table[idx]; }
  bool operator==(const FunctionOverSettings&) const = default;
  std::string str() const;
};

// f(s) = alpha + sum_j sum_a beta[j][a] * [s_j == a]   (mod d),
// gauge-fixed so beta[j][0] == 0 for every party.
struct LinearDecomposition {
  int alpha = 0;
  std::vector<std::vector<int>> beta;
};

// Coefficients (constant term first) of the polynomial
//   delta_y(s) = 1 - (s - y)^{c-1}  mod c,  c prime,
// which is the indicator [s == y] on Z_c.
std::vector<int> delta_polynomial(int y, int c);

FunctionOverSettings function_from_linear(const Setting& s, const LinearDecomposition& dec);

// Additivity test across parties; fills *dec when linear and dec != nullptr.
bool is_n_partite_linear(const FunctionOverSettings& f, LinearDecomposition* dec = nullptr);

// All n-partite linear functions, deterministically ordered (lexicographic in
// the gauge-fixed parameter vector (alpha, beta...)).
std::vector<FunctionOverSettings> enumerate_n_partite_linear(const Setting& s);

// f = g(s_A) + h(s_B) for some bipartition A|B of the parties (n >= 2).
// Fills the partition (as a party->group flag vector) when one exists.
bool is_bipartite_linear(const FunctionOverSettings& f, std::vector<int>* group = nullptr);

// Multivariate polynomial over Z_mod: exponent vector -> coefficient.
struct PolynomialForm {
  int modulus = 2;
  int nvars = 0;
  std::map<std::vector<int>, int> terms;

  int eval(const std::vector<int>& x) const;
  int total_degree() const;
  int degree_in(int var) const;
  std::string str() const;
};

// The unique polynomial of per-variable degree <= domain_size-1 matching a
// value table over {0..domain_size-1}^nvars, with coefficients in Z_d
// (d prime, domain_size <= d required for Lagrange interpolation).
PolynomialForm interpolate_polynomial(const std::vector<int>& table, int nvars,
                                      int domain_size, int d);

// Single-site map g : Z_c -> Z_d written as a polynomial in one variable.
PolynomialForm single_site_map_polynomial(const std::vector<int>& g, int d);

// Prime factorization of a composite setting alphabet (ascending primes,
// with multiplicity).
std::vector<int> factor_setting_alphabet(int c);

}  // namespace bellpoly
