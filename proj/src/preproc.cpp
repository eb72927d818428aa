#include "bellpoly/preproc.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bellpoly {

namespace {

long long pow_ll(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_domain(int n, int x_len, int d, int q) {
  if (n < 1) throw std::invalid_argument("need at least one party");
  if (x_len < 1) throw std::invalid_argument("need at least one input digit");
  if (d < 2) throw std::invalid_argument("outcome modulus must be at least 2");
  if (q < 2) throw std::invalid_argument("wiring modulus must be at least 2");
}

// Canonical representative modulo constant shifts: subtract table[0] mod d.
std::vector<int> canonicalize(std::vector<int> t, int d) {
  int c = t[0];
  if (c != 0)
    for (int& v : t) v = (v - c + d) % d;
  return t;
}

// All canonical single-party tables: one linear wiring alpha in Z_q^{x_len}
// composed with one arbitrary site map g in Z_d^q.
std::set<std::vector<int>> single_party_tables(int x_len, int d, int q, long long budget,
                                               long long& evals, bool& complete) {
  const long long nx = pow_ll(q, x_len);
  const long long nwire = pow_ll(q, x_len);
  const long long nmaps = pow_ll(d, q);

  const std::vector<int> xradix(static_cast<size_t>(x_len), q);
  const std::vector<int> gradix(static_cast<size_t>(q), d);

  std::set<std::vector<int>> out;
  std::vector<int> h(static_cast<size_t>(nx), 0);
  std::vector<int> t(static_cast<size_t>(nx), 0);
  for (long long a = 0; a < nwire; ++a) {
    const std::vector<int> alpha = index_to_digits(a, xradix);
    for (long long xi = 0; xi < nx; ++xi) {
      const std::vector<int> x = index_to_digits(xi, xradix);
      int s = 0;
      for (int i = 0; i < x_len; ++i) s += alpha[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
      h[static_cast<size_t>(xi)] = s % q;
    }
    for (long long gi = 0; gi < nmaps; ++gi) {
      if (++evals > budget) {
        complete = false;
        return out;
      }
      const std::vector<int> g = index_to_digits(gi, gradix);
      for (long long xi = 0; xi < nx; ++xi)
        t[static_cast<size_t>(xi)] = g[static_cast<size_t>(h[static_cast<size_t>(xi)])];
      out.insert(canonicalize(t, d));
    }
  }
  return out;
}

BoostedFunctionSet closure(int n, int x_len, int d, int q, long long budget) {
  check_domain(n, x_len, d, q);
  long long evals = 0;
  bool complete = true;
  std::set<std::vector<int>> s1 = single_party_tables(x_len, d, q, budget, evals, complete);

  std::set<std::vector<int>> cur = s1;
  const long long nx = pow_ll(q, x_len);
  std::vector<int> sum(static_cast<size_t>(nx), 0);
  for (int parties = 2; parties <= n && complete; ++parties) {
    // The zero map is a single-party table, so cur is contained in cur + s1
    // and the closure grows monotonically; a fixed point ends the search.
    std::set<std::vector<int>> next = cur;
    for (const auto& a : cur) {
      for (const auto& b : s1) {
        if (++evals > budget) {
          complete = false;
          break;
        }
        for (long long xi = 0; xi < nx; ++xi) {
          int v = a[static_cast<size_t>(xi)] + b[static_cast<size_t>(xi)];
          sum[static_cast<size_t>(xi)] = v >= d ? v - d : v;
        }
        // a[0] = b[0] = 0, so the sum is already canonical.
        next.insert(sum);
      }
      if (!complete) break;
    }
    if (complete && next.size() == cur.size()) break;  // fixed point
    cur = std::move(next);
  }

  BoostedFunctionSet out;
  out.n = n;
  out.x_len = x_len;
  out.d = d;
  out.wiring_modulus = q;
  out.complete = complete;
  out.tables.assign(cur.begin(), cur.end());
  return out;
}

}  // namespace

void PreprocessingWiring::validate() const {
  if (x_len < 1) throw std::invalid_argument("need at least one input digit");
  if (modulus < 2) throw std::invalid_argument("wiring modulus must be at least 2");
  if (alpha.empty()) throw std::invalid_argument("need at least one party");
  for (const auto& row : alpha) {
    if (static_cast<int>(row.size()) != x_len)
      throw std::invalid_argument("wiring row length must equal x_len");
    for (int v : row)
      if (v < 0 || v >= modulus) throw std::invalid_argument("wiring coefficient out of range");
  }
}

int PreprocessingWiring::setting_for(int party, const std::vector<int>& x) const {
  if (party < 0 || party >= static_cast<int>(alpha.size()))
    throw std::out_of_range("party index out of range");
  if (static_cast<int>(x.size()) != x_len) throw std::invalid_argument("x has wrong length");
  int s = 0;
  for (int i = 0; i < x_len; ++i) {
    int xi = x[static_cast<size_t>(i)];
    if (xi < 0 || xi >= modulus) throw std::invalid_argument("x digit out of range");
    s += alpha[static_cast<size_t>(party)][static_cast<size_t>(i)] * xi;
  }
  return s % modulus;
}

std::vector<int> boosted_table(const PreprocessingWiring& wiring,
                               const std::vector<std::vector<int>>& site_maps, int d) {
  wiring.validate();
  if (d < 2) throw std::invalid_argument("outcome modulus must be at least 2");
  if (site_maps.size() != wiring.alpha.size())
    throw std::invalid_argument("one site map per wiring row required");
  for (const auto& g : site_maps) {
    if (static_cast<int>(g.size()) != wiring.modulus)
      throw std::invalid_argument("site map must cover Z_q");
    for (int v : g)
      if (v < 0 || v >= d) throw std::invalid_argument("site map value out of range");
  }
  const long long nx = pow_ll(wiring.modulus, wiring.x_len);
  const std::vector<int> xradix(static_cast<size_t>(wiring.x_len), wiring.modulus);
  std::vector<int> t(static_cast<size_t>(nx), 0);
  for (long long xi = 0; xi < nx; ++xi) {
    const std::vector<int> x = index_to_digits(xi, xradix);
    int v = 0;
    for (size_t j = 0; j < site_maps.size(); ++j)
      v += site_maps[j][static_cast<size_t>(wiring.setting_for(static_cast<int>(j), x))];
    t[static_cast<size_t>(xi)] = v % d;
  }
  return t;
}

bool BoostedFunctionSet::contains(const std::vector<int>& table) const {
  if (static_cast<long long>(table.size()) != pow_ll(wiring_modulus, x_len))
    throw std::invalid_argument("table has wrong length");
  for (int v : table)
    if (v < 0 || v >= d) throw std::invalid_argument("table value out of range");
  std::vector<int> key = canonicalize(table, d);
  return std::binary_search(tables.begin(), tables.end(), key);
}

long long BoostedFunctionSet::expanded_count() const {
  return static_cast<long long>(tables.size()) * d;
}

BoostedFunctionSet achievable_boosted_functions(int n, int x_len, int d, int wiring_modulus,
                                                long long budget) {
  return closure(n, x_len, d, wiring_modulus, budget);
}

bool is_boosted_achievable(const FunctionOverSettings& f, int n_max, long long budget) {
  f.setting.validate();
  const int x_len = f.setting.n;
  const int d = f.setting.d;
  for (int c : f.setting.c)
    if (c != f.setting.c[0])
      throw std::invalid_argument("x digits must share one wiring modulus");
  const int q = f.setting.c[0];
  BoostedFunctionSet set = achievable_boosted_functions(n_max, x_len, d, q, budget);
  if (set.contains(f.table)) return true;  // certain even from a partial set
  if (!set.complete) throw BudgetExceeded("search budget exhausted before a decision");
  return false;
}

Rat boosted_bell_bound(const FunctionOverSettings& f, int n, const InputWeights& weights,
                       long long budget) {
  f.setting.validate();
  weights.validate();
  if (!(weights.setting == f.setting))
    throw std::invalid_argument("weights must live on the function's input domain");
  for (int c : f.setting.c)
    if (c != f.setting.c[0])
      throw std::invalid_argument("x digits must share one wiring modulus");
  const int q = f.setting.c[0];
  const int d = f.setting.d;
  BoostedFunctionSet set = achievable_boosted_functions(n, f.setting.n, d, q, budget);
  if (!set.complete) throw BudgetExceeded("search budget exhausted before the bound was exact");

  Rat best{0};
  const size_t nx = f.table.size();
  for (const auto& t : set.tables) {
    for (int shift = 0; shift < d; ++shift) {
      Rat val{0};
      for (size_t xi = 0; xi < nx; ++xi) {
        int v = t[xi] + shift;
        if (v >= d) v -= d;
        if (v == f.table[xi]) val += weights.w[xi];
      }
      if (val > best) best = val;
    }
  }
  return best;
}

}  // namespace bellpoly
