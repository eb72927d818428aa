#include "bellpoly/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace bellpoly {

void SymmetryElement::validate() const {
  setting.validate();
  const int n = setting.n;
  if ((int)pi.size() != n || (int)alpha.size() != n || (int)beta.size() != n)
    throw std::invalid_argument("symmetry element: wrong field sizes");
  std::vector<char> hit(n, 0);
  for (int j = 0; j < n; ++j) {
    if (pi[j] < 0 || pi[j] >= n || hit[pi[j]])
      throw std::invalid_argument("symmetry element: pi is not a permutation");
    hit[pi[j]] = 1;
    if (setting.c[pi[j]] != setting.c[j])
      throw IncompatiblePermutation("symmetry element: parties with different alphabets");
    if (alpha[j] < 0 || alpha[j] >= setting.c[j])
      throw std::invalid_argument("symmetry element: setting shift out of range");
    if ((int)beta[j].size() != setting.c[j])
      throw std::invalid_argument("symmetry element: outcome shift table size");
    for (int b : beta[j])
      if (b < 0 || b >= setting.d)
        throw std::invalid_argument("symmetry element: outcome shift out of range");
  }
}

SymmetryElement identity_element(const Setting& st) {
  st.validate();
  SymmetryElement g;
  g.setting = st;
  g.pi.resize(st.n);
  std::iota(g.pi.begin(), g.pi.end(), 0);
  g.alpha.assign(st.n, 0);
  g.beta.resize(st.n);
  for (int j = 0; j < st.n; ++j) g.beta[j].assign(st.c[j], 0);
  return g;
}

SymmetryElement compose(const SymmetryElement& g, const SymmetryElement& h) {
  g.validate();
  h.validate();
  if (!(g.setting == h.setting)) throw SettingMismatch("compose: setting mismatch");
  const Setting& st = g.setting;
  SymmetryElement e = identity_element(st);
  std::vector<int> g_inv(st.n);
  for (int j = 0; j < st.n; ++j) g_inv[g.pi[j]] = j;
  for (int j = 0; j < st.n; ++j) {
    e.pi[j] = g.pi[h.pi[j]];
    e.alpha[j] = (g.alpha[h.pi[j]] + h.alpha[j]) % st.c[j];
  }
  for (int i = 0; i < st.n; ++i) {
    int j = g_inv[i];  // slot of g reading source party i
    for (int a = 0; a < st.c[i]; ++a)
      e.beta[i][a] = (g.beta[i][a] + h.beta[j][(a + g.alpha[j]) % st.c[i]]) % st.d;
  }
  e.validate();
  return e;
}

SymmetryElement inverse(const SymmetryElement& g) {
  g.validate();
  const Setting& st = g.setting;
  SymmetryElement e = identity_element(st);
  for (int j = 0; j < st.n; ++j) e.pi[g.pi[j]] = j;
  for (int j = 0; j < st.n; ++j) e.alpha[g.pi[j]] = (st.c[j] - g.alpha[j]) % st.c[j];
  for (int i = 0; i < st.n; ++i)
    for (int a = 0; a < st.c[i]; ++a)
      e.beta[i][a] =
          (st.d - g.beta[g.pi[i]][(a - g.alpha[i] + st.c[i]) % st.c[i]]) % st.d;
  e.validate();
  return e;
}

SymmetryElement random_element(const Setting& st, std::mt19937_64& rng) {
  SymmetryElement g = identity_element(st);
  // uniform permutation within each group of parties sharing an alphabet size
  std::map<int, std::vector<int>> by_c;
  for (int j = 0; j < st.n; ++j) by_c[st.c[j]].push_back(j);
  for (auto& [c, slots] : by_c) {
    std::vector<int> sources = slots;
    std::shuffle(sources.begin(), sources.end(), rng);
    for (size_t i = 0; i < slots.size(); ++i) g.pi[slots[i]] = sources[i];
  }
  for (int j = 0; j < st.n; ++j) {
    g.alpha[j] = (int)(rng() % st.c[j]);
    for (int a = 0; a < st.c[j]; ++a) g.beta[j][a] = (int)(rng() % st.d);
  }
  g.validate();
  return g;
}

std::vector<SymmetryElement> group_generators(const Setting& st) {
  st.validate();
  std::vector<SymmetryElement> gens;
  for (int j = 0; j + 1 < st.n; ++j) {
    if (st.c[j] != st.c[j + 1]) continue;
    SymmetryElement g = identity_element(st);
    std::swap(g.pi[j], g.pi[j + 1]);
    gens.push_back(std::move(g));
  }
  for (int j = 0; j < st.n; ++j) {
    SymmetryElement g = identity_element(st);
    g.alpha[j] = 1 % st.c[j];
    gens.push_back(std::move(g));
  }
  for (int j = 0; j < st.n; ++j)
    for (int a = 0; a < st.c[j]; ++a) {
      SymmetryElement g = identity_element(st);
      g.beta[j][a] = 1 % st.d;
      gens.push_back(std::move(g));
    }
  return gens;
}

namespace {

// Per-setting-block description of an element's action: new block s reads
// old block src[s] with a cyclic outcome shift of shift[s].
struct PreparedElement {
  int d = 2;
  std::vector<long long> src;
  std::vector<int> shift;
};

PreparedElement prepare(const SymmetryElement& g) {
  const Setting& st = g.setting;
  PreparedElement p;
  p.d = st.d;
  const long long ns = st.setting_count();
  p.src.resize(ns);
  p.shift.resize(ns);
  std::vector<int> t(st.n);
  for (long long sidx = 0; sidx < ns; ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    int b = 0;
    for (int j = 0; j < st.n; ++j) {
      t[j] = (s[g.pi[j]] + g.alpha[j]) % st.c[j];
      b = (b + g.beta[j][s[j]]) % st.d;
    }
    p.src[sidx] = digits_to_index(t, st.c);
    p.shift[sidx] = b;
  }
  return p;
}

// Dual action on a coefficient block: new coefficients are
// c'_{k} - c'_0 with c'_{k} = old_{(k - b) mod d} (old_0 = 0), and c'_0 is
// returned through offset_delta (it moves into the offset / off the rhs).
template <typename Num>
void transform_block(const Num* in, Num* out, int d, int b, Num& offset_delta) {
  auto old_at = [&](int k) -> Num { return k == 0 ? Num(0) : in[k - 1]; };
  Num c0 = old_at(((0 - b) % d + d) % d);
  for (int k = 1; k < d; ++k) out[k - 1] = old_at(((k - b) % d + d) % d) - c0;
  offset_delta += c0;
}

IntVec apply_row_prepared(const PreparedElement& p, const IntVec& row) {
  const int d = p.d;
  const long long ns = (long long)p.src.size();
  IntVec out(row.size());
  Int delta = 0;
  for (long long s = 0; s < ns; ++s)
    transform_block<Int>(&row[p.src[s] * (d - 1)], &out[s * (d - 1)], d, p.shift[s], delta);
  out[row.size() - 1] = row[row.size() - 1] - delta;
  return out;
}

std::vector<IntVec> expand_orbit(const Setting& st, const IntVec& seed, int jobs) {
  std::vector<PreparedElement> gens;
  for (const SymmetryElement& g : group_generators(st)) gens.push_back(prepare(g));
  std::set<IntVec> seen{seed};
  std::vector<IntVec> frontier{seed};
  while (!frontier.empty()) {
    std::vector<IntVec> images(frontier.size() * gens.size());
    auto work = [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i)
        for (size_t k = 0; k < gens.size(); ++k)
          images[i * gens.size() + k] = apply_row_prepared(gens[k], frontier[i]);
    };
    if (jobs > 1 && frontier.size() >= 64) {
      std::vector<std::thread> pool;
      size_t chunk = (frontier.size() + jobs - 1) / jobs;
      for (size_t lo = 0; lo < frontier.size(); lo += chunk)
        pool.emplace_back(work, lo, std::min(lo + chunk, frontier.size()));
      for (auto& t : pool) t.join();
    } else {
      work(0, frontier.size());
    }
    std::vector<IntVec> next;
    for (IntVec& img : images)
      if (seen.insert(img).second) next.push_back(std::move(img));
    frontier = std::move(next);
  }
  return std::vector<IntVec>(seen.begin(), seen.end());
}

}  // namespace

FunctionOverSettings apply_to_function(const SymmetryElement& g, const FunctionOverSettings& f) {
  g.validate();
  if (!(g.setting == f.setting)) throw SettingMismatch("apply_to_function: setting mismatch");
  PreparedElement p = prepare(g);
  std::vector<int> t(f.table.size());
  for (size_t s = 0; s < t.size(); ++s) t[s] = (f.table[p.src[s]] + p.shift[s]) % g.setting.d;
  return FunctionOverSettings(g.setting, std::move(t));
}

CorrelatorVector apply_to_correlator(const SymmetryElement& g, const CorrelatorVector& corr) {
  g.validate();
  corr.validate();
  if (!(g.setting == corr.setting))
    throw SettingMismatch("apply_to_correlator: setting mismatch");
  const Setting& st = g.setting;
  const int d = st.d;
  PreparedElement p = prepare(g);
  CorrelatorVector out;
  out.setting = st;
  out.entries.resize(corr.entries.size());
  for (long long s = 0; s < st.setting_count(); ++s) {
    long long u = p.src[s];
    Rat p0 = 1;  // p(0|u) by normalization
    for (int k = 1; k < d; ++k) p0 -= corr.entries[u * (d - 1) + (k - 1)];
    for (int k = 1; k < d; ++k) {
      int kk = ((k - p.shift[s]) % d + d) % d;
      out.entries[s * (d - 1) + (k - 1)] =
          kk == 0 ? p0 : corr.entries[u * (d - 1) + (kk - 1)];
    }
  }
  return out;
}

BellInequality apply_to_inequality(const SymmetryElement& g, const BellInequality& ineq) {
  g.validate();
  ineq.validate();
  if (!(g.setting == ineq.setting))
    throw SettingMismatch("apply_to_inequality: setting mismatch");
  const Setting& st = g.setting;
  PreparedElement p = prepare(g);
  BellInequality out = ineq;
  Rat delta = 0;
  for (long long s = 0; s < st.setting_count(); ++s)
    transform_block<Rat>(&ineq.coeffs[p.src[s] * (st.d - 1)], &out.coeffs[s * (st.d - 1)],
                         st.d, p.shift[s], delta);
  out.p0_offset = ineq.p0_offset + delta;
  // gamma_L and gamma_P are invariant: the action permutes the LHV vertices
  // and the full box set, and evaluate(g.ineq, g.corr) == evaluate(ineq, corr)
  out.validate();
  return out;
}

IntVec apply_to_row(const SymmetryElement& g, const IntVec& row) {
  g.validate();
  if ((long long)row.size() != g.setting.reduced_dim() + 1)
    throw std::invalid_argument("apply_to_row: wrong row length");
  return apply_row_prepared(prepare(g), row);
}

std::vector<IntVec> orbit_of_row(const Setting& st, const IntVec& row) {
  st.validate();
  if ((long long)row.size() != st.reduced_dim() + 1)
    throw std::invalid_argument("orbit_of_row: wrong row length");
  return expand_orbit(st, row, 1);
}

std::vector<SymmetryClass> orbit_partition_rows(const Setting& st,
                                                const std::vector<IntVec>& rows, int jobs) {
  st.validate();
  std::map<IntVec, std::vector<size_t>> input_ids;
  for (size_t i = 0; i < rows.size(); ++i) {
    if ((long long)rows[i].size() != st.reduced_dim() + 1)
      throw std::invalid_argument("orbit_partition_rows: wrong row length");
    input_ids[rows[i]].push_back(i);
  }
  std::set<IntVec> visited;
  std::vector<SymmetryClass> classes;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (visited.count(rows[i])) continue;
    std::vector<IntVec> orbit = expand_orbit(st, rows[i], jobs);
    SymmetryClass cls;
    cls.canonical = orbit.front();  // expand_orbit returns sorted rows
    cls.orbit_size = (long long)orbit.size();
    for (const IntVec& r : orbit) {
      visited.insert(r);
      auto it = input_ids.find(r);
      if (it != input_ids.end())
        cls.members.insert(cls.members.end(), it->second.begin(), it->second.end());
    }
    std::sort(cls.members.begin(), cls.members.end());
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const SymmetryClass& a, const SymmetryClass& b) { return a.canonical < b.canonical; });
  return classes;
}

std::vector<SymmetryClass> orbit_partition(const std::vector<BellInequality>& items, int jobs) {
  if (items.empty()) return {};
  const Setting st = items.front().setting;
  std::vector<IntVec> rows;
  rows.reserve(items.size());
  for (const BellInequality& q : items) {
    if (!(q.setting == st)) throw SettingMismatch("orbit_partition: mixed settings");
    rows.push_back(canonical_row(q));
  }
  return orbit_partition_rows(st, rows, jobs);
}

}  // namespace bellpoly
