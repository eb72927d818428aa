#include "bellpoly/nonsignaling.hpp"

#include "bellpoly/linprog.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace bellpoly {

JointDistribution::JointDistribution(Setting st, RatVec e)
    : setting(std::move(st)), entries(std::move(e)) {
  validate();
}

std::size_t JointDistribution::index_of(long long sidx, long long midx) const {
  if (sidx < 0 || sidx >= setting.setting_count())
    throw std::out_of_range("distribution: setting index out of range");
  if (midx < 0 || midx >= setting.outcome_string_count())
    throw std::out_of_range("distribution: outcome index out of range");
  return std::size_t(sidx) * setting.outcome_string_count() + midx;
}

const Rat& JointDistribution::at(const std::vector<int>& s, const std::vector<int>& m) const {
  const std::vector<int> mradix(setting.n, setting.d);
  return entries[index_of(digits_to_index(s, setting.c), digits_to_index(m, mradix))];
}

Rat& JointDistribution::at(const std::vector<int>& s, const std::vector<int>& m) {
  const std::vector<int> mradix(setting.n, setting.d);
  return entries[index_of(digits_to_index(s, setting.c), digits_to_index(m, mradix))];
}

void JointDistribution::validate() const {
  setting.validate();
  const long long nm = setting.outcome_string_count();
  if ((long long)entries.size() != setting.setting_count() * nm)
    throw std::invalid_argument("distribution: wrong entry count");
  for (long long sidx = 0; sidx < setting.setting_count(); ++sidx) {
    Rat sum = 0;
    for (long long mi = 0; mi < nm; ++mi) {
      const Rat& p = entries[sidx * nm + mi];
      if (p < 0) throw std::invalid_argument("distribution: negative probability");
      sum += p;
    }
    if (sum != 1) throw std::invalid_argument("distribution: s-block not normalized");
  }
}

JointDistribution gen_pr_box(const FunctionOverSettings& f) {
  const Setting& st = f.setting;
  st.validate();
  const long long nm = st.outcome_string_count();
  const std::vector<int> mradix(st.n, st.d);

  Int denom = 1;  // d^{n-1}
  for (int j = 1; j < st.n; ++j) denom *= st.d;
  const Rat weight = Rat(1) / Rat(denom);

  JointDistribution out;
  out.setting = st;
  out.entries.assign(st.setting_count() * nm, Rat(0));
  for (long long mi = 0; mi < nm; ++mi) {
    std::vector<int> m = index_to_digits(mi, mradix);
    int sum = 0;
    for (int v : m) sum = (sum + v) % st.d;
    for (long long sidx = 0; sidx < st.setting_count(); ++sidx)
      if (sum == f.at_index(sidx)) out.entries[sidx * nm + mi] = weight;
  }
  return out;
}

JointDistribution bipartite_box(const FunctionOverSettings& f, const std::vector<int>& group) {
  const Setting& st = f.setting;
  st.validate();
  if (st.n < 2) throw InvalidSplit("bipartite_box: need at least two parties");
  if ((int)group.size() != st.n) throw InvalidSplit("bipartite_box: group size != n");
  int in_b = 0;
  for (int g : group) {
    if (g != 0 && g != 1) throw InvalidSplit("bipartite_box: group flags must be 0/1");
    in_b += g;
  }
  if (in_b == 0 || in_b == st.n) throw InvalidSplit("bipartite_box: both sides must be nonempty");

  // Canonical components: fA(s) = f(s_A, 0), fB(s) = f(0, s_B) - f(0).
  const long long ns = st.setting_count();
  std::vector<int> fa(ns), fb(ns);
  std::vector<int> s0(st.n, 0);
  const int f00 = f(s0);
  for (long long sidx = 0; sidx < ns; ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    std::vector<int> sa = s, sb = s;
    for (int j = 0; j < st.n; ++j) (group[j] ? sa : sb)[j] = 0;
    fa[sidx] = f(sa);
    fb[sidx] = ((f(sb) - f00) % st.d + st.d) % st.d;
    if ((fa[sidx] + fb[sidx]) % st.d != f.at_index(sidx))
      throw InvalidSplit("bipartite_box: f does not split along this bipartition");
  }

  const long long nm = st.outcome_string_count();
  const std::vector<int> mradix(st.n, st.d);
  Int denom = 1;  // d^{n-2}
  for (int j = 2; j < st.n; ++j) denom *= st.d;
  const Rat weight = Rat(1) / Rat(denom);

  JointDistribution out;
  out.setting = st;
  out.entries.assign(ns * nm, Rat(0));
  for (long long mi = 0; mi < nm; ++mi) {
    std::vector<int> m = index_to_digits(mi, mradix);
    int suma = 0, sumb = 0;
    for (int j = 0; j < st.n; ++j) (group[j] ? sumb : suma) = ((group[j] ? sumb : suma) + m[j]) % st.d;
    for (long long sidx = 0; sidx < ns; ++sidx)
      if (suma == fa[sidx] && sumb == fb[sidx]) out.entries[sidx * nm + mi] = weight;
  }
  return out;
}

namespace {

// For party j: all (s, s') setting-index pairs differing only in s_j, with
// s'_j = 0 and s_j != 0, together with the outcome-string groups that share
// every digit except m_j. The single-party marginal equalities run over
// exactly these pairs.
struct MarginalRow {
  long long s_at = 0, s_base = 0;   // setting blocks being compared
  std::vector<long long> ms;        // outcome indices to sum at s_at / s_base
};

std::vector<MarginalRow> marginal_rows(const Setting& st) {
  const std::vector<int> mradix(st.n, st.d);
  const long long ns = st.setting_count();
  const long long nm = st.outcome_string_count();
  std::vector<MarginalRow> rows;
  for (int j = 0; j < st.n; ++j) {
    for (long long sidx = 0; sidx < ns; ++sidx) {
      std::vector<int> s = index_to_digits(sidx, st.c);
      if (s[j] == 0) continue;
      std::vector<int> s0 = s;
      s0[j] = 0;
      long long base = digits_to_index(s0, st.c);
      // group outcome strings by their digits away from party j
      for (long long mi = 0; mi < nm; ++mi) {
        std::vector<int> m = index_to_digits(mi, mradix);
        if (m[j] != 0) continue;  // group representative: m_j = 0
        MarginalRow row;
        row.s_at = sidx;
        row.s_base = base;
        for (int v = 0; v < st.d; ++v) {
          m[j] = v;
          row.ms.push_back(digits_to_index(m, mradix));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// Reduced row echelon form of [A | b]; returns the pivot column per row
// (rows below the rank are zeroed). Throws on an inconsistent system.
std::vector<int> rref_system(std::vector<RatVec>& rows) {
  if (rows.empty()) return {};
  const size_t cols = rows[0].size();  // last column is the rhs
  std::vector<int> pivots;
  size_t r = 0;
  for (size_t col = 0; col + 1 < cols && r < rows.size(); ++col) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Rat inv = Rat(1) / rows[r][col];
    for (size_t c2 = col; c2 < cols; ++c2) rows[r][c2] *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      Rat factor = rows[i][col];
      for (size_t c2 = col; c2 < cols; ++c2) rows[i][c2] -= factor * rows[r][c2];
    }
    pivots.push_back((int)col);
    ++r;
  }
  for (size_t i = r; i < rows.size(); ++i)
    if (rows[i][cols - 1] != 0)
      throw std::logic_error("ns system: inconsistent equalities (internal error)");
  rows.resize(r);
  return pivots;
}

// Probe whether the face {x >= 0, equalities} of free coordinates is a
// single point. equalities come in as [A | b]. On a non-point face, two
// distinct feasible coordinate vectors are returned.
struct FaceProbeResult {
  bool point = true;
  RatVec first, second;  // two distinct feasible x when !point
};

FaceProbeResult probe_face(std::vector<RatVec> eqs, size_t nfree, int jobs) {
  FaceProbeResult out;
  std::vector<int> pivots = rref_system(eqs);

  std::vector<char> is_pivot(nfree, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<int> free_cols;
  for (size_t c = 0; c < nfree; ++c)
    if (!is_pivot[c]) free_cols.push_back((int)c);

  // particular solution (free parameters at 0)
  RatVec x0(nfree, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x0[pivots[r]] = eqs[r].back();
  if (free_cols.empty()) {
    for (const Rat& v : x0)
      if (v < 0) throw std::logic_error("ns face: pinned solution not nonnegative");
    return out;  // affine dimension 0
  }

  // x = x0 + N t over the nullspace basis; x >= 0 are the LP constraints
  const size_t tdim = free_cols.size();
  std::vector<RatVec> N(nfree, RatVec(tdim, Rat(0)));
  for (size_t t = 0; t < tdim; ++t) {
    N[free_cols[t]][t] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) N[pivots[r]][t] = -eqs[r][free_cols[t]];
  }

  LinearProgram lp;
  lp.nvars = (int)tdim;
  lp.nonneg = false;
  lp.maximize = true;
  for (size_t i = 0; i < nfree; ++i) {
    RatVec row(tdim);
    for (size_t t = 0; t < tdim; ++t) row[t] = -N[i][t];
    lp.A.push_back(std::move(row));
    lp.b.push_back(x0[i]);
  }

  auto optimize = [&](size_t coord, int sign) {
    LinearProgram p = lp;
    p.c.resize(tdim);
    for (size_t t = 0; t < tdim; ++t) p.c[t] = sign * N[coord][t];
    LpResult res = lp_solve(p);
    if (res.status != LpStatus::Optimal)
      throw std::logic_error("ns face: coordinate LP not optimal (internal error)");
    return res.x;
  };
  auto coord_value = [&](size_t coord, const RatVec& t) {
    Rat v = x0[coord];
    for (size_t k = 0; k < tdim; ++k) v += N[coord][k] * t[k];
    return v;
  };
  auto expand = [&](const RatVec& t) {
    RatVec x(nfree);
    for (size_t i = 0; i < nfree; ++i) x[i] = coord_value(i, t);
    return x;
  };

  // per-coordinate max/min probing, batched for optional parallelism, with
  // deterministic first-unpinned selection
  const size_t batch = jobs > 1 ? (size_t)jobs * 2 : 1;
  for (size_t lo = 0; lo < nfree; lo += batch) {
    const size_t hi = std::min(lo + batch, nfree);
    std::vector<std::pair<RatVec, RatVec>> results(hi - lo);
    auto work = [&](size_t i) {
      results[i - lo] = {optimize(i, +1), optimize(i, -1)};
    };
    if (jobs > 1 && hi - lo > 1) {
      std::vector<std::thread> pool;
      for (size_t i = lo; i < hi; ++i) pool.emplace_back(work, i);
      for (auto& th : pool) th.join();
    } else {
      for (size_t i = lo; i < hi; ++i) work(i);
    }
    for (size_t i = lo; i < hi; ++i) {
      const auto& [tmax, tmin] = results[i - lo];
      if (coord_value(i, tmax) != coord_value(i, tmin)) {
        out.point = false;
        out.first = expand(tmax);
        out.second = expand(tmin);
        return out;
      }
    }
  }
  return out;
}

// Face data for the coordinates left free by a zero mask: compressed
// normalization + marginal-independence equalities.
struct FaceSystem {
  std::vector<size_t> coord_of_free;          // free var -> p(m|s) coordinate
  std::vector<long long> free_id;             // coordinate -> free var or -1
  std::vector<RatVec> eqs;                    // [A | b] over the free vars
};

FaceSystem face_system(const Setting& st, const std::vector<char>& zero) {
  const long long ns = st.setting_count();
  const long long nm = st.outcome_string_count();
  FaceSystem fs;
  fs.free_id.assign(ns * nm, -1);
  for (long long i = 0; i < ns * nm; ++i)
    if (!zero[i]) {
      fs.free_id[i] = (long long)fs.coord_of_free.size();
      fs.coord_of_free.push_back((size_t)i);
    }
  const size_t nfree = fs.coord_of_free.size();

  for (long long s = 0; s < ns; ++s) {
    RatVec row(nfree + 1, Rat(0));
    for (long long mi = 0; mi < nm; ++mi)
      if (fs.free_id[s * nm + mi] >= 0) row[fs.free_id[s * nm + mi]] = 1;
    row[nfree] = 1;
    fs.eqs.push_back(std::move(row));
  }
  for (const MarginalRow& mr : marginal_rows(st)) {
    RatVec row(nfree + 1, Rat(0));
    bool nonzero = false;
    for (long long mi : mr.ms) {
      long long at = fs.free_id[mr.s_at * nm + mi];
      long long base = fs.free_id[mr.s_base * nm + mi];
      if (at >= 0) {
        row[at] += 1;
        nonzero = true;
      }
      if (base >= 0) {
        row[base] -= 1;
        nonzero = true;
      }
    }
    if (nonzero) fs.eqs.push_back(std::move(row));
  }
  return fs;
}

JointDistribution distribution_from_face(const Setting& st, const FaceSystem& fs,
                                         const RatVec& x) {
  JointDistribution out;
  out.setting = st;
  out.entries.assign(st.setting_count() * st.outcome_string_count(), Rat(0));
  for (size_t v = 0; v < fs.coord_of_free.size(); ++v) out.entries[fs.coord_of_free[v]] = x[v];
  out.validate();
  return out;
}

}  // namespace

NsConstraintSystem ns_constraint_system(const Setting& st) {
  st.validate();
  const long long ns = st.setting_count();
  const long long nm = st.outcome_string_count();
  const long long ncoord = ns * nm;
  NsConstraintSystem sys;
  sys.setting = st;
  sys.system.dim = (int)ncoord;
  for (long long i = 0; i < ncoord; ++i) {
    IntVec row(ncoord + 1, Int(0));
    row[i] = -1;
    sys.system.ineq.push_back(std::move(row));
  }
  for (long long s = 0; s < ns; ++s) {
    IntVec row(ncoord + 1, Int(0));
    for (long long mi = 0; mi < nm; ++mi) row[s * nm + mi] = 1;
    row[ncoord] = 1;
    sys.system.eq.push_back(std::move(row));
  }
  for (const MarginalRow& mr : marginal_rows(st)) {
    IntVec row(ncoord + 1, Int(0));
    for (long long mi : mr.ms) {
      row[mr.s_at * nm + mi] += 1;
      row[mr.s_base * nm + mi] -= 1;
    }
    sys.system.eq.push_back(std::move(row));
  }
  return sys;
}

bool is_nonsignaling(const JointDistribution& dist) {
  dist.validate();
  const Setting& st = dist.setting;
  const long long nm = st.outcome_string_count();
  for (const MarginalRow& mr : marginal_rows(st)) {
    Rat diff = 0;
    for (long long mi : mr.ms)
      diff += dist.entries[mr.s_at * nm + mi] - dist.entries[mr.s_base * nm + mi];
    if (diff != 0) return false;
  }
  return true;
}

NsUniquenessResult unique_ns_for_vertex(const FunctionOverSettings& f, int jobs) {
  const Setting& st = f.setting;
  st.validate();
  const long long ns = st.setting_count();
  const long long nm = st.outcome_string_count();
  const std::vector<int> mradix(st.n, st.d);

  // compatibility with the deterministic correlator forces every coordinate
  // with sum(m) != f(s) to zero
  std::vector<char> zero(ns * nm, 0);
  for (long long mi = 0; mi < nm; ++mi) {
    std::vector<int> m = index_to_digits(mi, mradix);
    int sum = 0;
    for (int v : m) sum = (sum + v) % st.d;
    for (long long s = 0; s < ns; ++s)
      if (sum != f.at_index(s)) zero[s * nm + mi] = 1;
  }

  FaceSystem fs = face_system(st, zero);
  FaceProbeResult probe = probe_face(fs.eqs, fs.coord_of_free.size(), jobs);

  NsUniquenessResult out;
  out.prime_scope = is_prime(st.d);
  out.witness = gen_pr_box(f);
  out.unique = probe.point;
  if (!probe.point) {
    JointDistribution a = distribution_from_face(st, fs, probe.first);
    JointDistribution b = distribution_from_face(st, fs, probe.second);
    out.second = (a == out.witness) ? std::move(b) : std::move(a);
  }
  return out;
}

bool is_ns_vertex(const JointDistribution& dist) {
  dist.validate();
  if (!is_nonsignaling(dist)) throw NotNonsignaling("is_ns_vertex: distribution signals");
  std::vector<char> zero(dist.entries.size(), 0);
  for (size_t i = 0; i < dist.entries.size(); ++i) zero[i] = dist.entries[i] == 0;
  FaceSystem fs = face_system(dist.setting, zero);
  return probe_face(fs.eqs, fs.coord_of_free.size(), 1).point;
}

}  // namespace bellpoly
