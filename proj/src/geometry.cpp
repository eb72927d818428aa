#include "bellpoly/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <map>
#include <thread>

namespace bellpoly {

void VRep::validate() const {
  for (const auto& v : vertices)
    if ((int)v.size() != dim) throw std::invalid_argument("vrep: vertex dim mismatch");
}

// ---------------------------------------------------------------------------
// exact rank (Bareiss fraction-free elimination on integerized rows)

int matrix_rank(const std::vector<RatVec>& rows) {
  if (rows.empty()) return 0;
  size_t ncol = rows[0].size();
  std::vector<IntVec> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != ncol) throw std::invalid_argument("rank: ragged matrix");
    m.push_back(to_integer_row(r));
  }
  size_t nr = m.size();
  Int prev = 1;
  size_t rank = 0;
  for (size_t col = 0; col < ncol && rank < nr; ++col) {
    size_t piv = rank;
    while (piv < nr && m[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(m[piv], m[rank]);
    for (size_t i = rank + 1; i < nr; ++i) {
      for (size_t j = col + 1; j < ncol; ++j) {
        Int t = m[rank][col] * m[i][j] - m[i][col] * m[rank][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return (int)rank;
}

int affine_dim(const std::vector<RatVec>& pts) {
  if (pts.empty()) return -1;
  if (pts.size() == 1) return 0;
  std::vector<RatVec> diff;
  diff.reserve(pts.size() - 1);
  for (size_t i = 1; i < pts.size(); ++i) {
    RatVec d(pts[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diff.push_back(std::move(d));
  }
  return matrix_rank(diff);
}

bool affinely_independent(const std::vector<RatVec>& pts) {
  return affine_dim(pts) == (int)pts.size() - 1;
}

// ---------------------------------------------------------------------------
// double description on a cone  { y : a_i . y <= 0 }

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr long long kCoordMax = 1ll << 40;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

u128 gcd128(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// coordinate traits: machine integers with overflow guards
struct I64T {
  using C = long long;
  using W = i128;
  static C from_int(const Int& v) {
    if (!v.fits_slong_p()) throw DdOverflow("row entry too large");
    long long x = mpz_get_si(v.get_mpz_t());
    if (x >= kCoordMax || x <= -kCoordMax) throw DdOverflow("row entry too large");
    return x;
  }
  static W dot(const std::vector<C>& a, const std::vector<C>& x) {
    W s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += (W)a[i] * x[i];
    return s;
  }
  static int sign(W v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }
  // out = ca*a + cb*b, gcd-reduced; throws when entries stay above range
  static void combine(W ca, const std::vector<C>& a, W cb, const std::vector<C>& b,
                      std::vector<C>& out) {
    size_t n = a.size();
    out.resize(n);
    static thread_local std::vector<W> wide;
    wide.resize(n);
    u128 g = 0;
    for (size_t i = 0; i < n; ++i) {
      wide[i] = ca * (W)a[i] + cb * (W)b[i];
      g = gcd128(g, (u128)abs128(wide[i]));
    }
    for (size_t i = 0; i < n; ++i) {
      W v = g > 1 ? wide[i] / (W)g : wide[i];
      if (v >= kCoordMax || v <= -(W)kCoordMax) throw DdOverflow("ray entry too large");
      out[i] = (C)v;
    }
  }
  static Int to_int(C v) { return Int((long)v); }
};

struct MpzT {
  using C = Int;
  using W = Int;
  static C from_int(const Int& v) { return v; }
  static W dot(const std::vector<C>& a, const std::vector<C>& x) {
    return bellpoly::dot(a, x);
  }
  static int sign(const W& v) { return sgn(v); }
  static void combine(const W& ca, const std::vector<C>& a, const W& cb,
                      const std::vector<C>& b, std::vector<C>& out) {
    size_t n = a.size();
    out.resize(n);
    for (size_t i = 0; i < n; ++i) out[i] = ca * a[i] + cb * b[i];
    IntVec tmp(out.begin(), out.end());
    reduce_by_gcd(tmp);
    for (size_t i = 0; i < n; ++i) out[i] = tmp[i];
  }
  static Int to_int(const C& v) { return v; }
};

struct ZeroSets {
  int words = 0;
  std::vector<uint64_t> bits;  // ray-major, `words` words per ray

  uint64_t* at(size_t ray) { return bits.data() + ray * words; }
  const uint64_t* at(size_t ray) const { return bits.data() + ray * words; }
};

inline bool zs_subset(const uint64_t* sub, const uint64_t* sup, int words) {
  for (int w = 0; w < words; ++w)
    if (sub[w] & ~sup[w]) return false;
  return true;
}

template <class T>
struct DdCone {
  using C = typename T::C;
  using W = typename T::W;

  int hdim = 0;
  std::vector<IntVec> rows;
  int jobs = 1;
  std::function<void(int, int, size_t)> progress;

  std::vector<std::vector<C>> rowsc;  // rows converted to the engine type
  std::vector<std::vector<C>> lin;
  std::vector<std::vector<C>> ray;  // coordinates
  ZeroSets zs;                      // one record per ray, bit i = saturates row i

  void run() {
    int m = (int)rows.size();
    zs.words = (m + 63) / 64;
    rowsc.clear();
    for (const auto& r : rows) {
      std::vector<C> rc(r.size());
      for (size_t i = 0; i < r.size(); ++i) rc[i] = T::from_int(r[i]);
      rowsc.push_back(std::move(rc));
    }
    lin.clear();
    for (int k = 0; k < hdim; ++k) {
      std::vector<C> e(hdim, C(0));
      e[k] = C(1);
      lin.push_back(std::move(e));
    }
    ray.clear();
    zs.bits.clear();
    for (int t = 0; t < m; ++t) {
      insert(t);
      if (progress) progress(t + 1, m, ray.size());
    }
  }

  void insert(int t) {
    const std::vector<C>& a = rowsc[t];
    // --- lineality reduction --------------------------------------------
    int li = -1;
    W s0{};
    for (size_t i = 0; i < lin.size(); ++i) {
      W s = T::dot(a, lin[i]);
      if (T::sign(s) != 0) {
        li = (int)i;
        s0 = s;
        break;
      }
    }
    if (li >= 0) {
      std::vector<C> l0 = std::move(lin[li]);
      lin.erase(lin.begin() + li);
      std::vector<C> tmp;
      for (auto& l : lin) {
        W sl = T::dot(a, l);
        if (T::sign(sl) == 0) continue;
        T::combine(s0, l, -sl, l0, tmp);
        normalize_sign(tmp);
        l = tmp;
      }
      W abs_s0 = T::sign(s0) < 0 ? -s0 : s0;
      W corr = T::sign(s0) < 0 ? W(-1) : W(1);
      for (size_t r = 0; r < ray.size(); ++r) {
        W sr = T::dot(a, ray[r]);
        if (T::sign(sr) != 0) {
          // positive multiple of the ray shifted onto the hyperplane
          T::combine(abs_s0, ray[r], -(corr * sr), l0, tmp);
          ray[r] = tmp;
        }
        zs.at(r)[t >> 6] |= 1ull << (t & 63);
      }
      // the freed lineality direction, oriented strictly inside
      if (T::sign(s0) > 0)
        for (auto& v : l0) v = -v;
      ray.push_back(std::move(l0));
      zs.bits.resize(ray.size() * zs.words, 0);
      uint64_t* nz = zs.at(ray.size() - 1);
      for (int i = 0; i < t; ++i) nz[i >> 6] |= 1ull << (i & 63);
      return;
    }

    // --- classic insertion ------------------------------------------------
    size_t nrays = ray.size();
    std::vector<int8_t> sign(nrays);
    std::vector<W> val(nrays);
    run_parallel(nrays, [&](size_t r) {
      val[r] = T::dot(a, ray[r]);
      sign[r] = (int8_t)T::sign(val[r]);
    });
    std::vector<uint32_t> pos, neg, zero;
    for (size_t r = 0; r < nrays; ++r)
      (sign[r] > 0 ? pos : sign[r] < 0 ? neg : zero).push_back((uint32_t)r);

    if (pos.empty()) {
      for (uint32_t r : zero) zs.at(r)[t >> 6] |= 1ull << (t & 63);
      return;
    }

    // saturation lists per processed constraint (CSR layout)
    std::vector<uint32_t> cnt(t + 1, 0), offs(t + 2, 0);
    for (size_t r = 0; r < nrays; ++r) {
      const uint64_t* zr = zs.at(r);
      for (int w = 0; w < zs.words; ++w) {
        uint64_t bits = zr[w];
        while (bits) {
          cnt[(w << 6) + __builtin_ctzll(bits)]++;
          bits &= bits - 1;
        }
      }
    }
    for (int i = 0; i <= t; ++i) offs[i + 1] = offs[i] + cnt[i];
    std::vector<uint32_t> lists(offs[t + 1]);
    {
      std::vector<uint32_t> fill(offs.begin(), offs.end() - 1);
      for (size_t r = 0; r < nrays; ++r) {
        const uint64_t* zr = zs.at(r);
        for (int w = 0; w < zs.words; ++w) {
          uint64_t bits = zr[w];
          while (bits) {
            lists[fill[(w << 6) + __builtin_ctzll(bits)]++] = (uint32_t)r;
            bits &= bits - 1;
          }
        }
      }
    }

    const int need = std::max(0, hdim - (int)lin.size() - 2);
    const int words = zs.words;

    struct NewRay {
      std::vector<C> x;
      std::vector<uint64_t> z;
    };
    std::vector<std::vector<NewRay>> chunks;
    int nchunks = std::max(1, std::min<int>(jobs, (int)pos.size()));
    chunks.resize(nchunks);
    size_t per = (pos.size() + nchunks - 1) / nchunks;

    auto work = [&](int chunk) {
      std::vector<uint64_t> inter(words);
      auto& out = chunks[chunk];
      size_t lo = chunk * per, hi = std::min(pos.size(), lo + per);
      for (size_t pi = lo; pi < hi; ++pi) {
        uint32_t p = pos[pi];
        const uint64_t* zp = zs.at(p);
        for (uint32_t n : neg) {
          const uint64_t* zn = zs.at(n);
          int pc = 0;
          for (int w = 0; w < words; ++w) {
            inter[w] = zp[w] & zn[w];
            pc += __builtin_popcountll(inter[w]);
          }
          if (pc < need) continue;
          // adjacency: no third ray saturates everything in `inter`
          uint32_t besti = 0, bestc = UINT32_MAX;
          for (int w = 0; w < words; ++w) {
            uint64_t bits = inter[w];
            while (bits) {
              uint32_t i = (w << 6) + __builtin_ctzll(bits);
              bits &= bits - 1;
              if (cnt[i] < bestc) {
                bestc = cnt[i];
                besti = i;
              }
            }
          }
          bool adjacent = true;
          if (bestc != UINT32_MAX) {
            const uint32_t* lp = lists.data() + offs[besti];
            for (uint32_t k = 0; k < bestc && adjacent; ++k) {
              uint32_t r = lp[k];
              if (r == p || r == n) continue;
              adjacent = !zs_subset(inter.data(), zs.at(r), words);
            }
          } else if (need > 0) {
            adjacent = false;  // empty intersection cannot carry enough rank
          }
          if (!adjacent) continue;
          NewRay nr;
          T::combine(val[p], ray[n], -val[n], ray[p], nr.x);
          nr.z.assign(words, 0);
          for (int w = 0; w < words; ++w) nr.z[w] = zp[w] & zn[w];
          nr.z[t >> 6] |= 1ull << (t & 63);
          out.push_back(std::move(nr));
        }
      }
    };
    if (nchunks == 1) {
      work(0);
    } else {
      std::vector<std::thread> th;
      th.reserve(nchunks);
      for (int c = 0; c < nchunks; ++c) th.emplace_back(work, c);
      for (auto& x : th) x.join();
    }

    // rebuild: zero rays (now saturating t), negative rays, then the new ones
    std::vector<std::vector<C>> nray;
    ZeroSets nzs;
    nzs.words = words;
    size_t total = zero.size() + neg.size();
    for (auto& ch : chunks) total += ch.size();
    nray.reserve(total);
    nzs.bits.reserve(total * words);
    auto push_old = [&](uint32_t r, bool mark) {
      nray.push_back(std::move(ray[r]));
      const uint64_t* zr = zs.at(r);
      for (int w = 0; w < words; ++w) nzs.bits.push_back(zr[w]);
      if (mark) nzs.bits[nzs.bits.size() - words + (t >> 6)] |= 1ull << (t & 63);
    };
    for (uint32_t r : zero) push_old(r, true);
    for (uint32_t r : neg) push_old(r, false);
    for (auto& ch : chunks)
      for (auto& nr : ch) {
        nray.push_back(std::move(nr.x));
        for (int w = 0; w < words; ++w) nzs.bits.push_back(nr.z[w]);
      }
    ray = std::move(nray);
    zs = std::move(nzs);
  }

  template <class F>
  void run_parallel(size_t n, F f) {
    int nth = std::max(1, std::min<int>(jobs, (int)(n / 4096) + 1));
    if (nth == 1) {
      for (size_t i = 0; i < n; ++i) f(i);
      return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t lo = next.fetch_add(4096);
        if (lo >= n) break;
        size_t hi = std::min(n, lo + 4096);
        for (size_t i = lo; i < hi; ++i) f(i);
      }
    };
    std::vector<std::thread> th;
    for (int i = 0; i < nth; ++i) th.emplace_back(worker);
    for (auto& x : th) x.join();
  }

  static void normalize_sign(std::vector<C>& v) {
    for (const C& x : v) {
      if (x == C(0)) continue;
      if (x < C(0))
        for (C& y : v) y = -y;
      break;
    }
  }
};

struct ConeResult {
  std::vector<IntVec> rays;
  std::vector<IntVec> lineality;
};

template <class T>
ConeResult run_dd(const std::vector<IntVec>& rows, int hdim, const DdOptions& opt) {
  DdCone<T> cone;
  cone.hdim = hdim;
  cone.rows = rows;
  cone.jobs = std::max(1, opt.jobs);
  cone.progress = opt.progress;
  cone.run();
  ConeResult res;
  for (auto& r : cone.ray) {
    IntVec v(hdim);
    for (int i = 0; i < hdim; ++i) v[i] = T::to_int(r[i]);
    reduce_by_gcd(v);
    res.rays.push_back(std::move(v));
  }
  for (auto& l : cone.lin) {
    IntVec v(hdim);
    for (int i = 0; i < hdim; ++i) v[i] = T::to_int(l[i]);
    canonicalize_line(v);
    res.lineality.push_back(std::move(v));
  }
  return res;
}

ConeResult dd_extreme_rays(std::vector<IntVec> rows, int hdim, const DdOptions& opt) {
  for (auto& r : rows) reduce_by_gcd(r);
  std::sort(rows.begin(), rows.end(), IntVecLess{});
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  try {
    return run_dd<I64T>(rows, hdim, opt);
  } catch (const DdOverflow&) {
    return run_dd<MpzT>(rows, hdim, opt);
  }
}

// canonical integer row-echelon basis of a set of integer rows
std::vector<IntVec> integer_row_basis(std::vector<IntVec> rows) {
  if (rows.empty()) return rows;
  size_t ncol = rows[0].size();
  std::vector<RatVec> m;
  for (auto& r : rows) m.push_back(to_rational_row(r));
  size_t rank = 0;
  std::vector<size_t> pivcol;
  for (size_t col = 0; col < ncol && rank < m.size(); ++col) {
    size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    Rat inv = 1 / m[rank][col];
    for (auto& x : m[rank]) x *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rat f = m[i][col];
      for (size_t j = 0; j < ncol; ++j) m[i][j] -= f * m[rank][j];
    }
    pivcol.push_back(col);
    ++rank;
  }
  std::vector<IntVec> out;
  for (size_t i = 0; i < rank; ++i) out.push_back(to_integer_row(m[i]));
  std::sort(out.begin(), out.end(), IntVecLess{});
  return out;
}

}  // namespace

HRep facet_enumeration(const VRep& v, const DdOptions& opt) {
  v.validate();
  if (v.vertices.empty()) throw std::invalid_argument("facet_enumeration: empty vertex set");
  const int D = v.dim;
  std::vector<IntVec> rows;
  rows.reserve(v.vertices.size());
  for (const auto& p : v.vertices) {
    RatVec r = p;
    r.push_back(Rat(-1));
    rows.push_back(to_integer_row(r));
  }
  ConeResult cone = dd_extreme_rays(std::move(rows), D + 1, opt);

  // Rays are only defined modulo the leftover lineality (the affine-hull
  // equalities). Reduce each to the canonical coset representative with
  // zeros in the pivot columns so that the trivial ray is recognizable and
  // output rows are deterministic.
  std::vector<RatVec> lbasis;
  std::vector<int> lpiv;
  for (const auto& l : cone.lineality) lbasis.push_back(to_rational_row(l));
  for (size_t k = 0; k < lbasis.size(); ++k) {
    int piv = -1;
    for (int j = 0; j <= D; ++j)
      if (lbasis[k][j] != 0) {
        piv = j;
        break;
      }
    Rat inv = 1 / lbasis[k][piv];
    for (auto& x : lbasis[k]) x *= inv;
    for (size_t k2 = 0; k2 < lbasis.size(); ++k2) {
      if (k2 == k || lbasis[k2][piv] == 0) continue;
      Rat f = lbasis[k2][piv];
      for (int j = 0; j <= D; ++j) lbasis[k2][j] -= f * lbasis[k][j];
    }
    lpiv.push_back(piv);
  }

  HRep h;
  h.dim = D;
  for (auto& r : cone.rays) {
    RatVec q = to_rational_row(r);
    for (size_t k = 0; k < lbasis.size(); ++k) {
      Rat f = q[lpiv[k]];
      if (f == 0) continue;
      for (int j = 0; j <= D; ++j) q[j] -= f * lbasis[k][j];
    }
    IntVec row = to_integer_row(q);
    reduce_by_gcd(row);
    bool zero = true;
    for (int i = 0; i < D && zero; ++i) zero = row[i] == 0;
    if (zero) continue;  // 0.x <= g says nothing about the polytope
    h.ineq.push_back(std::move(row));
  }
  std::sort(h.ineq.begin(), h.ineq.end(), IntVecLess{});
  h.eq = integer_row_basis(std::move(cone.lineality));
  return h;
}

VRep vertex_enumeration(const HRep& h, const DdOptions& opt) {
  const int D = h.dim;
  std::vector<IntVec> rows;
  for (const auto& r : h.ineq) {
    IntVec a(r.begin(), r.end());
    a[D] = -r[D];
    rows.push_back(std::move(a));
  }
  for (const auto& r : h.eq) {
    IntVec a(r.begin(), r.end());
    a[D] = -r[D];
    rows.push_back(a);
    for (auto& x : a) x = -x;
    rows.push_back(std::move(a));
  }
  IntVec tpos(D + 1, Int(0));
  tpos[D] = -1;  // -t <= 0
  rows.push_back(std::move(tpos));

  ConeResult cone = dd_extreme_rays(std::move(rows), D + 1, opt);
  if (!cone.lineality.empty())
    throw std::runtime_error("vertex_enumeration: feasible set is unbounded");
  VRep v;
  v.dim = D;
  bool sawpos = false, sawzero = false;
  for (const auto& r : cone.rays) {
    if (r[D] == 0) {
      sawzero = true;
      continue;
    }
    sawpos = true;
    RatVec x(D);
    for (int i = 0; i < D; ++i) x[i] = Rat(r[i], r[D]);
    for (auto& q : x) q.canonicalize();
    v.vertices.push_back(std::move(x));
  }
  if (sawzero && sawpos)
    throw std::runtime_error("vertex_enumeration: feasible set is unbounded");
  if (!sawpos) throw std::runtime_error("vertex_enumeration: feasible set is empty");
  std::sort(v.vertices.begin(), v.vertices.end());
  return v;
}

bool is_facet_defining(const VRep& v, const IntVec& row) {
  v.validate();
  if ((int)row.size() != v.dim + 1) throw std::invalid_argument("facet row: wrong length");
  RatVec b(v.dim);
  for (int i = 0; i < v.dim; ++i) b[i] = Rat(row[i]);
  Rat g(row[v.dim]);
  std::vector<RatVec> sat;
  for (const auto& p : v.vertices) {
    Rat val = dot(b, p);
    if (val > g) throw NotValidInequality("inequality violated by a vertex");
    if (val == g) sat.push_back(p);
  }
  int hull = affine_dim(v.vertices);
  return !sat.empty() && affine_dim(sat) == hull - 1;
}

MembershipResult polytope_membership(const VRep& v, const RatVec& point) {
  v.validate();
  if ((int)point.size() != v.dim) throw std::invalid_argument("membership: dim mismatch");
  const int D = v.dim;
  const int nv = (int)v.vertices.size();
  LinearProgram lp;
  lp.nvars = nv;
  lp.nonneg = true;
  lp.c.assign(nv, Rat(0));
  lp.E.assign(D + 1, RatVec(nv, Rat(0)));
  lp.f.assign(D + 1, Rat(0));
  for (int i = 0; i < nv; ++i) {
    for (int dI = 0; dI < D; ++dI) lp.E[dI][i] = v.vertices[i][dI];
    lp.E[D][i] = 1;
  }
  for (int dI = 0; dI < D; ++dI) lp.f[dI] = point[dI];
  lp.f[D] = 1;

  MembershipResult res;
  LpResult r = lp_solve(lp);
  if (r.status == LpStatus::Optimal) {
    res.inside = true;
    res.weights = r.x;
    return res;
  }
  // Farkas w: w.col_i >= 0 for every vertex column, w.(point,1) < 0.
  // Columns are (vertex, 1), so  (-w_head) . x <= w_last  separates.
  RatVec sep(D + 1);
  for (int i = 0; i < D; ++i) sep[i] = -r.farkas_w[i];
  sep[D] = r.farkas_w[D];
  IntVec claim = to_integer_row(sep);
  reduce_by_gcd(claim);
  // defensive: the certificate must actually separate
  RatVec bb(D);
  for (int i = 0; i < D; ++i) bb[i] = Rat(claim[i]);
  Rat gg(claim[D]);
  for (const auto& p : v.vertices)
    if (dot(bb, p) > gg) throw std::logic_error("membership: bad separator");
  if (dot(bb, point) <= gg) throw std::logic_error("membership: separator does not separate");
  res.inside = false;
  res.separator = std::move(claim);
  return res;
}

}  // namespace bellpoly
