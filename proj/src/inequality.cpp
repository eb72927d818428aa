#include "bellpoly/inequality.hpp"

#include <algorithm>
#include <sstream>

namespace bellpoly {

void BellInequality::validate() const {
  setting.validate();
  if ((long long)coeffs.size() != setting.reduced_dim())
    throw std::invalid_argument("inequality: wrong coefficient count");
  if (paper_scale <= 0) throw std::invalid_argument("inequality: scale must be positive");
  if (gamma_L > gamma_P) throw std::invalid_argument("inequality: gamma_L exceeds gamma_P");
}

const Rat& BellInequality::coeff(long long sidx, int k) const {
  if (sidx < 0 || sidx >= setting.setting_count())
    throw std::out_of_range("inequality: setting index out of range");
  if (k < 1 || k >= setting.d) throw std::out_of_range("inequality: k must be in 1..d-1");
  return coeffs[sidx * (setting.d - 1) + (k - 1)];
}

void InputWeights::validate() const {
  setting.validate();
  if ((long long)w.size() != setting.setting_count())
    throw std::invalid_argument("weights: wrong entry count");
  Rat sum = 0;
  for (const Rat& x : w) {
    if (x < 0) throw std::invalid_argument("weights: negative weight");
    sum += x;
  }
  if (sum != 1) throw std::invalid_argument("weights: must sum to 1");
}

InputWeights InputWeights::uniform(const Setting& st) {
  st.validate();
  InputWeights w;
  w.setting = st;
  w.w.assign(st.setting_count(), Rat(1) / Rat(static_cast<long>(st.setting_count())));
  return w;
}

Rat evaluate(const BellInequality& ineq, const CorrelatorVector& corr) {
  if (!(ineq.setting == corr.setting)) throw SettingMismatch("evaluate: setting mismatch");
  Rat v = ineq.p0_offset;
  for (size_t i = 0; i < ineq.coeffs.size(); ++i) v += ineq.coeffs[i] * corr.entries[i];
  return v;
}

Rat vertex_value(const BellInequality& ineq, const FunctionOverSettings& f) {
  if (!(ineq.setting == f.setting)) throw SettingMismatch("vertex_value: setting mismatch");
  const int dm1 = ineq.setting.d - 1;
  Rat v = ineq.p0_offset;
  for (long long sidx = 0; sidx < ineq.setting.setting_count(); ++sidx) {
    int k = f.at_index(sidx);
    if (k != 0) v += ineq.coeffs[sidx * dm1 + (k - 1)];
  }
  return v;
}

Rat lhv_bound(const BellInequality& ineq) {
  bool first = true;
  Rat best = 0;
  for (const auto& f : enumerate_n_partite_linear(ineq.setting)) {
    Rat v = vertex_value(ineq, f);
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

Rat algebraic_max(const BellInequality& ineq) {
  const int dm1 = ineq.setting.d - 1;
  Rat v = ineq.p0_offset;
  for (long long sidx = 0; sidx < ineq.setting.setting_count(); ++sidx) {
    Rat best = 0;  // k = 0 contributes nothing
    for (int k = 0; k < dm1; ++k) best = std::max(best, ineq.coeffs[sidx * dm1 + k]);
    v += best;
  }
  return v;
}

namespace {

// Fill bounds, validate, and (for catalog entries) assert the recomputed LHV
// bound against the published one.
BellInequality assemble(const Setting& st, RatVec coeffs, Rat offset, Rat scale,
                        std::string origin) {
  BellInequality q;
  q.setting = st;
  q.coeffs = std::move(coeffs);
  q.p0_offset = std::move(offset);
  q.paper_scale = std::move(scale);
  q.origin = std::move(origin);
  q.gamma_P = algebraic_max(q);
  q.gamma_L = lhv_bound(q);
  q.validate();
  return q;
}

BellInequality catalog_entry(const Setting& st, RatVec coeffs, Rat offset, Rat scale,
                             const std::string& name, const Rat& published_bound) {
  BellInequality q = assemble(st, std::move(coeffs), std::move(offset), scale, name);
  if (q.gamma_L != published_bound * q.paper_scale) {
    std::ostringstream os;
    os << "catalog: recomputed LHV bound " << rat_str(q.gamma_L) << " for " << name << " at "
       << st.str() << " differs from the published bound " << rat_str(published_bound)
       << " (scale " << rat_str(q.paper_scale) << ")";
    throw std::logic_error(os.str());
  }
  return q;
}

// Projection of a full-space coefficient table W[s][k] (k = 0..d-1):
// eliminating p(0|s) leaves coefficients W[s][k] - W[s][0] and moves
// sum_s W[s][0] into the offset.
BellInequality from_full_form(const Setting& st, const std::vector<RatVec>& W,
                              const std::string& name, const Rat& published_bound) {
  RatVec coeffs(st.reduced_dim(), Rat(0));
  Rat offset = 0;
  const int dm1 = st.d - 1;
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    offset += W[sidx][0];
    for (int k = 1; k < st.d; ++k) coeffs[sidx * dm1 + (k - 1)] = W[sidx][k] - W[sidx][0];
  }
  return catalog_entry(st, std::move(coeffs), std::move(offset), 1, name, published_bound);
}

int sign_pm(int e) { return e % 2 == 0 ? 1 : -1; }

// The two-party two-setting family with head weight d on p(1|0..0) and
// signed tail sum_{k>=1} (d-k) p(k|s); `variant` picks the support/sign
// pattern: 0 = all s, sign (-1)^{s1+s2}; 1 = s3 = 0 only, sign (-1)^{s1+s2};
// 2 = s1 = s2 only, sign (-1)^{s1+s3}.
BellInequality cglmp_pattern(const Setting& st, int variant, const std::string& name) {
  RatVec coeffs(st.reduced_dim(), Rat(0));
  const int dm1 = st.d - 1;
  coeffs[0] += st.d;  // d * p(1|0,...,0)
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    bool support;
    int sign;
    if (variant == 0) {
      support = true;
      sign = sign_pm(s[0] + s[1]);
    } else if (variant == 1) {
      support = s[2] == 0;
      sign = sign_pm(s[0] + s[1]);
    } else {
      support = s[0] == s[1];
      sign = sign_pm(s[0] + s[2]);
    }
    if (!support) continue;
    coeffs[sidx * dm1] -= sign;                                             // k = 1
    for (int k = 2; k < st.d; ++k) coeffs[sidx * dm1 + (k - 1)] += sign * (st.d - k);
  }
  return catalog_entry(st, std::move(coeffs), 0, 1, name, st.d);
}

// (-1)^{s1 s2} cosine-like sign restricted to a sub-grid of settings, with a
// per-k 0/1/2 weight profile; covers the embedded-CHSH entries.
BellInequality signed_product_entry(const Setting& st, const std::vector<int>& s1_support,
                                    const std::vector<int>& s2_support,
                                    const std::vector<Rat>& k_weights, const std::string& name,
                                    const Rat& published_bound) {
  RatVec coeffs(st.reduced_dim(), Rat(0));
  const int dm1 = st.d - 1;
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    bool sup1 = std::find(s1_support.begin(), s1_support.end(), s[0]) != s1_support.end();
    bool sup2 = std::find(s2_support.begin(), s2_support.end(), s[1]) != s2_support.end();
    if (!sup1 || !sup2) continue;
    int sign = sign_pm(s[0] * s[1]);
    for (int k = 1; k < st.d; ++k) coeffs[sidx * dm1 + (k - 1)] = sign * k_weights[k - 1];
  }
  return catalog_entry(st, std::move(coeffs), 0, 1, name, published_bound);
}

BellInequality from_int_vector(const Setting& st, const std::vector<int>& b, const Rat& scale,
                               const std::string& name, const Rat& published_bound) {
  RatVec coeffs(b.begin(), b.end());
  return catalog_entry(st, std::move(coeffs), 0, scale, name, published_bound);
}

struct TableRow {
  const char* name;
  int bound;
  std::array<int, 16> b;
};

// Sixteen-column coefficient rows over the (2,4,2) settings grid, one
// representative per non-trivial symmetry class; heads B* carry LHV bound 8
// or 4, the embedded-CHSH rows carry bound 2.
constexpr TableRow kFourSettingRows[] = {
    {"B1", 8, {2, 2, 1, 1, 2, -1, -1, -2, 1, -1, -2, 2, 1, -2, 2, 1}},
    {"B2", 8, {2, 2, 1, 1, 2, -1, -1, -2, 1, -2, 2, 1, 1, -1, -2, 2}},
    {"B3", 8, {2, 2, 1, 1, 2, -1, -2, -1, 1, -2, 1, 2, 1, -1, 2, -2}},
    {"B4", 8, {2, 2, 1, 1, 1, -1, 2, -2, 1, -2, 1, 2, 2, -1, -2, -1}},
    {"B5", 8, {2, 2, 1, 1, 1, -2, 2, 1, 1, -1, -2, 2, 2, -1, -1, -2}},
    {"B6", 4, {2, 1, 1, 0, 1, -1, -1, 1, 1, -1, -1, -1, 0, 1, -1, 0}},
    {"B7", 4, {2, 1, 1, 0, 1, -1, -1, 1, 0, 1, -1, 0, 1, -1, -1, -1}},
    {"B8", 4, {2, 1, 1, 0, 0, 1, -1, 0, 1, -1, -1, 1, 1, -1, -1, -1}},
    {"B9", 4, {2, 1, 0, 1, 1, -1, 1, -1, 0, 1, 0, -1, 1, -1, -1, -1}},
    {"B10", 4, {2, 1, 0, 1, 0, 1, 0, -1, 1, -1, 1, -1, 1, -1, -1, -1}},
    {"B11", 4, {2, 0, 1, 1, 0, 0, 1, -1, 1, 1, -1, -1, 1, -1, -1, -1}},
    {"Cc4-1", 2, {1, 1, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
    {"Cc4-2", 2, {1, 1, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0}},
    {"Cc4-3", 2, {1, 0, 1, 0, 0, 0, 0, 0, 1, 0, -1, 0, 0, 0, 0, 0}},
};

const Setting kS222{2, 2, 2}, kS322{3, 2, 2}, kS232{2, 3, 2}, kS225{2, 2, 5}, kS242{2, 4, 2},
    kS224{2, 2, 4};

}  // namespace

BellInequality named_family(const std::string& name, const Setting& st) {
  st.validate();
  const bool two_settings = st.n >= 2 && st.uniform() && st.c[0] == 2;

  if (name == "CHSH" && st == kS222) {
    // sum_s sum_k [k = s1 s2] p(k|s) <= 3, the full-space indicator form
    std::vector<RatVec> W(4, RatVec(2, Rat(0)));
    for (int sidx = 0; sidx < 4; ++sidx) W[sidx][(sidx >> 1) * (sidx & 1)] = 1;
    return from_full_form(st, W, name, 3);
  }
  if (name == "CHSH-signed" && st == kS222)
    return from_int_vector(st, {1, 1, 1, -1}, 1, name, 2);
  if (name == "CGLMP" && st.n == 2 && two_settings) return cglmp_pattern(st, 0, name);
  if (name == "CGLMP-tri" && st.n == 3 && two_settings) return cglmp_pattern(st, 1, name);
  if (name == "CGLMP-tri2" && st.n == 3 && two_settings) return cglmp_pattern(st, 2, name);
  if (name == "Mermin" && st == kS322)
    return from_int_vector(st, {1, 1, 0, 0, 0, 0, 1, -1}, 1, name, 2);
  if (name == "Svetlichny" && st == kS322) {
    // sum_s sum_k [k = s1(s2+s3) + s2 s3] p(k|s) <= 6
    std::vector<RatVec> W(8, RatVec(2, Rat(0)));
    for (int sidx = 0; sidx < 8; ++sidx) {
      int s1 = sidx >> 2, s2 = (sidx >> 1) & 1, s3 = sidx & 1;
      W[sidx][(s1 * (s2 + s3) + s2 * s3) % 2] = 1;
    }
    return from_full_form(st, W, name, 6);
  }
  if (name == "Cc3" && st == kS232)
    return signed_product_entry(st, {0, 1}, {0, 1}, {Rat(1)}, name, 2);
  if (st == kS225) {
    if (name == "I1")
      return from_int_vector(st, {6, 2, 3, 4, 4, -2, 2, 1, 4, -2, 2, 1, -4, 2, -2, -1}, 2, name,
                             5);
    if (name == "I2")
      return from_int_vector(st, {3, 1, -1, -3, 2, -1, -4, -2, 2, -1, -4, -2, -2, 1, 4, 2}, 1,
                             name, 5);
    if (name == "I3")
      return from_int_vector(st, {2, -1, 1, -2, 3, 1, -1, 2, 3, 1, -1, 2, -3, -1, 1, -2}, 1, name,
                             5);
  }
  if (st == kS242) {
    for (const TableRow& row : kFourSettingRows)
      if (name == row.name)
        return from_int_vector(st, std::vector<int>(row.b.begin(), row.b.end()), 1, name,
                               row.bound);
  }
  if (st == kS224) {
    // the d = 4 embeddings of CHSH: outcomes grouped mod 2, and the variant
    // weighted by the circular distance of the outcome sum from 0
    if (name == "CHSH-mod2")
      return signed_product_entry(st, {0, 1}, {0, 1}, {Rat(1), Rat(0), Rat(1)}, name, 2);
    if (name == "CHSH-cdist")
      return signed_product_entry(st, {0, 1}, {0, 1}, {Rat(1), Rat(2), Rat(1)}, name, 4);
  }
  throw UnknownFamily("named_family: no entry \"" + name + "\" at " + st.str());
}

std::vector<std::string> family_names(const Setting& st) {
  std::vector<std::string> out;
  const bool two_settings = st.n >= 2 && st.uniform() && st.c[0] == 2;
  if (st == kS222) {
    out.push_back("CHSH");
    out.push_back("CHSH-signed");
  }
  if (st.n == 2 && two_settings) out.push_back("CGLMP");
  if (st.n == 3 && two_settings) {
    out.push_back("CGLMP-tri");
    out.push_back("CGLMP-tri2");
  }
  if (st == kS322) {
    out.push_back("Mermin");
    out.push_back("Svetlichny");
  }
  if (st == kS232) out.push_back("Cc3");
  if (st == kS225) out.insert(out.end(), {"I1", "I2", "I3"});
  if (st == kS242)
    for (const TableRow& row : kFourSettingRows) out.push_back(row.name);
  if (st == kS224) out.insert(out.end(), {"CHSH-mod2", "CHSH-cdist"});
  return out;
}

BellInequality nontrivial_from_function(const FunctionOverSettings& f, const InputWeights& w) {
  w.validate();
  if (!(f.setting == w.setting))
    throw SettingMismatch("nontrivial_from_function: setting mismatch");
  if (is_n_partite_linear(f))
    throw LinearFunctionInput("nontrivial_from_function: f is n-partite linear");

  const Setting& st = f.setting;
  const int dm1 = st.d - 1;
  RatVec coeffs(st.reduced_dim(), Rat(0));
  Rat offset = 0;
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    int v = f.at_index(sidx);
    if (v != 0) {
      coeffs[sidx * dm1 + (v - 1)] = w.w[sidx];
    } else {
      offset += w.w[sidx];
      for (int k = 0; k < dm1; ++k) coeffs[sidx * dm1 + k] = -w.w[sidx];
    }
  }
  BellInequality q = assemble(st, std::move(coeffs), std::move(offset), 1, "generated");
  if (q.gamma_P != 1)
    throw std::logic_error("nontrivial_from_function: algebraic maximum is not 1");
  return q;
}

std::vector<FunctionOverSettings> max_violating_vertices(const BellInequality& ineq,
                                                         long long limit) {
  const Setting& st = ineq.setting;
  const int dm1 = st.d - 1;
  const long long ns = st.setting_count();

  std::vector<std::vector<int>> argmax(ns);
  long long combos = 1;
  for (long long sidx = 0; sidx < ns; ++sidx) {
    Rat best = 0;
    for (int k = 0; k < dm1; ++k) best = std::max(best, ineq.coeffs[sidx * dm1 + k]);
    if (best == 0) argmax[sidx].push_back(0);
    for (int k = 0; k < dm1; ++k)
      if (ineq.coeffs[sidx * dm1 + k] == best) argmax[sidx].push_back(k + 1);
    combos *= argmax[sidx].size();
    if (combos > limit)
      throw SearchSpaceTooLarge("max_violating_vertices: maximizer set exceeds limit");
  }

  std::vector<FunctionOverSettings> out;
  out.reserve(combos);
  std::vector<size_t> pick(ns, 0);
  for (long long i = 0; i < combos; ++i) {
    std::vector<int> table(ns);
    for (long long sidx = 0; sidx < ns; ++sidx) table[sidx] = argmax[sidx][pick[sidx]];
    out.emplace_back(st, std::move(table));
    for (long long sidx = ns - 1; sidx >= 0; --sidx) {
      if (++pick[sidx] < argmax[sidx].size()) break;
      pick[sidx] = 0;
    }
  }
  return out;
}

IntVec canonical_row(const BellInequality& ineq) {
  RatVec row = ineq.coeffs;
  row.push_back(ineq.gamma_L - ineq.p0_offset);
  IntVec r = to_integer_row(row);
  reduce_by_gcd(r);
  return r;
}

BellInequality inequality_from_row(const Setting& st, const IntVec& row, std::string origin) {
  st.validate();
  if ((long long)row.size() != st.reduced_dim() + 1)
    throw std::invalid_argument("inequality_from_row: wrong row length");
  RatVec coeffs(row.begin(), row.end() - 1);
  return assemble(st, std::move(coeffs), 0, 1, std::move(origin));
}

}  // namespace bellpoly
