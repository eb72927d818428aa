#include "bellpoly/correlator.hpp"

#include "bellpoly/nonsignaling.hpp"

#include <stdexcept>

namespace bellpoly {

namespace {

void check_block_index(const Setting& st, long long sidx) {
  if (sidx < 0 || sidx >= st.setting_count())
    throw std::out_of_range("correlator: setting index out of range");
}

}  // namespace

CorrelatorVector::CorrelatorVector(Setting st, RatVec e)
    : setting(std::move(st)), entries(std::move(e)) {
  validate();
}

std::size_t CorrelatorVector::index_of(long long sidx, int k) const {
  check_block_index(setting, sidx);
  if (k < 1 || k >= setting.d) throw std::out_of_range("correlator: k must be in 1..d-1");
  return std::size_t(sidx) * (setting.d - 1) + (k - 1);
}

const Rat& CorrelatorVector::at(const std::vector<int>& s, int k) const {
  return entries[index_of(digits_to_index(s, setting.c), k)];
}

Rat& CorrelatorVector::at(const std::vector<int>& s, int k) {
  return entries[index_of(digits_to_index(s, setting.c), k)];
}

void CorrelatorVector::validate() const {
  setting.validate();
  if ((long long)entries.size() != setting.reduced_dim())
    throw std::invalid_argument("correlator: wrong entry count");
  const int dm1 = setting.d - 1;
  for (long long sidx = 0; sidx < setting.setting_count(); ++sidx) {
    Rat sum = 0;
    for (int k = 0; k < dm1; ++k) {
      const Rat& p = entries[sidx * dm1 + k];
      if (p < 0) throw std::invalid_argument("correlator: negative probability");
      sum += p;
    }
    if (sum > 1) throw std::invalid_argument("correlator: s-block exceeds total probability 1");
  }
}

FullCorrelatorVector::FullCorrelatorVector(Setting st, RatVec e)
    : setting(std::move(st)), entries(std::move(e)) {
  validate();
}

std::size_t FullCorrelatorVector::index_of(long long sidx, int k) const {
  check_block_index(setting, sidx);
  if (k < 0 || k >= setting.d) throw std::out_of_range("correlator: k must be in 0..d-1");
  return std::size_t(sidx) * setting.d + k;
}

const Rat& FullCorrelatorVector::at(const std::vector<int>& s, int k) const {
  return entries[index_of(digits_to_index(s, setting.c), k)];
}

Rat& FullCorrelatorVector::at(const std::vector<int>& s, int k) {
  return entries[index_of(digits_to_index(s, setting.c), k)];
}

void FullCorrelatorVector::validate() const {
  setting.validate();
  if ((long long)entries.size() != setting.d * setting.setting_count())
    throw std::invalid_argument("correlator: wrong entry count");
  for (long long sidx = 0; sidx < setting.setting_count(); ++sidx) {
    Rat sum = 0;
    for (int k = 0; k < setting.d; ++k) {
      const Rat& p = entries[sidx * setting.d + k];
      if (p < 0) throw std::invalid_argument("correlator: negative probability");
      sum += p;
    }
    if (sum != 1) throw std::invalid_argument("correlator: s-block not normalized");
  }
}

CorrelatorVector deterministic_correlator(const FunctionOverSettings& f) {
  const Setting& st = f.setting;
  CorrelatorVector out;
  out.setting = st;
  out.entries.assign(st.reduced_dim(), Rat(0));
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    int k = f.at_index(sidx);
    if (k != 0) out.entries[sidx * (st.d - 1) + (k - 1)] = 1;
  }
  return out;
}

CorrelatorVector correlator_from_distribution(const JointDistribution& dist) {
  dist.validate();
  const Setting& st = dist.setting;
  const long long nm = st.outcome_string_count();
  const std::vector<int> mradix(st.n, st.d);

  // sum of digits mod d for every outcome index, walked in odometer order
  std::vector<int> digitsum(nm);
  {
    std::vector<int> m(st.n, 0);
    int cur = 0;
    for (long long mi = 0; mi < nm; ++mi) {
      digitsum[mi] = cur;
      for (int j = st.n - 1; j >= 0; --j) {
        if (++m[j] < st.d) {
          cur = (cur + 1) % st.d;
          break;
        }
        m[j] = 0;
        cur = (cur - (st.d - 1) % st.d + st.d) % st.d;
      }
    }
  }

  CorrelatorVector out;
  out.setting = st;
  out.entries.assign(st.reduced_dim(), Rat(0));
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx)
    for (long long mi = 0; mi < nm; ++mi) {
      int k = digitsum[mi];
      if (k != 0) out.entries[sidx * (st.d - 1) + (k - 1)] += dist.entries[dist.index_of(sidx, mi)];
    }
  return out;
}

FullCorrelatorVector lift_to_full(const CorrelatorVector& corr) {
  corr.setting.validate();
  const Setting& st = corr.setting;
  if ((long long)corr.entries.size() != st.reduced_dim())
    throw std::invalid_argument("correlator: wrong entry count");
  FullCorrelatorVector out;
  out.setting = st;
  out.entries.assign(st.d * st.setting_count(), Rat(0));
  const int dm1 = st.d - 1;
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    Rat sum = 0;
    for (int k = 1; k < st.d; ++k) {
      const Rat& p = corr.entries[sidx * dm1 + (k - 1)];
      if (p < 0) throw NotNormalizable("lift_to_full: negative probability");
      out.entries[sidx * st.d + k] = p;
      sum += p;
    }
    if (sum > 1) throw NotNormalizable("lift_to_full: s-block exceeds total probability 1");
    out.entries[sidx * st.d] = 1 - sum;
  }
  return out;
}

CorrelatorVector project_to_reduced(const FullCorrelatorVector& full) {
  full.validate();
  const Setting& st = full.setting;
  CorrelatorVector out;
  out.setting = st;
  out.entries.reserve(st.reduced_dim());
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx)
    for (int k = 1; k < st.d; ++k) out.entries.push_back(full.entries[sidx * st.d + k]);
  return out;
}

LhvPolytope::LhvPolytope(Setting st) : setting_(std::move(st)) {
  setting_.validate();
  funcs_ = enumerate_n_partite_linear(setting_);
  vrep_.dim = setting_.reduced_dim();
  vrep_.vertices.reserve(funcs_.size());
  for (const auto& f : funcs_) vrep_.vertices.push_back(deterministic_correlator(f).entries);
}

const HRep& LhvPolytope::facets(const DdOptions& opt) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!hrep_) hrep_ = std::make_unique<HRep>(facet_enumeration(vrep_, opt));
  return *hrep_;
}

bool LhvPolytope::facets_computed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hrep_ != nullptr;
}

MembershipResult lhv_membership(const CorrelatorVector& corr, const LhvPolytope& lhv) {
  corr.validate();
  if (!(corr.setting == lhv.setting()))
    throw std::invalid_argument("lhv_membership: setting mismatch");

  if (lhv.facets_computed()) {
    const HRep& h = lhv.facets();
    const RatVec& x = corr.entries;
    auto lhs = [&](const IntVec& row) {
      Rat v = 0;
      for (int i = 0; i < h.dim; ++i) v += row[i] * x[i];
      return v;
    };
    for (const IntVec& row : h.eq) {
      Rat v = lhs(row);
      if (v == row.back()) continue;
      MembershipResult out;
      out.inside = false;
      out.separator = row;
      if (v < row.back())  // flip so the point violates a <= row
        for (auto& e : out.separator) e = -e;
      return out;
    }
    for (const IntVec& row : h.ineq) {
      if (lhs(row) <= row.back()) continue;
      MembershipResult out;
      out.inside = false;
      out.separator = row;
      return out;
    }
    // Inside: recover convex weights by LP.
    MembershipResult out = polytope_membership(lhv.vertices(), corr.entries);
    if (!out.inside) throw std::logic_error("lhv_membership: facet scan and LP disagree");
    return out;
  }
  return polytope_membership(lhv.vertices(), corr.entries);
}

}  // namespace bellpoly
