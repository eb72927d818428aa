#include "bellpoly/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace bellpoly {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CMat fourier_unitary(int d) {
  CMat F(d, d);
  const double norm = 1.0 / std::sqrt(double(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) F(j, k) = std::polar(norm, kTwoPi * j * k / d);
  return F;
}

void check_unitary(const CMat& U, int d) {
  if (U.rows() != d || U.cols() != d)
    throw DimensionMismatch("measurement matrix has the wrong dimension");
  CMat G = U.adjoint() * U - CMat::Identity(d, d);
  if (G.cwiseAbs().maxCoeff() > 1e-12)
    throw DimensionMismatch("measurement matrix is not unitary");
}

void check_basis(const MeasurementBasis& basis, const Setting& st) {
  if ((int)basis.size() != st.n) throw DimensionMismatch("basis: one unitary list per party");
  for (int j = 0; j < st.n; ++j) {
    if ((int)basis[j].size() != st.c[j])
      throw DimensionMismatch("basis: one unitary per setting value");
    for (const CMat& U : basis[j]) check_unitary(U, st.d);
  }
}

long long pow_ll(int base, int exp) {
  long long r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// digit sum mod d of every outcome index (MSD-first mixed radix, uniform d)
std::vector<int> digit_sums(int n, int d) {
  const long long nm = pow_ll(d, n);
  std::vector<int> out(nm);
  std::vector<int> m(n, 0);
  int cur = 0;
  for (long long mi = 0; mi < nm; ++mi) {
    out[mi] = cur;
    for (int j = n - 1; j >= 0; --j) {
      if (++m[j] < d) {
        cur = (cur + 1) % d;
        break;
      }
      m[j] = 0;
      cur = (cur - (d - 1) % d + d) % d;
    }
  }
  return out;
}

// a <- (U^+ along axis j) a, over the d^n amplitude vector (axis 0 is the
// most significant digit)
void apply_adjoint(CVec& a, const CMat& U, int j, int n, int d) {
  long long stride = 1;
  for (int t = j + 1; t < n; ++t) stride *= d;
  const long long total = a.size();
  std::vector<Cplx> tmp(d);
  for (long long base = 0; base < total; ++base) {
    if ((base / stride) % d != 0) continue;
    for (int t = 0; t < d; ++t) tmp[t] = a[base + t * stride];
    for (int r = 0; r < d; ++r) {
      Cplx acc = 0;
      for (int t = 0; t < d; ++t) acc += std::conj(U(t, r)) * tmp[t];
      a[base + r * stride] = acc;
    }
  }
}

CMat kron(const CMat& A, const CMat& B) {
  CMat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

}  // namespace

MeasurementFamily MeasurementFamily::zero(const Setting& st) {
  st.validate();
  MeasurementFamily out;
  out.setting = st;
  out.phases.resize(st.n);
  for (int j = 0; j < st.n; ++j)
    out.phases[j].assign(st.c[j], std::vector<double>(st.d, 0.0));
  return out;
}

void MeasurementFamily::validate() const {
  setting.validate();
  if ((int)phases.size() != setting.n)
    throw DimensionMismatch("measurement family: one phase table per party");
  for (int j = 0; j < setting.n; ++j) {
    if ((int)phases[j].size() != setting.c[j])
      throw DimensionMismatch("measurement family: one phase list per setting value");
    for (const auto& row : phases[j]) {
      if ((int)row.size() != setting.d)
        throw DimensionMismatch("measurement family: d phases per setting");
      if (row[0] != 0.0) throw DimensionMismatch("measurement family: gauge phi_0 = 0");
    }
  }
}

CMat MeasurementFamily::unitary(int party, int setting_value) const {
  const int d = setting.d;
  CMat U = fourier_unitary(d);
  const std::vector<double>& phi = phases.at(party).at(setting_value);
  for (int t = 0; t < d; ++t) U.row(t) *= std::polar(1.0, phi[t]);
  return U;  // D(phi) * F
}

MeasurementBasis MeasurementFamily::bases() const {
  validate();
  MeasurementBasis out(setting.n);
  for (int j = 0; j < setting.n; ++j)
    for (int a = 0; a < setting.c[j]; ++a) out[j].push_back(unitary(j, a));
  return out;
}

ApproxCorrelator quantum_correlator(const CVec& state, const MeasurementBasis& basis,
                                    const Setting& st) {
  st.validate();
  check_basis(basis, st);
  const long long dim = pow_ll(st.d, st.n);
  if (state.size() != dim) throw DimensionMismatch("state dimension must be d^n");
  if (std::abs(state.norm() - 1.0) > 1e-9)
    throw DimensionMismatch("state must be unit length");

  const std::vector<int> sums = digit_sums(st.n, st.d);
  ApproxCorrelator out;
  out.setting = st;
  out.entries.assign(st.setting_count() * (st.d - 1), 0.0);
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    CVec a = state;
    for (int j = 0; j < st.n; ++j) apply_adjoint(a, basis[j][s[j]], j, st.n, st.d);
    for (long long mi = 0; mi < dim; ++mi) {
      const int k = sums[mi];
      if (k != 0) out.entries[sidx * (st.d - 1) + (k - 1)] += std::norm(a[mi]);
    }
  }
  return out;
}

ApproxCorrelator quantum_correlator(const CVec& state, const MeasurementFamily& meas) {
  return quantum_correlator(state, meas.bases(), meas.setting);
}

double evaluate_approx(const BellInequality& ineq, const ApproxCorrelator& corr) {
  if (!(ineq.setting == corr.setting))
    throw SettingMismatch("evaluate_approx: setting mismatch");
  if (corr.entries.size() != ineq.coeffs.size())
    throw DimensionMismatch("evaluate_approx: wrong correlator length");
  double acc = ineq.p0_offset.get_d();
  for (std::size_t i = 0; i < ineq.coeffs.size(); ++i)
    acc += ineq.coeffs[i].get_d() * corr.entries[i];
  return acc;
}

CMat bell_operator(const BellInequality& ineq, const MeasurementBasis& basis) {
  const Setting& st = ineq.setting;
  check_basis(basis, st);
  const long long dim = pow_ll(st.d, st.n);
  const std::vector<int> sums = digit_sums(st.n, st.d);

  CMat B = ineq.p0_offset.get_d() * CMat::Identity(dim, dim);
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    std::vector<int> s = index_to_digits(sidx, st.c);
    CMat V = CMat::Identity(1, 1);
    for (int j = 0; j < st.n; ++j) V = kron(V, basis[j][s[j]]);
    for (long long mi = 0; mi < dim; ++mi) {
      const int k = sums[mi];
      if (k == 0) continue;
      const double w = ineq.coeff(sidx, k).get_d();
      if (w == 0.0) continue;
      B += w * (V.col(mi) * V.col(mi).adjoint());
    }
  }
  return (B + CMat(B.adjoint())) / 2.0;
}

const Cplx& FourierMoments::at(long long sidx, int mu) const {
  return moments.at(sidx * setting.d + mu);
}

const Cplx& FourierForm::at(long long sidx, int mu) const {
  return eta.at(sidx * setting.d + mu);
}

namespace {

FourierMoments moments_from_doubles(const Setting& st, const std::vector<double>& reduced) {
  FourierMoments out;
  out.setting = st;
  out.moments.assign(st.setting_count() * st.d, Cplx(0, 0));
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
    std::vector<double> p(st.d, 0.0);
    double rest = 1.0;
    for (int k = 1; k < st.d; ++k) {
      p[k] = reduced[sidx * (st.d - 1) + (k - 1)];
      rest -= p[k];
    }
    p[0] = rest;
    for (int mu = 0; mu < st.d; ++mu) {
      Cplx acc = 0;
      for (int k = 0; k < st.d; ++k) acc += p[k] * std::polar(1.0, kTwoPi * mu * k / st.d);
      out.moments[sidx * st.d + mu] = acc;
    }
  }
  return out;
}

}  // namespace

FourierMoments expectation_values(const CorrelatorVector& corr) {
  corr.validate();
  std::vector<double> reduced(corr.entries.size());
  for (std::size_t i = 0; i < corr.entries.size(); ++i) reduced[i] = corr.entries[i].get_d();
  return moments_from_doubles(corr.setting, reduced);
}

FourierMoments expectation_values(const ApproxCorrelator& corr) {
  corr.setting.validate();
  if ((long long)corr.entries.size() != corr.setting.reduced_dim())
    throw DimensionMismatch("expectation_values: wrong correlator length");
  return moments_from_doubles(corr.setting, corr.entries);
}

FourierForm fourier_form(const BellInequality& ineq) {
  const Setting& st = ineq.setting;
  FourierForm out;
  out.setting = st;
  out.offset = ineq.p0_offset.get_d();
  out.eta.assign(st.setting_count() * st.d, Cplx(0, 0));
  for (long long sidx = 0; sidx < st.setting_count(); ++sidx)
    for (int mu = 0; mu < st.d; ++mu) {
      Cplx acc = 0;  // k = 0 contributes omega_0 = 0
      for (int k = 1; k < st.d; ++k)
        acc += ineq.coeff(sidx, k).get_d() * std::polar(1.0, -kTwoPi * mu * k / st.d);
      out.eta[sidx * st.d + mu] = acc / double(st.d);
    }
  return out;
}

Cplx fourier_apply(const FourierForm& form, const FourierMoments& moments) {
  if (!(form.setting == moments.setting))
    throw SettingMismatch("fourier_apply: setting mismatch");
  Cplx acc(form.offset, 0);
  for (std::size_t i = 0; i < form.eta.size(); ++i) acc += form.eta[i] * moments.moments[i];
  return acc;
}

// ---------------------------------------------------------------------------
// see-saw optimizer

namespace {

// Workspace for one restart: phases + state, with fast objective evaluation.
struct SeeSaw {
  const Setting& st;
  std::vector<double> w;  // reduced coefficients as doubles
  double offset;
  std::vector<int> sums;
  long long dim;
  CMat F;

  MeasurementFamily meas;
  CVec state;

  explicit SeeSaw(const BellInequality& ineq)
      : st(ineq.setting),
        offset(ineq.p0_offset.get_d()),
        sums(digit_sums(st.n, st.d)),
        dim(pow_ll(st.d, st.n)),
        F(fourier_unitary(st.d)),
        meas(MeasurementFamily::zero(st)) {
    w.resize(ineq.coeffs.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = ineq.coeffs[i].get_d();
    state = CVec::Zero(dim);
    const long long step = (dim - 1) / (st.d - 1);  // index of |k k ... k>
    for (int k = 0; k < st.d; ++k) state[k * step] = 1.0 / std::sqrt(double(st.d));
  }

  CMat unitary(int j, int a) const {
    CMat U = F;
    for (int t = 0; t < st.d; ++t) U.row(t) *= std::polar(1.0, meas.phases[j][a][t]);
    return U;
  }

  double value() const {
    double acc = offset;
    for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
      std::vector<int> s = index_to_digits(sidx, st.c);
      CVec a = state;
      for (int j = 0; j < st.n; ++j) apply_adjoint(a, unitary(j, s[j]), j, st.n, st.d);
      for (long long mi = 0; mi < dim; ++mi) {
        const int k = sums[mi];
        if (k != 0) acc += w[sidx * (st.d - 1) + (k - 1)] * std::norm(a[mi]);
      }
    }
    return acc;
  }

  // cyclic closed-form coordinate descent over all free phases
  double sweep_phases(double tol, int max_passes = 500) {
    double current = value();
    for (int pass = 0; pass < max_passes; ++pass) {
      const double before = current;
      for (int j = 0; j < st.n; ++j)
        for (int a = 0; a < st.c[j]; ++a)
          for (int t = 1; t < st.d; ++t) {
            double& phi = meas.phases[j][a][t];
            // the objective in one phase is exactly A + B cos + C sin
            phi = 0.0;
            const double g0 = value();
            phi = kTwoPi / 3.0;
            const double g1 = value();
            phi = -kTwoPi / 3.0;
            const double g2 = value();
            const double A = (g0 + g1 + g2) / 3.0;
            const double B = g0 - A;
            const double C = (g1 - g2) / std::sqrt(3.0);
            phi = std::atan2(C, B);
            current = A + std::hypot(B, C);
          }
      if (current - before < tol) break;
    }
    return current;
  }

  CMat operator_from_phases() const {
    CMat B = offset * CMat::Identity(dim, dim);
    for (long long sidx = 0; sidx < st.setting_count(); ++sidx) {
      std::vector<int> s = index_to_digits(sidx, st.c);
      CMat V = CMat::Identity(1, 1);
      for (int j = 0; j < st.n; ++j) V = kron(V, unitary(j, s[j]));
      for (long long mi = 0; mi < dim; ++mi) {
        const int k = sums[mi];
        if (k == 0) continue;
        const double wk = w[sidx * (st.d - 1) + (k - 1)];
        if (wk == 0.0) continue;
        B += wk * (V.col(mi) * V.col(mi).adjoint());
      }
    }
    return (B + CMat(B.adjoint())) / 2.0;
  }

  // full see-saw; returns (value, rounds used)
  std::pair<double, int> run(double tol, int max_rounds) {
    double best = sweep_phases(tol);
    int round = 0;
    while (round < max_rounds) {
      ++round;
      Eigen::SelfAdjointEigenSolver<CMat> es(operator_from_phases());
      state = es.eigenvectors().col(dim - 1);
      const double after_state = es.eigenvalues()(dim - 1);
      const double after_phases = sweep_phases(tol);
      const double now = std::max(after_state, after_phases);
      if (now - best < tol) {
        best = std::max(best, now);
        break;
      }
      best = now;
    }
    return {best, round};
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

OptimizerResult lower_bound_violation(const BellInequality& ineq, const OptimizerOptions& opt) {
  ineq.validate();
  if (opt.restarts < 1) throw std::invalid_argument("optimizer: need at least one restart");

  struct RestartOutcome {
    double value = 0;
    int rounds = 0;
    MeasurementFamily meas;
    CVec state;
  };
  std::vector<RestartOutcome> outcomes(opt.restarts);

  auto run_one = [&](int r) {
    SeeSaw ss(ineq);
    if (r > 0) {  // restart 0 keeps the zero-phase start
      std::mt19937_64 rng(splitmix64(opt.seed + std::uint64_t(r)));
      std::uniform_real_distribution<double> unif(0.0, kTwoPi);
      for (int j = 0; j < ss.st.n; ++j)
        for (int a = 0; a < ss.st.c[j]; ++a)
          for (int t = 1; t < ss.st.d; ++t) ss.meas.phases[j][a][t] = unif(rng);
    }
    auto [value, rounds] = ss.run(opt.tol, opt.max_rounds);
    outcomes[r] = {value, rounds, std::move(ss.meas), std::move(ss.state)};
  };

  if (opt.jobs > 1) {
    std::vector<std::thread> pool;
    const int workers = std::min(opt.jobs, opt.restarts);
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&, wkr] {
        for (int r = wkr; r < opt.restarts; r += workers) run_one(r);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int r = 0; r < opt.restarts; ++r) run_one(r);
  }

  int best = 0;
  for (int r = 1; r < opt.restarts; ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  OptimizerResult res;
  res.value = outcomes[best].value;
  res.state = outcomes[best].state;
  res.measurements = outcomes[best].meas;
  res.best_restart = best;
  res.rounds = outcomes[best].rounds;
  res.restart_values.reserve(opt.restarts);
  for (const RestartOutcome& o : outcomes) res.restart_values.push_back(o.value);

  // Schmidt coefficients across the (party 1 | rest) bipartition
  const int d = ineq.setting.d;
  const long long rest = pow_ll(d, ineq.setting.n - 1);
  CMat M(d, rest);
  for (int a = 0; a < d; ++a)
    for (long long b = 0; b < rest; ++b) M(a, b) = res.state[a * rest + b];
  Eigen::JacobiSVD<CMat> svd(M);
  res.schmidt.assign(svd.singularValues().data(), svd.singularValues().data() + d);
  res.max_entangled = true;
  const double target = 1.0 / std::sqrt(double(d));
  for (double sv : res.schmidt) res.max_entangled &= std::abs(sv - target) <= 1e-6;
  return res;
}

double ghz_overlap(const CVec& state, int n, int d) {
  const long long dim = pow_ll(d, n);
  if (state.size() != dim) throw DimensionMismatch("ghz_overlap: state dimension must be d^n");

  // overlap with u_j fixed except party j: (1/sqrt d) Tr(u_j W^T), where
  // W(k,t) = amplitude of (k,...,k) with axis j freed to t after applying
  // the other parties' unitaries; the best unitary comes from W's SVD.
  auto optimize_from = [&](std::vector<CMat> us) {
    double prev = -1.0;
    for (int iter = 0; iter < 200; ++iter) {
      for (int j = 0; j < n; ++j) {
        CVec a = state;
        for (int i = 0; i < n; ++i)
          if (i != j) apply_adjoint(a, CMat(us[i].adjoint()), i, n, d);  // applies us[i]
        long long stride = 1;
        for (int t = j + 1; t < n; ++t) stride *= d;
        CMat W(d, d);
        for (int k = 0; k < d; ++k) {
          // computational index of |k...k> with axis j zeroed
          long long base = 0;
          long long s2 = 1;
          for (int i = n - 1; i >= 0; --i) {
            if (i != j) base += (long long)k * s2;
            s2 *= d;
          }
          for (int t = 0; t < d; ++t) W(k, t) = a[base + t * stride];
        }
        Eigen::JacobiSVD<CMat> svd(W.transpose(),
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
        us[j] = svd.matrixV() * svd.matrixU().adjoint();
      }
      // current overlap
      CVec a = state;
      for (int i = 0; i < n; ++i) apply_adjoint(a, CMat(us[i].adjoint()), i, n, d);
      Cplx amp = 0;
      const long long step = (dim - 1) / (d - 1);
      for (int k = 0; k < d; ++k) amp += a[k * step];
      const double val = std::norm(amp) / d;
      if (val - prev < 1e-14) return val;
      prev = val;
    }
    return prev;
  };

  double best = 0.0;
  std::mt19937_64 rng(0x9d2c5680u);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  for (int start = 0; start < 8; ++start) {
    std::vector<CMat> us(n, CMat::Identity(d, d));
    if (start > 0) {
      for (int j = 0; j < n; ++j) {
        CMat U = fourier_unitary(d);
        for (int t = 0; t < d; ++t) U.row(t) *= std::polar(1.0, unif(rng));
        if (start % 2 == 0) U = CMat(U.adjoint());
        us[j] = U;
      }
    }
    best = std::max(best, optimize_from(std::move(us)));
  }
  return best;
}

}  // namespace bellpoly
