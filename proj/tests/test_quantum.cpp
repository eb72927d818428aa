#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellpoly/correlator.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/quantum.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

using namespace bellpoly;

namespace {

FunctionOverSettings make_f(const Setting& st,
                            const std::function<int(const std::vector<int>&)>& fn) {
  FunctionOverSettings f;
  f.setting = st;
  f.table.resize(st.setting_count());
  for (long long i = 0; i < st.setting_count(); ++i) {
    int v = fn(index_to_digits(i, st.c)) % st.d;
    f.table[i] = (v + st.d) % st.d;
  }
  return f;
}

CVec random_state(long long dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(dim);
  for (long long i = 0; i < dim; ++i) v[i] = Cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

MeasurementFamily random_family(const Setting& st, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 2 * 3.14159265358979);
  MeasurementFamily fam = MeasurementFamily::zero(st);
  for (int j = 0; j < st.n; ++j)
    for (int a = 0; a < st.c[j]; ++a)
      for (int t = 1; t < st.d; ++t) fam.phases[j][a][t] = unif(rng);
  return fam;
}

// exact random correlator: strictly positive rational blocks summing below 1
CorrelatorVector random_correlator(const Setting& st, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 6);
  CorrelatorVector corr;
  corr.setting = st;
  corr.entries.resize(st.reduced_dim());
  for (long long s = 0; s < st.setting_count(); ++s) {
    int total = 0;
    std::vector<int> num(st.d - 1);
    for (int& v : num) {
      v = pick(rng);
      total += v;
    }
    const int denom = total + pick(rng) + 1;
    for (int k = 1; k < st.d; ++k) {
      Rat e(num[k - 1], denom);
      e.canonicalize();
      corr.entries[s * (st.d - 1) + (k - 1)] = e;
    }
  }
  corr.validate();
  return corr;
}

}  // namespace

TEST_CASE("measurement families build unitary Fourier-type bases") {
  Setting st(2, 2, 3);
  MeasurementFamily zero = MeasurementFamily::zero(st);
  zero.validate();

  // zero phases: the plain discrete Fourier unitary
  CMat F = zero.unitary(0, 0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Cplx expected = std::polar(1.0 / std::sqrt(3.0), 2 * 3.14159265358979 * j * k / 3.0);
      CHECK(std::abs(F(j, k) - expected) < 1e-12);
    }

  std::mt19937_64 rng(7);
  MeasurementFamily fam = random_family(st, rng);
  fam.validate();
  for (int j = 0; j < st.n; ++j)
    for (int a = 0; a < st.c[j]; ++a) {
      CMat U = fam.unitary(j, a);
      CHECK((U.adjoint() * U - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    }
  MeasurementBasis bases = fam.bases();
  CHECK(bases.size() == 2);
  CHECK(bases[0].size() == 2);

  // gauge and shape violations
  MeasurementFamily bad = fam;
  bad.phases[0][0][0] = 0.5;
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
  bad = fam;
  bad.phases[1].pop_back();
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
  bad = fam;
  bad.phases[0][1].push_back(0.0);
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
}

TEST_CASE("quantum correlators are normalized and reproduce determinism") {
  // |0..0> against the plain Fourier basis: every outcome equally likely
  {
    Setting st(2, 2, 3);
    CVec ground = CVec::Zero(9);
    ground[0] = 1.0;
    ApproxCorrelator corr = quantum_correlator(ground, MeasurementFamily::zero(st));
    for (double e : corr.entries) CHECK(e == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }

  // computational bases shifted per setting: a deterministic linear function
  {
    Setting st(2, 2, 3);
    const std::vector<std::vector<int>> shift = {{0, 1}, {0, 2}};  // g_j(s_j)
    MeasurementBasis basis(2);
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a) {
        CMat U = CMat::Zero(3, 3);
        for (int m = 0; m < 3; ++m) U((m + shift[j][a]) % 3, m) = 1.0;
        basis[j].push_back(U);
      }
    CVec ground = CVec::Zero(9);
    ground[0] = 1.0;
    ApproxCorrelator corr = quantum_correlator(ground, basis, st);

    // outcome of party j is -g_j(s_j), so f(s) = 2 s_1 + s_2 (mod 3)
    auto f = make_f(st, [](const std::vector<int>& s) { return 2 * s[0] + s[1]; });
    CorrelatorVector det = deterministic_correlator(f);
    for (std::size_t i = 0; i < corr.entries.size(); ++i)
      CHECK(std::abs(corr.entries[i] - det.entries[i].get_d()) < 1e-12);
  }

  // random states and phases stay inside the probability simplex
  {
    std::mt19937_64 rng(11);
    for (const Setting& st : {Setting(2, 2, 2), Setting(2, 2, 5), Setting(3, 2, 2)}) {
      long long dim = 1;
      for (int j = 0; j < st.n; ++j) dim *= st.d;
      ApproxCorrelator corr =
          quantum_correlator(random_state(dim, rng), random_family(st, rng));
      for (long long s = 0; s < st.setting_count(); ++s) {
        double sum = 0;
        for (int k = 1; k < st.d; ++k) {
          double e = corr.entries[s * (st.d - 1) + (k - 1)];
          CHECK(e >= -1e-10);
          sum += e;
        }
        CHECK(sum <= 1.0 + 1e-10);
      }
    }
  }

  // dimension guards
  {
    Setting st(2, 2, 2);
    MeasurementFamily fam = MeasurementFamily::zero(st);
    CVec wrong = CVec::Zero(3);
    wrong[0] = 1.0;
    CHECK_THROWS_AS(quantum_correlator(wrong, fam), DimensionMismatch);
    CVec unnormalized = CVec::Zero(4);
    unnormalized[0] = 2.0;
    CHECK_THROWS_AS(quantum_correlator(unnormalized, fam), DimensionMismatch);
    MeasurementBasis bad(2);
    bad[0] = {CMat::Identity(2, 2), 2.0 * CMat::Identity(2, 2)};  // not unitary
    bad[1] = {CMat::Identity(2, 2), CMat::Identity(2, 2)};
    CVec ok = CVec::Zero(4);
    ok[0] = 1.0;
    CHECK_THROWS_AS(quantum_correlator(ok, bad, st), DimensionMismatch);
  }
}

TEST_CASE("bell operator expectation equals the correlator evaluation path") {
  std::mt19937_64 rng(23);
  struct Case {
    std::string family;
    Setting st;
  };
  std::vector<Case> cases = {{"CHSH-signed", Setting(2, 2, 2)},
                             {"CGLMP", Setting(2, 2, 3)},
                             {"Mermin", Setting(3, 2, 2)},
                             {"I2", Setting(2, 2, 5)}};
  for (const auto& [family, st] : cases) {
    BellInequality ineq = named_family(family, st);
    long long dim = 1;
    for (int j = 0; j < st.n; ++j) dim *= st.d;
    for (int trial = 0; trial < 5; ++trial) {
      MeasurementFamily fam = random_family(st, rng);
      MeasurementBasis basis = fam.bases();
      CMat B = bell_operator(ineq, basis);
      CHECK((B - CMat(B.adjoint())).cwiseAbs().maxCoeff() < 1e-12);

      CVec psi = random_state(dim, rng);
      double via_operator = std::real(Cplx(psi.adjoint() * (B * psi)));
      double via_correlator = evaluate_approx(ineq, quantum_correlator(psi, basis, st));
      CHECK(via_operator == doctest::Approx(via_correlator).epsilon(1e-9));
    }
  }
}

TEST_CASE("fourier moments and form satisfy the inversion identity") {
  // deterministic correlator: E_mu is the literal mu-th power of a phase
  {
    Setting st(2, 2, 3);
    auto f = make_f(st, [](const std::vector<int>& s) { return s[0] * s[1] + 2; });
    FourierMoments mom = expectation_values(deterministic_correlator(f));
    for (long long s = 0; s < st.setting_count(); ++s) {
      CHECK(std::abs(mom.at(s, 0) - Cplx(1, 0)) < 1e-12);
      Cplx e1 = mom.at(s, 1);
      CHECK(std::abs(std::abs(e1) - 1.0) < 1e-12);
      Cplx expected = std::polar(1.0, 2 * 3.14159265358979 * f.at_index(s) / 3.0);
      CHECK(std::abs(e1 - expected) < 1e-12);
      CHECK(std::abs(mom.at(s, 2) - e1 * e1) < 1e-12);
    }
  }

  // uniform correlator: all higher moments vanish (roots-of-unity sums)
  {
    Setting st(2, 2, 5);
    CorrelatorVector uniform;
    uniform.setting = st;
    uniform.entries.assign(st.reduced_dim(), Rat(1, 5));
    FourierMoments mom = expectation_values(uniform);
    for (long long s = 0; s < st.setting_count(); ++s) {
      CHECK(std::abs(mom.at(s, 0) - Cplx(1, 0)) < 1e-12);
      for (int mu = 1; mu < 5; ++mu) CHECK(std::abs(mom.at(s, mu)) < 1e-12);
    }
  }

  // signed CHSH: eta reproduces the standard +-E(s)/2 combination
  {
    Setting st(2, 2, 2);
    BellInequality chsh = named_family("CHSH-signed", st);
    FourierForm form = fourier_form(chsh);
    for (long long s = 0; s < 4; ++s) {
      double c = chsh.coeff(s, 1).get_d();
      CHECK(std::abs(form.at(s, 0) - Cplx(c / 2, 0)) < 1e-12);
      CHECK(std::abs(form.at(s, 1) - Cplx(-c / 2, 0)) < 1e-12);
    }
    // exact roundtrip on every LHV vertex
    LhvPolytope lhv(st);
    for (const FunctionOverSettings& f : lhv.vertex_functions()) {
      CorrelatorVector corr = deterministic_correlator(f);
      Cplx total = fourier_apply(form, expectation_values(corr));
      CHECK(std::abs(total - Cplx(evaluate(chsh, corr).get_d(), 0)) < 1e-12);
    }
  }

  // all-zero coefficients: eta identically zero
  {
    BellInequality zero;
    zero.setting = Setting(2, 2, 3);
    zero.coeffs.assign(zero.setting.reduced_dim(), Rat(0));
    FourierForm form = fourier_form(zero);
    for (const Cplx& e : form.eta) CHECK(std::abs(e) == 0.0);
  }

  // random exact correlators across the catalog: inversion within 1e-9
  {
    std::mt19937_64 rng(31);
    struct Case {
      std::string family;
      Setting st;
    };
    std::vector<Case> cases = {{"CGLMP", Setting(2, 2, 3)},
                               {"CHSH", Setting(2, 2, 2)},
                               {"I3", Setting(2, 2, 5)},
                               {"CGLMP-tri", Setting(3, 2, 3)},
                               {"CHSH-cdist", Setting(2, 2, 4)}};
    for (const auto& [family, st] : cases) {
      BellInequality ineq = named_family(family, st);
      FourierForm form = fourier_form(ineq);
      const int trials = family == "CGLMP" ? 100 : 20;
      for (int t = 0; t < trials; ++t) {
        CorrelatorVector corr = random_correlator(st, rng);
        Cplx total = fourier_apply(form, expectation_values(corr));
        CHECK(std::abs(total.real() - evaluate(ineq, corr).get_d()) < 1e-9);
        CHECK(std::abs(total.imag()) < 1e-9);
      }
    }
  }

  // quantum correlators roundtrip through the approximate path too
  {
    std::mt19937_64 rng(37);
    Setting st(2, 2, 3);
    BellInequality ineq = named_family("CGLMP", st);
    FourierForm form = fourier_form(ineq);
    for (int t = 0; t < 10; ++t) {
      ApproxCorrelator corr = quantum_correlator(random_state(9, rng), random_family(st, rng));
      Cplx total = fourier_apply(form, expectation_values(corr));
      CHECK(std::abs(total.real() - evaluate_approx(ineq, corr)) < 1e-9);
      CHECK(std::abs(total.imag()) < 1e-9);
    }
  }
}

TEST_CASE("the see-saw reproduces the published lower bounds") {
  struct Row {
    std::string family;
    Setting st;
    double target;
    bool daggered;  // attained by the maximally entangled state
  };
  const std::vector<Row> table = {
      {"CHSH-signed", Setting(2, 2, 2), 2.4142, true},
      {"CGLMP", Setting(2, 2, 3), 3.9149, false},
      {"I1", Setting(2, 2, 5), 6.3145, false},
      {"I2", Setting(2, 2, 5), 7.6290, false},
      {"I3", Setting(2, 2, 5), 7.0314, false},
      {"CGLMP", Setting(2, 2, 5), 7.0314, false},
      {"Cc3", Setting(2, 3, 2), 2.4142, true},
  };
  OptimizerOptions opt;
  opt.restarts = 10;
  opt.jobs = 4;
  for (const Row& row : table) {
    BellInequality ineq = named_family(row.family, row.st);
    OptimizerResult res = lower_bound_violation(ineq, opt);
    const double scale = ineq.paper_scale.get_d();
    const double published = res.value / scale;
    CAPTURE(row.family);
    CAPTURE(row.st.str());
    CHECK(std::abs(published - row.target) <= 1e-3);
    // strict quantum violation
    CHECK(published >= ineq.gamma_L.get_d() / scale + 0.3);
    CHECK(res.max_entangled == row.daggered);
    CHECK((int)res.restart_values.size() == opt.restarts);
    CHECK(res.value == res.restart_values[res.best_restart]);
    for (double v : res.restart_values) CHECK(v <= res.value + 1e-12);
    // the reported state and phases reproduce the reported value
    double replay = evaluate_approx(ineq, quantum_correlator(res.state, res.measurements));
    CHECK(replay == doctest::Approx(res.value).epsilon(1e-8));
    // Schmidt coefficients form a unit vector
    double norm2 = 0;
    for (double s : res.schmidt) norm2 += s * s;
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("the Mermin optimum is a GHZ state up to local unitaries") {
  {
    BellInequality mermin = named_family("Mermin", Setting(3, 2, 2));
    OptimizerOptions opt;
    opt.restarts = 8;
    opt.jobs = 4;
    OptimizerResult res = lower_bound_violation(mermin, opt);
    CHECK(res.value >= mermin.gamma_L.get_d() + 0.3);
    CHECK(ghz_overlap(res.state, 3, 2) >= 1.0 - 1e-6);
  }
  {
    BellInequality chsh = named_family("CHSH-signed", Setting(2, 2, 2));
    OptimizerOptions opt;
    opt.restarts = 4;
    OptimizerResult res = lower_bound_violation(chsh, opt);
    CHECK(ghz_overlap(res.state, 2, 2) >= 1.0 - 1e-6);
  }

  // calibration on states of known maximal GHZ fidelity
  {
    CVec prod = CVec::Zero(8);
    prod[0] = 1.0;
    CHECK(ghz_overlap(prod, 3, 2) == doctest::Approx(0.5).epsilon(1e-9));
    CVec w = CVec::Zero(8);
    w[1] = w[2] = w[4] = 1.0 / std::sqrt(3.0);
    CHECK(ghz_overlap(w, 3, 2) == doctest::Approx(0.75).epsilon(1e-9));
    CVec ghz = CVec::Zero(8);
    ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
    CHECK(ghz_overlap(ghz, 3, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ghz_overlap(CVec::Zero(5), 3, 2), DimensionMismatch);
  }
}

TEST_CASE("the optimizer is deterministic in its options") {
  BellInequality ineq = named_family("CGLMP", Setting(2, 2, 3));
  OptimizerOptions opt;
  opt.restarts = 6;
  opt.seed = 99;

  OptimizerResult a = lower_bound_violation(ineq, opt);
  OptimizerResult b = lower_bound_violation(ineq, opt);
  CHECK(a.value == b.value);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.restart_values == b.restart_values);

  OptimizerOptions par = opt;
  par.jobs = 4;
  OptimizerResult c = lower_bound_violation(ineq, par);
  CHECK(a.value == c.value);
  CHECK(a.restart_values == c.restart_values);

  OptimizerOptions other = opt;
  other.seed = 100;
  OptimizerResult d = lower_bound_violation(ineq, other);
  CHECK((int)d.restart_values.size() == 6);  // different draws, same quality gate
  CHECK(d.value == doctest::Approx(a.value).epsilon(1e-6));

  OptimizerOptions bad = opt;
  bad.restarts = 0;
  CHECK_THROWS_AS(lower_bound_violation(ineq, bad), std::invalid_argument);
}
