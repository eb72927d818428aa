#pragma once

// Quantum correlators from pure states and Fourier-type projective
// measurements, the Bell operator, the discrete-Fourier form of an
// inequality, and the see-saw lower-bound optimizer.

#include "bellpoly/correlator.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/modfunc.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace bellpoly {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Measurement bases: one unitary per party and setting value, whose columns
// are the outcome vectors (outcome m is the projector onto column m).
using MeasurementBasis = std::vector<std::vector<CMat>>;  // [party][setting value]

// Phase-parametrized family: for party j at setting value a, the basis
// unitary is D(phi) * F, where F is the d-dimensional discrete Fourier
// unitary and D(phi) = diag(e^{i phi_0}, ..., e^{i phi_{d-1}}). Gauge:
// phi_0 = 0 everywhere (a global phase per outcome vector is unobservable
// only for the D-after-F order's columns; the leading phase is the flat
// direction we pin).
struct MeasurementFamily {
  Setting setting;
  std::vector<std::vector<std::vector<double>>> phases;  // [party][value][d]

  // all phases zero: the plain Fourier basis at every setting
  static MeasurementFamily zero(const Setting& st);

  void validate() const;
  CMat unitary(int party, int setting_value) const;  // D(phi) * F
  MeasurementBasis bases() const;
};

// Floating-point correlator in the reduced layout (k = 1..d-1 per setting
// block, settings lexicographic with s_1 most significant).
struct ApproxCorrelator {
  Setting setting;
  std::vector<double> entries;
};

// p(k|s) = sum over outcome strings m with digit-sum k of
// |<m| U(1,s_1)^+ x ... x U(n,s_n)^+ |state>|^2, reduced to k >= 1.
ApproxCorrelator quantum_correlator(const CVec& state, const MeasurementBasis& basis,
                                    const Setting& st);
ApproxCorrelator quantum_correlator(const CVec& state, const MeasurementFamily& meas);

// dot(coeffs, entries) + p0_offset, all in doubles (stored units)
double evaluate_approx(const BellInequality& ineq, const ApproxCorrelator& corr);

// offset * I + sum_{s, k>=1} omega_{k,s} Pi_k(s), where Pi_k(s) projects
// onto the span of the outcome strings with digit-sum k under settings s.
// Hermitian d^n x d^n; its expectation in any state equals
// evaluate_approx(ineq, quantum_correlator(state, basis)).
CMat bell_operator(const BellInequality& ineq, const MeasurementBasis& basis);

// Fourier moments E_mu(s) = sum_k e^{2 pi i mu k / d} p(k|s) for
// mu = 0..d-1 — the expectation of the mu-th power of the outcome-phase
// observable. For a deterministic correlator this equals the literal mu-th
// power of E_1(s); E_0 is always 1.
struct FourierMoments {
  Setting setting;
  std::vector<Cplx> moments;  // setting blocks of d entries, mu = 0..d-1

  const Cplx& at(long long setting_index, int mu) const;
};

FourierMoments expectation_values(const CorrelatorVector& corr);
FourierMoments expectation_values(const ApproxCorrelator& corr);

// eta_{mu,s} = (1/d) sum_{k=0}^{d-1} omega_{k,s} e^{-2 pi i mu k / d}, the
// full-range inverse DFT of the reduced coefficients (omega_{0,s} = 0).
struct FourierForm {
  Setting setting;
  std::vector<Cplx> eta;  // same layout as FourierMoments
  double offset = 0;      // the inequality's p0_offset

  const Cplx& at(long long setting_index, int mu) const;
};

FourierForm fourier_form(const BellInequality& ineq);

// offset + sum_{s,mu} eta_{mu,s} E_mu(s); its real part reproduces
// evaluate(ineq, corr) exactly (DFT inversion), imaginary part ~ 0.
Cplx fourier_apply(const FourierForm& form, const FourierMoments& moments);

struct OptimizerOptions {
  int restarts = 50;
  std::uint64_t seed = 20240915;
  int jobs = 1;
  int max_rounds = 200;   // see-saw rounds per restart
  double tol = 1e-8;      // see-saw convergence threshold on the value
};

struct OptimizerResult {
  double value = 0;                  // certified lower bound, stored units
  CVec state;                        // optimizing pure state, dimension d^n
  MeasurementFamily measurements;    // optimizing phases
  std::vector<double> schmidt;       // singular values across party 1 | rest
  bool max_entangled = false;        // all schmidt within 1e-6 of 1/sqrt(d)
  int best_restart = -1;
  int rounds = 0;                    // see-saw rounds used by the winner
  std::vector<double> restart_values;
};

// See-saw: start from the maximally entangled state (n = 2) or the
// n-party GHZ state, alternate closed-form per-phase coordinate descent
// with a top-eigenvector state update until the value moves less than tol
// (or max_rounds). Restart 0 starts at zero phases; later restarts draw
// uniform phases from a per-restart generator seeded deterministically from
// the master seed. Ties across restarts resolve to the lowest index.
OptimizerResult lower_bound_violation(const BellInequality& ineq,
                                      const OptimizerOptions& opt = {});

// Largest overlap |<GHZ_{n,d}| u_1 x ... x u_n |state>|^2 over local
// unitaries, by alternating closed-form (SVD) single-party updates from
// several deterministic starts.
double ghz_overlap(const CVec& state, int n, int d);

}  // namespace bellpoly
