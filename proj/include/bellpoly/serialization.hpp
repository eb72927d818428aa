#pragma once

// Canonical text formats for every artifact the workbench reads or writes:
// function tables, V-/H-representations with trailing checksums, correlator
// vectors, joint distributions, inequality records, class-report CSVs, and
// optimizer reports (JSON). All numeric payloads are exact rationals except
// quantum reports, whose floating values print with 10 significant digits.
// Writers are byte-deterministic for a given value.

#include "bellpoly/correlator.hpp"
#include "bellpoly/geometry.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/nonsignaling.hpp"
#include "bellpoly/rational.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bellpoly {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ChecksumMismatch : FormatError {
  using FormatError::FormatError;
};

// FNV-1a (64-bit) of the given bytes, as 16 lowercase hex digits.
std::string checksum_hex(const std::string& data);

// Setting triple in header form: "n,c1,...,cn,d".
std::string setting_csv(const Setting& st);
Setting parse_setting_csv(const std::string& text);

// ---- function tables ----
// Line 1: "n,c1,...,cn,d". Line 2: the value table, comma-separated, in
// lexicographic setting order (s_1 most significant).
std::string write_function_table(const FunctionOverSettings& f);
FunctionOverSettings read_function_table(const std::string& text);

// ---- polytope representations ----
// V-representation:
//   vrep <dim>
//   <p/q> ... <p/q>        (one vertex per line, dim entries)
//   checksum <hex>
std::string write_vrep(const VRep& v);
VRep read_vrep(const std::string& text, bool require_checksum = true);

// H-representation (facet stream):
//   hrep <dim>
//   ineq <a_1> ... <a_dim> <g>     meaning a.x <= g
//   eq   <a_1> ... <a_dim> <g>     meaning a.x == g
//   checksum <hex>
// The stream is append-only: rows accumulate and the checksum line is the
// final write. The checksum covers every byte that precedes its line.
std::string write_hrep(const HRep& h);
HRep read_hrep(const std::string& text, bool require_checksum = true);

// Incremental writer for long facet runs: append rows as they surface,
// finish() emits the trailing checksum line.
class FacetStreamWriter {
 public:
  FacetStreamWriter(std::ostream& out, int dim);
  void append(const IntVec& row, bool equality = false);
  void finish();

 private:
  void write(const std::string& chunk);

  std::ostream& out_;
  int dim_ = 0;
  std::uint64_t hash_ = 0;
  bool finished_ = false;
};

// ---- correlator vectors ----
//   correlator <n,c...,d>
//   <p/q> ... <p/q>        (one line per setting string, d-1 entries)
//   checksum <hex>
std::string write_correlator(const CorrelatorVector& corr);
CorrelatorVector read_correlator(const std::string& text, bool require_checksum = true);

// ---- joint distributions ----
//   distribution <n,c...,d>
//   <p/q> ... <p/q>        (one line per setting string, d^n entries,
//                           outcome strings lexicographic)
//   checksum <hex>
std::string write_distribution(const JointDistribution& dist);
JointDistribution read_distribution(const std::string& text, bool require_checksum = true);

// ---- inequality records ----
// One record per inequality:
//   inequality <n,c...,d>
//   offset <p/q>
//   coeffs <p/q> ... <p/q>      (reduced coordinates, k inner)
//   gamma_L <p/q>
//   gamma_P <p/q>
//   scale <p/q>
//   origin <free text to end of line>
//   end
std::string write_inequalities(const std::vector<BellInequality>& list);
std::vector<BellInequality> read_inequalities(const std::string& text);

// ---- class reports ----
// CSV: class_id,size,canonical,gamma_L,gamma_P,facet
struct ClassReportRow {
  int class_id = 0;
  long long size = 0;
  std::string canonical_ref;  // inequality file reference (no commas)
  Rat gamma_L = 0;
  Rat gamma_P = 0;
  bool facet = false;

  bool operator==(const ClassReportRow&) const = default;
};
std::string write_class_report(const std::vector<ClassReportRow>& rows);
std::vector<ClassReportRow> read_class_report(const std::string& text);

// ---- optimizer reports ----
// JSON object; floating values carry 10 significant digits.
struct OptimizerReport {
  std::string inequality_ref;
  double value = 0;  // stored units, see-saw certified lower bound
  Rat gamma_L = 0;
  bool violation = false;
  std::vector<std::vector<std::vector<double>>> phases;  // [party][value][d]
  std::vector<double> schmidt;
  bool max_entangled = false;
  std::uint64_t seed = 0;
  int restarts = 0;
  int best_restart = -1;
  int rounds = 0;
  std::vector<double> restart_values;
};
std::string write_optimizer_report(const OptimizerReport& rep);
OptimizerReport read_optimizer_report(const std::string& text);

}  // namespace bellpoly
