// Python bindings for the exact Bell-polytope workbench: scenario settings,
// functions over settings, the LHV polytope (vertices, facets, symmetry
// classes), the inequality catalog, non-signaling uniqueness, the see-saw
// quantum optimizer, and input pre-processing.
//
// Exact rationals cross the boundary as fractions.Fraction; facet rows and
// coefficient vectors as Python ints / Fractions, so nothing is rounded.

#include "bellpoly/correlator.hpp"
#include "bellpoly/geometry.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/modfunc.hpp"
#include "bellpoly/nonsignaling.hpp"
#include "bellpoly/preproc.hpp"
#include "bellpoly/quantum.hpp"
#include "bellpoly/symmetry.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace bellpoly;

namespace {

py::object fraction_type() {
  static py::object type = py::module_::import("fractions").attr("Fraction");
  return type;
}

py::object to_frac(const Rat& r) { return fraction_type()(r.get_str()); }

py::list to_frac_list(const RatVec& v) {
  py::list out;
  for (const Rat& r : v) out.append(to_frac(r));
  return out;
}

Rat from_frac(const py::handle& obj) {
  // Fraction, int, or "p/q" string all parse through str().
  std::string text = py::str(obj);
  Rat r(text);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

RatVec from_frac_list(const py::sequence& seq) {
  RatVec out;
  out.reserve(py::len(seq));
  for (const py::handle& h : seq) out.push_back(from_frac(h));
  return out;
}

py::list to_int_row(const IntVec& row) {
  py::list out;
  for (const Int& x : row) out.append(py::int_(py::str(x.get_str())));
  return out;
}

CorrelatorVector corr_from(const Setting& st, const py::sequence& entries) {
  CorrelatorVector corr(st, from_frac_list(entries));
  corr.validate();
  return corr;
}

py::dict membership_dict(const MembershipResult& r) {
  py::dict out;
  out["inside"] = r.inside;
  if (r.inside)
    out["weights"] = to_frac_list(r.weights);
  else
    out["separator"] = to_int_row(r.separator);
  return out;
}

}  // namespace

PYBIND11_MODULE(_bellpoly, m) {
  m.doc() = "exact-arithmetic workbench for correlator Bell polytopes";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<SearchSpaceTooLarge>(m, "SearchSpaceTooLarge", PyExc_RuntimeError);
  py::register_exception<UnknownFamily>(m, "UnknownFamily", PyExc_ValueError);
  py::register_exception<LinearFunctionInput>(m, "LinearFunctionInput", PyExc_ValueError);

  py::class_<Setting>(m, "Setting",
                      "scenario (n parties, settings per party, d outcomes)")
      .def(py::init<int, int, int>(), py::arg("n"), py::arg("c"), py::arg("d"))
      .def(py::init<std::vector<int>, int>(), py::arg("c"), py::arg("d"))
      .def_readonly("n", &Setting::n)
      .def_readonly("c", &Setting::c)
      .def_readonly("d", &Setting::d)
      .def("setting_count", &Setting::setting_count)
      .def("reduced_dim", &Setting::reduced_dim)
      .def("linear_function_count", &Setting::linear_function_count)
      .def("__str__", &Setting::str)
      .def("__repr__", [](const Setting& st) { return "Setting" + st.str(); })
      .def("__eq__", [](const Setting& a, const Setting& b) { return a == b; });

  py::class_<FunctionOverSettings>(m, "Function",
                                   "total function from setting strings to Z_d")
      .def(py::init<Setting, std::vector<int>>(), py::arg("setting"), py::arg("table"))
      .def_readonly("setting", &FunctionOverSettings::setting)
      .def_readonly("table", &FunctionOverSettings::table)
      .def("__call__",
           [](const FunctionOverSettings& f, const std::vector<int>& s) { return f(s); })
      .def("is_linear", [](const FunctionOverSettings& f) { return is_n_partite_linear(f); })
      .def("is_bipartite_linear",
           [](const FunctionOverSettings& f) { return is_bipartite_linear(f); })
      .def("__str__", &FunctionOverSettings::str)
      .def("__eq__", [](const FunctionOverSettings& a, const FunctionOverSettings& b) {
        return a == b;
      });

  m.def("enumerate_linear", &enumerate_n_partite_linear, py::arg("setting"),
        "all n-partite linear functions (the deterministic LHV strategies)");

  m.def(
      "deterministic_correlator",
      [](const FunctionOverSettings& f) {
        return to_frac_list(deterministic_correlator(f).entries);
      },
      py::arg("f"), "reduced correlator vector p(k|s) of a deterministic strategy");

  py::class_<LhvPolytope>(m, "LhvPolytope",
                          "convex hull of the deterministic LHV correlators")
      .def(py::init<Setting>(), py::arg("setting"))
      .def_property_readonly("setting", &LhvPolytope::setting)
      .def("vertex_count",
           [](const LhvPolytope& p) { return p.vertices().vertices.size(); })
      .def("vertices",
           [](const LhvPolytope& p) {
             py::list out;
             for (const RatVec& v : p.vertices().vertices) out.append(to_frac_list(v));
             return out;
           })
      .def("vertex_functions", &LhvPolytope::vertex_functions)
      .def(
          "facets",
          [](const LhvPolytope& p, int jobs) {
            DdOptions opt;
            opt.jobs = jobs;
            py::list out;
            for (const IntVec& row : p.facets(opt).ineq) out.append(to_int_row(row));
            return out;
          },
          py::arg("jobs") = 1,
          "facet rows (a_1, ..., a_dim, g) meaning a . p <= g; enumeration runs "
          "once and is cached on the object")
      .def(
          "membership",
          [](const LhvPolytope& p, const py::sequence& entries) {
            return membership_dict(lhv_membership(corr_from(p.setting(), entries), p));
          },
          py::arg("correlator"),
          "exact membership test; returns convex weights inside, a separating "
          "inequality outside");

  m.def(
      "classify_facets",
      [](const LhvPolytope& p, int jobs) {
        DdOptions opt;
        opt.jobs = jobs;
        const HRep& h = p.facets(opt);
        py::list out;
        for (const SymmetryClass& cl : orbit_partition_rows(p.setting(), h.ineq, jobs)) {
          BellInequality q = inequality_from_row(p.setting(), cl.canonical, "class");
          py::dict row;
          row["size"] = cl.orbit_size;
          row["canonical"] = to_int_row(cl.canonical);
          row["gamma_L"] = to_frac(q.gamma_L);
          row["gamma_P"] = to_frac(q.gamma_P);
          row["trivial"] = q.gamma_L == q.gamma_P;
          out.append(row);
        }
        return out;
      },
      py::arg("polytope"), py::arg("jobs") = 1,
      "partition the facet list into symmetry classes (party permutations, "
      "setting relabelings, outcome shifts)");

  py::class_<BellInequality>(m, "Inequality",
                             "omega . p + offset <= gamma_L on the reduced correlators")
      .def_readonly("setting", &BellInequality::setting)
      .def_readonly("origin", &BellInequality::origin)
      .def_property_readonly("coeffs",
                             [](const BellInequality& q) { return to_frac_list(q.coeffs); })
      .def_property_readonly("offset",
                             [](const BellInequality& q) { return to_frac(q.p0_offset); })
      .def_property_readonly("gamma_L",
                             [](const BellInequality& q) { return to_frac(q.gamma_L); })
      .def_property_readonly("gamma_P",
                             [](const BellInequality& q) { return to_frac(q.gamma_P); })
      .def_property_readonly("scale",
                             [](const BellInequality& q) { return to_frac(q.paper_scale); })
      .def("evaluate",
           [](const BellInequality& q, const py::sequence& entries) {
             return to_frac(evaluate(q, corr_from(q.setting, entries)));
           })
      .def("vertex_value", [](const BellInequality& q, const FunctionOverSettings& f) {
        return to_frac(vertex_value(q, f));
      });

  m.def("named_family", &named_family, py::arg("name"), py::arg("setting"),
        "catalog inequality by family name (CHSH, CGLMP, Mermin, Svetlichny, ...)");
  m.def("family_names", &family_names, py::arg("setting"),
        "catalog family names available at the setting");
  m.def(
      "nontrivial_from_function",
      [](const FunctionOverSettings& f) {
        return nontrivial_from_function(f, InputWeights::uniform(f.setting));
      },
      py::arg("f"),
      "uniform-weight indicator inequality of a non-linear function (gamma_L < 1)");
  m.def("max_violating_vertices", &max_violating_vertices, py::arg("inequality"),
        py::arg("limit") = 1000000,
        "all deterministic strategies attaining the algebraic maximum");
  m.def(
      "is_facet",
      [](const LhvPolytope& p, const BellInequality& q) {
        return is_facet_defining(p.vertices(), canonical_row(q));
      },
      py::arg("polytope"), py::arg("inequality"),
      "whether the inequality supports a facet of the LHV polytope");

  m.def(
      "unique_ns_extension",
      [](const FunctionOverSettings& f, int jobs) {
        NsUniquenessResult r = unique_ns_for_vertex(f, jobs);
        py::dict out;
        out["unique"] = r.unique;
        out["prime_scope"] = r.prime_scope;
        out["extreme"] = r.unique ? is_ns_vertex(r.witness) : false;
        return out;
      },
      py::arg("f"), py::arg("jobs") = 1,
      "whether the generalized PR box of f is the only no-signaling extension "
      "of its correlator");
  m.def(
      "pr_box",
      [](const FunctionOverSettings& f) { return to_frac_list(gen_pr_box(f).entries); },
      py::arg("f"),
      "the d^(1-n)-uniform no-signaling box whose outcome sum realizes f");

  m.def(
      "see_saw",
      [](const BellInequality& q, int restarts, std::uint64_t seed, int jobs) {
        OptimizerOptions opt;
        opt.restarts = restarts;
        opt.seed = seed;
        opt.jobs = jobs;
        OptimizerResult r = lower_bound_violation(q, opt);
        py::dict out;
        out["value"] = r.value;
        out["published_value"] = r.value / q.paper_scale.get_d();
        out["max_entangled"] = r.max_entangled;
        out["schmidt"] = r.schmidt;
        out["best_restart"] = r.best_restart;
        out["rounds"] = r.rounds;
        return out;
      },
      py::arg("inequality"), py::arg("restarts") = 50, py::arg("seed") = 20240915,
      py::arg("jobs") = 1,
      "see-saw lower bound on the quantum value; published_value divides out "
      "the catalog scale");

  m.def(
      "boosted_functions",
      [](int n, int x_len, int d, int modulus, long long budget) {
        BoostedFunctionSet bs = achievable_boosted_functions(n, x_len, d, modulus, budget);
        py::dict out;
        out["complete"] = bs.complete;
        out["tables"] = bs.tables;
        out["expanded_count"] = bs.expanded_count();
        return out;
      },
      py::arg("n"), py::arg("x_len"), py::arg("d"), py::arg("modulus"),
      py::arg("budget") = 100000000LL,
      "canonical outcome tables reachable with linear mod-q input wirings");
  m.def("is_boosted_achievable", &is_boosted_achievable, py::arg("f"), py::arg("n_max"),
        py::arg("budget") = 100000000LL);
  m.def(
      "boosted_bell_bound",
      [](const FunctionOverSettings& f, int n, long long budget) {
        return to_frac(boosted_bell_bound(f, n, InputWeights::uniform(f.setting), budget));
      },
      py::arg("f"), py::arg("n"), py::arg("budget") = 100000000LL,
      "best uniform-weight success probability over boosted strategies");
}
