#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellpoly/inequality.hpp"

#include <algorithm>
#include <functional>
#include <set>

using namespace bellpoly;

namespace {

FunctionOverSettings make_f(const Setting& st,
                            const std::function<int(const std::vector<int>&)>& g) {
  std::vector<int> t(st.setting_count());
  for (long long i = 0; i < st.setting_count(); ++i) {
    std::vector<int> s = index_to_digits(i, st.c);
    t[i] = ((g(s) % st.d) + st.d) % st.d;
  }
  return FunctionOverSettings(st, std::move(t));
}

// Exhaustive maximizer search over all d^{c^n} value tables.
std::set<std::vector<int>> brute_force_maximizers(const BellInequality& q) {
  const Setting& st = q.setting;
  std::set<std::vector<int>> best;
  std::vector<int> t(st.setting_count(), 0);
  bool done = false;
  while (!done) {
    if (vertex_value(q, FunctionOverSettings(st, t)) == q.gamma_P) best.insert(t);
    done = true;
    for (long long i = st.setting_count() - 1; i >= 0; --i) {
      if (++t[i] < st.d) {
        done = false;
        break;
      }
      t[i] = 0;
    }
  }
  return best;
}

std::set<std::vector<int>> tables_of(const std::vector<FunctionOverSettings>& fs) {
  std::set<std::vector<int>> out;
  for (const auto& f : fs) out.insert(f.table);
  return out;
}

RatVec ints(const std::vector<int>& v) { return RatVec(v.begin(), v.end()); }

bool row_in(const std::vector<IntVec>& rows, const IntVec& r) {
  return std::find(rows.begin(), rows.end(), r) != rows.end();
}

}  // namespace

TEST_CASE("CHSH pair: evaluation, bounds, and the full-form/reduced-form identity") {
  Setting st(2, 2, 2);
  BellInequality delta = named_family("CHSH", st);
  BellInequality signed_form = named_family("CHSH-signed", st);

  CHECK(delta.coeffs == ints({-1, -1, -1, 1}));
  CHECK(delta.p0_offset == 3);
  CHECK(delta.gamma_L == 3);
  CHECK(delta.gamma_P == 4);
  CHECK(signed_form.coeffs == ints({1, 1, 1, -1}));
  CHECK(signed_form.p0_offset == 0);
  CHECK(signed_form.gamma_L == 2);
  CHECK(signed_form.gamma_P == 3);

  CHECK(evaluate(delta, deterministic_correlator(make_f(st, [](auto&) { return 0; }))) == 3);
  CHECK(evaluate(delta, deterministic_correlator(make_f(st, [](auto& s) {
                   return s[0] * s[1];
                 }))) == 4);

  // zero vector: offset-free forms give 0, the delta form gives its offset
  CorrelatorVector zero;
  zero.setting = st;
  zero.entries.assign(st.reduced_dim(), Rat(0));
  CHECK(evaluate(signed_form, zero) == 0);
  CHECK(evaluate(delta, zero) == 3);

  // delta(p) + signed(p) == 3 identically: on every deterministic box and on
  // a strict mixture
  std::vector<int> t(4, 0);
  for (int m = 0; m < 16; ++m) {
    for (int i = 0; i < 4; ++i) t[i] = (m >> i) & 1;
    CorrelatorVector c = deterministic_correlator(FunctionOverSettings(st, t));
    CHECK(evaluate(delta, c) + evaluate(signed_form, c) == 3);
  }
  CorrelatorVector mix;
  mix.setting = st;
  mix.entries = {Rat(1, 3), Rat(1, 7), Rat(2, 5), Rat(1, 2)};
  CHECK(evaluate(delta, mix) + evaluate(signed_form, mix) == 3);

  CHECK_THROWS_AS(evaluate(delta, CorrelatorVector{Setting(2, 2, 3), RatVec(8, Rat(0))}),
                  SettingMismatch);
  CHECK(delta.coeff(3, 1) == 1);
  CHECK_THROWS_AS(delta.coeff(4, 1), std::out_of_range);
  CHECK_THROWS_AS(delta.coeff(0, 0), std::out_of_range);
  CHECK_THROWS_AS(delta.coeff(0, 2), std::out_of_range);
}

TEST_CASE("catalog: published bounds, algebraic maxima, and name lists") {
  struct Expect {
    const char* name;
    Setting st;
    int gl, gp;  // stored units
    int scale;
  };
  const std::vector<Expect> table = {
      {"CHSH", {2, 2, 2}, 3, 4, 1},        {"CHSH-signed", {2, 2, 2}, 2, 3, 1},
      {"CGLMP", {2, 2, 2}, 2, 3, 1},       {"CGLMP", {2, 2, 3}, 3, 5, 1},
      {"CGLMP", {2, 2, 4}, 4, 7, 1},       {"CGLMP", {2, 2, 5}, 5, 9, 1},
      {"CGLMP-tri", {3, 2, 2}, 2, 3, 1},   {"CGLMP-tri", {3, 2, 3}, 3, 5, 1},
      {"CGLMP-tri2", {3, 2, 2}, 2, 3, 1},  {"CGLMP-tri2", {3, 2, 3}, 3, 5, 1},
      {"Mermin", {3, 2, 2}, 2, 3, 1},      {"Svetlichny", {3, 2, 2}, 6, 8, 1},
      {"Cc3", {2, 3, 2}, 2, 3, 1},         {"I1", {2, 2, 5}, 10, 16, 2},
      {"I2", {2, 2, 5}, 5, 11, 1},         {"I3", {2, 2, 5}, 5, 9, 1},
      {"B1", {2, 4, 2}, 8, 15, 1},         {"B6", {2, 4, 2}, 4, 8, 1},
      {"Cc4-1", {2, 4, 2}, 2, 3, 1},       {"CHSH-mod2", {2, 2, 4}, 2, 3, 1},
      {"CHSH-cdist", {2, 2, 4}, 4, 6, 1},
  };
  for (const Expect& e : table) {
    CAPTURE(e.name);
    BellInequality q = named_family(e.name, e.st);
    CHECK(q.gamma_L == e.gl);
    CHECK(q.gamma_P == e.gp);
    CHECK(q.paper_scale == e.scale);
    CHECK(q.origin == e.name);
  }

  // every listed family constructs, validates, and is violated by some box
  for (Setting st : {Setting(2, 2, 2), Setting(2, 2, 3), Setting(2, 2, 4), Setting(2, 2, 5),
                     Setting(3, 2, 2), Setting(3, 2, 3), Setting(2, 3, 2), Setting(2, 4, 2)}) {
    for (const std::string& name : family_names(st)) {
      CAPTURE(name);
      BellInequality q = named_family(name, st);
      CHECK_NOTHROW(q.validate());
      CHECK(q.gamma_L < q.gamma_P);
      auto maxers = max_violating_vertices(q);
      CHECK(!maxers.empty());
      for (const auto& f : maxers) CHECK(vertex_value(q, f) == q.gamma_P);
    }
  }

  CHECK(family_names(Setting(2, 2, 2)) ==
        std::vector<std::string>{"CHSH", "CHSH-signed", "CGLMP"});
  CHECK(family_names(Setting(2, 2, 3)) == std::vector<std::string>{"CGLMP"});
  CHECK(family_names(Setting(2, 2, 4)) ==
        std::vector<std::string>{"CGLMP", "CHSH-mod2", "CHSH-cdist"});
  CHECK(family_names(Setting(2, 2, 5)) == std::vector<std::string>{"CGLMP", "I1", "I2", "I3"});
  CHECK(family_names(Setting(3, 2, 2)) ==
        std::vector<std::string>{"CGLMP-tri", "CGLMP-tri2", "Mermin", "Svetlichny"});
  CHECK(family_names(Setting(3, 2, 3)) == std::vector<std::string>{"CGLMP-tri", "CGLMP-tri2"});
  CHECK(family_names(Setting(2, 3, 2)) == std::vector<std::string>{"Cc3"});
  CHECK(family_names(Setting(2, 4, 2)).size() == 14);
  CHECK(family_names(Setting(4, 2, 2)).empty());

  CHECK_THROWS_AS(named_family("CHSH", Setting(2, 2, 3)), UnknownFamily);
  CHECK_THROWS_AS(named_family("no-such-family", Setting(2, 2, 2)), UnknownFamily);
  CHECK_THROWS_AS(named_family("I1", Setting(2, 2, 3)), UnknownFamily);
}

TEST_CASE("catalog: exact coefficient vectors") {
  CHECK(named_family("CGLMP", Setting(2, 2, 2)).coeffs ==
        named_family("CHSH-signed", Setting(2, 2, 2)).coeffs);
  CHECK(named_family("CGLMP", Setting(2, 2, 3)).coeffs ==
        ints({2, 1, 1, -1, 1, -1, -1, 1}));
  CHECK(named_family("CGLMP", Setting(2, 2, 4)).coeffs ==
        ints({3, 2, 1, 1, -2, -1, 1, -2, -1, -1, 2, 1}));
  CHECK(named_family("CGLMP", Setting(2, 2, 5)).coeffs ==
        ints({4, 3, 2, 1, 1, -3, -2, -1, 1, -3, -2, -1, -1, 3, 2, 1}));

  CHECK(named_family("CGLMP-tri", Setting(3, 2, 2)).coeffs == ints({1, 0, 1, 0, 1, 0, -1, 0}));
  CHECK(named_family("CGLMP-tri", Setting(3, 2, 3)).coeffs ==
        ints({2, 1, 0, 0, 1, -1, 0, 0, 1, -1, 0, 0, -1, 1, 0, 0}));
  CHECK(named_family("CGLMP-tri2", Setting(3, 2, 2)).coeffs ==
        named_family("Mermin", Setting(3, 2, 2)).coeffs);
  CHECK(named_family("CGLMP-tri2", Setting(3, 2, 3)).coeffs ==
        ints({2, 1, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, -1, 1}));

  CHECK(named_family("Svetlichny", Setting(3, 2, 2)).coeffs ==
        ints({-1, -1, -1, 1, -1, 1, 1, 1}));
  CHECK(named_family("Svetlichny", Setting(3, 2, 2)).p0_offset == 4);
  CHECK(named_family("Cc3", Setting(2, 3, 2)).coeffs == ints({1, 1, 0, 1, -1, 0, 0, 0, 0}));

  BellInequality i1 = named_family("I1", Setting(2, 2, 5));
  CHECK(i1.coeffs == ints({6, 2, 3, 4, 4, -2, 2, 1, 4, -2, 2, 1, -4, 2, -2, -1}));
  CHECK(i1.p0_offset == 0);

  // circular-distance weights = mod-2 grouping + 2 (-1)^{s1 s2} p(2|s)
  BellInequality mod2 = named_family("CHSH-mod2", Setting(2, 2, 4));
  BellInequality cdist = named_family("CHSH-cdist", Setting(2, 2, 4));
  CHECK(mod2.coeffs == ints({1, 0, 1, 1, 0, 1, 1, 0, 1, -1, 0, -1}));
  CHECK(cdist.coeffs == ints({1, 2, 1, 1, 2, 1, 1, 2, 1, -1, -2, -1}));
  for (int sidx = 0; sidx < 4; ++sidx) {
    int sign = (sidx == 3) ? -1 : 1;
    CHECK(cdist.coeff(sidx, 2) - mod2.coeff(sidx, 2) == 2 * sign);
    CHECK(cdist.coeff(sidx, 1) == mod2.coeff(sidx, 1));
    CHECK(cdist.coeff(sidx, 3) == mod2.coeff(sidx, 3));
  }
}

TEST_CASE("maximally violating boxes: named maximizers and brute-force oracle") {
  Setting s222(2, 2, 2), s322(3, 2, 2), s223(2, 2, 3), s225(2, 2, 5), s224(2, 2, 4);

  // unique maximizers straight from the text
  auto check_unique = [&](const BellInequality& q, const FunctionOverSettings& f) {
    auto m = max_violating_vertices(q);
    REQUIRE(m.size() == 1);
    CHECK(m[0].table == f.table);
    CHECK(vertex_value(q, f) == q.gamma_P);
  };
  check_unique(named_family("CHSH", s222), make_f(s222, [](auto& s) { return s[0] * s[1]; }));
  check_unique(named_family("CHSH-signed", s222),
               make_f(s222, [](auto& s) { return s[0] * s[1] + 1; }));
  check_unique(named_family("CGLMP", s223),
               make_f(s223, [](auto& s) { return s[0] * s[1] + 1; }));
  check_unique(named_family("CGLMP", s225),
               make_f(s225, [](auto& s) { return s[0] * s[1] + 1; }));
  check_unique(named_family("I1", s225), make_f(s225, [](auto& s) { return s[0] * s[1] + 1; }));
  check_unique(named_family("I2", s225),
               make_f(s225, [](auto& s) { return 2 * s[0] * s[1] + 1; }));
  check_unique(named_family("I3", s225),
               make_f(s225, [](auto& s) { return 2 * s[0] * s[1] + 1; }));
  check_unique(named_family("CHSH-cdist", s224),
               make_f(s224, [](auto& s) { return 2 * s[0] * s[1] + 2; }));

  // the mod-2 grouping leaves k and k+2 tied at every setting: 2^4 maximizers
  CHECK(max_violating_vertices(named_family("CHSH-mod2", s224)).size() == 16);

  // Mermin: the text names s1 s2 s3 + 1 and s1 s3 + 1; the full maximizer set
  // over the deterministic boxes has 16 elements (free choice on the four
  // s1 != s2 settings), none of them n-partite linear
  BellInequality mermin = named_family("Mermin", s322);
  auto mm = max_violating_vertices(mermin);
  CHECK(mm.size() == 16);
  auto mm_tables = tables_of(mm);
  CHECK(mm_tables.count(
      make_f(s322, [](auto& s) { return s[0] * s[1] * s[2] + 1; }).table) == 1);
  CHECK(mm_tables.count(make_f(s322, [](auto& s) { return s[0] * s[2] + 1; }).table) == 1);
  for (const auto& f : mm) CHECK(!is_n_partite_linear(f));
  CHECK_THROWS_AS(max_violating_vertices(mermin, 8), SearchSpaceTooLarge);

  // oracle: argmax-product equals exhaustive search
  for (const char* name : {"CHSH", "CHSH-signed"})
    CHECK(tables_of(max_violating_vertices(named_family(name, s222))) ==
          brute_force_maximizers(named_family(name, s222)));
  CHECK(tables_of(max_violating_vertices(named_family("CGLMP", s223))) ==
        brute_force_maximizers(named_family("CGLMP", s223)));
  for (const char* name : {"Mermin", "Svetlichny", "CGLMP-tri", "CGLMP-tri2"})
    CHECK(tables_of(max_violating_vertices(named_family(name, s322))) ==
          brute_force_maximizers(named_family(name, s322)));
  CHECK(tables_of(max_violating_vertices(named_family("B1", Setting(2, 4, 2)))) ==
        brute_force_maximizers(named_family("B1", Setting(2, 4, 2))));
}

TEST_CASE("generator: non-trivial inequalities from non-linear functions") {
  Setting s222(2, 2, 2), s322(3, 2, 2), s223(2, 2, 3);

  BellInequality chsh_like = nontrivial_from_function(
      make_f(s222, [](auto& s) { return s[0] * s[1]; }), InputWeights::uniform(s222));
  CHECK(chsh_like.gamma_L == Rat(3, 4));
  CHECK(chsh_like.gamma_P == 1);
  CHECK(chsh_like.p0_offset == Rat(3, 4));
  CHECK(chsh_like.coeffs == RatVec{Rat(-1, 4), Rat(-1, 4), Rat(-1, 4), Rat(1, 4)});
  CHECK(chsh_like.origin == "generated");

  BellInequality svet_like = nontrivial_from_function(
      make_f(s322, [](auto& s) { return s[0] * (s[1] + s[2]) + s[1] * s[2]; }),
      InputWeights::uniform(s322));
  CHECK(svet_like.gamma_L == Rat(3, 4));  // the printed 6 out of 8 inputs
  CHECK(svet_like.gamma_P == 1);

  // the generating function itself always achieves gamma_P
  CHECK(vertex_value(svet_like,
                     make_f(s322, [](auto& s) { return s[0] * (s[1] + s[2]) + s[1] * s[2]; })) ==
        1);

  CHECK_THROWS_AS(nontrivial_from_function(make_f(s222, [](auto& s) { return s[0] + s[1]; }),
                                           InputWeights::uniform(s222)),
                  LinearFunctionInput);
  CHECK_THROWS_AS(nontrivial_from_function(make_f(s223, [](auto& s) { return s[0] * s[1]; }),
                                           InputWeights::uniform(s222)),
                  SettingMismatch);

  InputWeights bad;
  bad.setting = s222;
  bad.w = {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(-1, 2)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.w = {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // exhaustively at (2,2,3): 54 of the 81 functions are non-linear, and each
  // gives a strictly non-trivial inequality under uniform weights
  int nonlinear = 0;
  std::vector<int> t(4, 0);
  bool done = false;
  while (!done) {
    FunctionOverSettings f(s223, t);
    if (is_n_partite_linear(f)) {
      CHECK_THROWS_AS(nontrivial_from_function(f, InputWeights::uniform(s223)),
                      LinearFunctionInput);
    } else {
      ++nonlinear;
      BellInequality q = nontrivial_from_function(f, InputWeights::uniform(s223));
      CHECK(q.gamma_L < 1);
      CHECK(q.gamma_L > 0);
      CHECK(q.gamma_P == 1);
    }
    done = true;
    for (int i = 3; i >= 0; --i) {
      if (++t[i] < 3) {
        done = false;
        break;
      }
      t[i] = 0;
    }
  }
  CHECK(nonlinear == 54);

  // non-uniform strictly positive weights keep the guarantee
  InputWeights w;
  w.setting = s322;
  w.w.assign(8, Rat(1, 16));
  w.w[0] = Rat(5, 16);
  w.w[7] = Rat(5, 16);
  BellInequality q = nontrivial_from_function(
      make_f(s322, [](auto& s) { return s[0] * s[1] + s[2]; }), w);
  CHECK(q.gamma_L < 1);
  CHECK(q.gamma_P == 1);
}

TEST_CASE("facet status of the named families") {
  LhvPolytope p222(Setting(2, 2, 2)), p223(Setting(2, 2, 3)), p322(Setting(3, 2, 2));

  // canonical rows of facet families appear verbatim in the facet lists
  const HRep& h222 = p222.facets();
  CHECK(row_in(h222.ineq, canonical_row(named_family("CHSH", Setting(2, 2, 2)))));
  CHECK(row_in(h222.ineq, canonical_row(named_family("CHSH-signed", Setting(2, 2, 2)))));
  const HRep& h223 = p223.facets();
  CHECK(row_in(h223.ineq, canonical_row(named_family("CGLMP", Setting(2, 2, 3)))));
  const HRep& h322 = p322.facets();
  CHECK(row_in(h322.ineq, canonical_row(named_family("Mermin", Setting(3, 2, 2)))));
  CHECK(!row_in(h322.ineq, canonical_row(named_family("Svetlichny", Setting(3, 2, 2)))));

  // rank-based facet certification against the vertex sets
  auto facet = [](const LhvPolytope& p, const char* name) {
    return is_facet_defining(p.vertices(), canonical_row(named_family(name, p.setting())));
  };
  CHECK(facet(p222, "CHSH"));
  CHECK(facet(p222, "CHSH-signed"));
  CHECK(facet(p223, "CGLMP"));
  CHECK(facet(p322, "Mermin"));
  CHECK(facet(p322, "CGLMP-tri"));
  CHECK(facet(p322, "CGLMP-tri2"));
  CHECK(!facet(p322, "Svetlichny"));

  LhvPolytope p323(Setting(3, 2, 3));
  CHECK(facet(p323, "CGLMP-tri"));
  CHECK(facet(p323, "CGLMP-tri2"));

  LhvPolytope p232(Setting(2, 3, 2));
  CHECK(facet(p232, "Cc3"));

  LhvPolytope p225(Setting(2, 2, 5));
  for (const char* name : {"CGLMP", "I1", "I2", "I3"}) {
    CAPTURE(name);
    CHECK(facet(p225, name));
  }

  LhvPolytope p242(Setting(2, 4, 2));
  for (const std::string& name : family_names(Setting(2, 4, 2))) {
    CAPTURE(name);
    CHECK(is_facet_defining(p242.vertices(), canonical_row(named_family(name, p242.setting()))));
  }

  LhvPolytope p224(Setting(2, 2, 4));
  for (const char* name : {"CGLMP", "CHSH-mod2", "CHSH-cdist"}) {
    CAPTURE(name);
    CHECK(facet(p224, name));
  }
}

TEST_CASE("canonical rows and row round-trips") {
  Setting st(2, 2, 2);
  BellInequality signed_form = named_family("CHSH-signed", st);
  IntVec row = canonical_row(signed_form);
  REQUIRE(row.size() == 5);
  CHECK(row == IntVec({1, 1, 1, -1, 2}));

  BellInequality back = inequality_from_row(st, row, "file");
  CHECK(back.coeffs == signed_form.coeffs);
  CHECK(back.gamma_L == 2);
  CHECK(back.gamma_P == 3);
  CHECK(back.origin == "file");

  // the delta form's canonical row subtracts the absorbed offset from the rhs
  CHECK(canonical_row(named_family("CHSH", st)) == IntVec({-1, -1, -1, 1, 0}));

  // fractional coefficients scale to a coprime integer row
  BellInequality gen = nontrivial_from_function(
      make_f(st, [](auto& s) { return s[0] * s[1]; }), InputWeights::uniform(st));
  CHECK(canonical_row(gen) == IntVec({-1, -1, -1, 1, 0}));

  CHECK_THROWS_AS(inequality_from_row(st, IntVec({1, 1, 1, -1}), "file"),
                  std::invalid_argument);
}
