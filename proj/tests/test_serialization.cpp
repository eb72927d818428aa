#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bellpoly/correlator.hpp"
#include "bellpoly/inequality.hpp"
#include "bellpoly/nonsignaling.hpp"
#include "bellpoly/serialization.hpp"

#include "json.hpp"

#include <sstream>

using namespace bellpoly;

namespace {

FunctionOverSettings make_f(const Setting& st, std::vector<int> table) {
  FunctionOverSettings f;
  f.setting = st;
  f.table = std::move(table);
  return f;
}

}  // namespace

TEST_CASE("setting headers and function tables round-trip") {
  Setting st(2, 2, 3);
  CHECK(setting_csv(st) == "2,2,2,3");
  CHECK(parse_setting_csv("2,2,2,3") == st);

  Setting mixed({2, 3}, 2);
  CHECK(setting_csv(mixed) == "2,2,3,2");
  CHECK(parse_setting_csv("2,2,3,2") == mixed);

  CHECK_THROWS_AS(parse_setting_csv("2,2"), FormatError);
  CHECK_THROWS_AS(parse_setting_csv("3,2,2,2"), FormatError);  // three parties, two alphabets
  CHECK_THROWS_AS(parse_setting_csv("2,2,x,3"), FormatError);
  CHECK_THROWS_AS(parse_setting_csv("2,2,2,1"), FormatError);  // d < 2 invalid

  FunctionOverSettings f = make_f(st, {0, 1, 2, 1});
  std::string text = write_function_table(f);
  CHECK(text == "2,2,2,3\n0,1,2,1\n");
  FunctionOverSettings back = read_function_table(text);
  CHECK(back.setting == f.setting);
  CHECK(back.table == f.table);

  CHECK_THROWS_AS(read_function_table("2,2,2,3\n0,1,2\n"), FormatError);   // short table
  CHECK_THROWS_AS(read_function_table("2,2,2,3\n0,1,2,3\n"), FormatError); // value >= d
  CHECK_THROWS_AS(read_function_table("2,2,2,3\n"), FormatError);
  CHECK_THROWS_AS(read_function_table("2,2,2,3\n0,1,2,1\nextra\n"), FormatError);
}

TEST_CASE("vertex streams round-trip with checksums") {
  LhvPolytope poly{Setting(2, 2, 2)};
  VRep v = poly.vertices();
  std::string text = write_vrep(v);
  VRep back = read_vrep(text);
  CHECK(back.dim == v.dim);
  REQUIRE(back.vertices.size() == v.vertices.size());
  for (std::size_t i = 0; i < v.vertices.size(); ++i) CHECK(back.vertices[i] == v.vertices[i]);

  // Deterministic bytes, verified trailing checksum.
  CHECK(write_vrep(v) == text);
  std::string last = text.substr(text.rfind("checksum"));
  CHECK(last.size() == std::string("checksum ").size() + 16 + 1);

  // Any corruption flips the checksum.
  std::string corrupted = text;
  std::size_t digit = corrupted.find("1/1") != std::string::npos ? corrupted.find("1/1")
                                                                 : corrupted.find("1");
  corrupted[digit] = '0';
  CHECK_THROWS_AS(read_vrep(corrupted), ChecksumMismatch);

  // A stream missing its trailer is rejected unless explicitly allowed.
  std::string headless = text.substr(0, text.rfind("checksum"));
  CHECK_THROWS_AS(read_vrep(headless), ChecksumMismatch);
  VRep lax = read_vrep(headless, false);
  CHECK(lax.vertices.size() == v.vertices.size());

  CHECK_THROWS_AS(read_vrep("vrep 2\n1/2\nchecksum 0000000000000000\n"), ChecksumMismatch);
}

TEST_CASE("facet streams round-trip and support incremental appends") {
  LhvPolytope poly{Setting(2, 2, 2)};
  HRep h = poly.facets();
  REQUIRE(h.ineq.size() == 16);

  std::string text = write_hrep(h);
  HRep back = read_hrep(text);
  CHECK(back.dim == h.dim);
  REQUIRE(back.ineq.size() == h.ineq.size());
  for (std::size_t i = 0; i < h.ineq.size(); ++i) CHECK(back.ineq[i] == h.ineq[i]);
  CHECK(back.eq.empty());

  // The incremental writer produces byte-identical output.
  std::ostringstream inc;
  FacetStreamWriter writer(inc, h.dim);
  for (const IntVec& row : h.ineq) writer.append(row);
  writer.finish();
  CHECK(inc.str() == text);
  CHECK_THROWS_AS(writer.finish(), FormatError);

  // Equality rows keep their tag.
  HRep mixed = h;
  mixed.eq.push_back(IntVec(static_cast<std::size_t>(h.dim + 1), Int(0)));
  mixed.eq.back()[0] = 1;
  HRep mixed_back = read_hrep(write_hrep(mixed));
  REQUIRE(mixed_back.eq.size() == 1);
  CHECK(mixed_back.eq[0] == mixed.eq[0]);
  CHECK(mixed_back.ineq.size() == h.ineq.size());

  // An in-progress stream (no trailer yet) reads in lax mode.
  std::ostringstream part;
  FacetStreamWriter partial(part, h.dim);
  partial.append(h.ineq[0]);
  CHECK_THROWS_AS(read_hrep(part.str()), ChecksumMismatch);
  HRep lax = read_hrep(part.str(), false);
  CHECK(lax.ineq.size() == 1);

  CHECK_THROWS_AS(read_hrep("hrep 4\nrow 1 2 3 4 5\nchecksum x\n"), ChecksumMismatch);
  CHECK_THROWS_AS(read_hrep("vrep 4\n", false), FormatError);
  CHECK_THROWS_AS(read_hrep("hrep 4\nineq 1 2 3\n", false), FormatError);
}

TEST_CASE("correlators and joint distributions round-trip") {
  Setting st(2, 2, 3);
  FunctionOverSettings f = make_f(st, {0, 1, 2, 1});
  CorrelatorVector corr = deterministic_correlator(f);
  CorrelatorVector corr_back = read_correlator(write_correlator(corr));
  CHECK(corr_back == corr);

  JointDistribution box = gen_pr_box(f);
  JointDistribution box_back = read_distribution(write_distribution(box));
  CHECK(box_back == box);

  // Header keyword and row lengths are enforced.
  CHECK_THROWS_AS(read_correlator(write_distribution(box)), FormatError);
  CHECK_THROWS_AS(read_distribution(write_correlator(corr)), FormatError);

  // Exact rationals: a third survives the trip bit-for-bit.
  CHECK(box_back.at({0, 0}, {0, 0}) == Rat(1, 3));

  // Corruption detection applies to both formats.
  std::string text = write_distribution(box);
  text[text.find("1/3")] = '2';
  CHECK_THROWS_AS(read_distribution(text), ChecksumMismatch);
}

TEST_CASE("inequality records round-trip the full named catalog") {
  std::vector<BellInequality> catalog;
  for (const Setting& st : {Setting(2, 2, 2), Setting(2, 2, 3), Setting(2, 2, 5), Setting(3, 2, 2),
                            Setting(3, 2, 3), Setting(2, 2, 4)})
    for (const std::string& name : family_names(st)) catalog.push_back(named_family(name, st));
  REQUIRE(catalog.size() >= 15);

  std::string text = write_inequalities(catalog);
  std::vector<BellInequality> back = read_inequalities(text);
  REQUIRE(back.size() == catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    CAPTURE(catalog[i].origin);
    CHECK(back[i].setting == catalog[i].setting);
    CHECK(back[i].coeffs == catalog[i].coeffs);
    CHECK(back[i].p0_offset == catalog[i].p0_offset);
    CHECK(back[i].gamma_L == catalog[i].gamma_L);
    CHECK(back[i].gamma_P == catalog[i].gamma_P);
    CHECK(back[i].paper_scale == catalog[i].paper_scale);
    CHECK(back[i].origin == catalog[i].origin);
  }
  CHECK(write_inequalities(back) == text);

  CHECK_THROWS_AS(read_inequalities("inequality 2,2,2,2\noffset 0\nend\n"), FormatError);
  CHECK_THROWS_AS(read_inequalities("inequality 2,2,2,2\n"), FormatError);
  CHECK_THROWS_AS(read_inequalities("offset 0\n"), FormatError);
  CHECK(read_inequalities("").empty());
}

TEST_CASE("class reports round-trip as CSV") {
  std::vector<ClassReportRow> rows;
  rows.push_back({0, 8, "class_0000.ineq", Rat(3, 4), Rat(1), true});
  rows.push_back({1, 54, "class_0001.ineq", Rat(2, 3), Rat(1), true});
  rows.push_back({2, 128, "class_0002.ineq", Rat(5, 8), Rat(1), false});

  std::string text = write_class_report(rows);
  CHECK(text.rfind("class_id,size,canonical,gamma_L,gamma_P,facet\n", 0) == 0);
  std::vector<ClassReportRow> back = read_class_report(text);
  CHECK(back == rows);

  std::vector<ClassReportRow> bad = rows;
  bad[0].canonical_ref = "a,b";
  CHECK_THROWS_AS(write_class_report(bad), FormatError);
  CHECK_THROWS_AS(read_class_report("id,size\n"), FormatError);
  CHECK_THROWS_AS(read_class_report(text + "1,2,3\n"), FormatError);
  CHECK_THROWS_AS(read_class_report(text + "x,2,r,1/2,1/2,true\n"), FormatError);
  CHECK_THROWS_AS(read_class_report(text + "9,2,r,1/2,1/2,yes\n"), FormatError);
}

TEST_CASE("optimizer reports emit valid JSON with 10-digit floats") {
  OptimizerReport rep;
  rep.inequality_ref = "cglmp_2_2_3.ineq";
  rep.value = 3.914485422643524;
  rep.gamma_L = Rat(2, 3);
  rep.violation = true;
  rep.phases = {{{0.0, 0.25}, {0.5, -1.0}}, {{1e-9, 2.0}, {0.125, 0.75}}};
  rep.schmidt = {0.6169432, 0.6169432, 0.4888332};
  rep.max_entangled = false;
  rep.seed = 20240915;
  rep.restarts = 50;
  rep.best_restart = 3;
  rep.rounds = 17;
  rep.restart_values = {3.9144, 3.914485422643524};

  std::string text = write_optimizer_report(rep);
  CHECK(write_optimizer_report(rep) == text);  // deterministic bytes

  // 10 significant digits: the value prints rounded, not full precision.
  CHECK(text.find("3.914485423") != std::string::npos);
  CHECK(text.find("3.914485422643524") == std::string::npos);

  // Well-formed JSON with the agreed fields.
  nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("inequality") == "cglmp_2_2_3.ineq");
  CHECK(j.at("gamma_L") == "2/3");
  CHECK(j.at("violation") == true);
  CHECK(j.at("max_entangled") == false);
  CHECK(j.at("seed") == 20240915);
  CHECK(j.at("phases").size() == 2);

  OptimizerReport back = read_optimizer_report(text);
  CHECK(back.inequality_ref == rep.inequality_ref);
  CHECK(back.value == doctest::Approx(rep.value).epsilon(1e-9));
  CHECK(back.gamma_L == rep.gamma_L);
  CHECK(back.violation == rep.violation);
  CHECK(back.phases.size() == rep.phases.size());
  CHECK(back.phases[1][0][0] == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK(back.schmidt.size() == rep.schmidt.size());
  CHECK(back.seed == rep.seed);
  CHECK(back.restarts == rep.restarts);
  CHECK(back.best_restart == rep.best_restart);
  CHECK(back.rounds == rep.rounds);
  CHECK(back.restart_values.size() == 2);

  // Escaping keeps hostile references intact.
  rep.inequality_ref = "weird \"name\"\\with\tescapes";
  OptimizerReport esc = read_optimizer_report(write_optimizer_report(rep));
  CHECK(esc.inequality_ref == rep.inequality_ref);

  CHECK_THROWS_AS(read_optimizer_report("{ not json"), FormatError);
  CHECK_THROWS_AS(read_optimizer_report("{}"), FormatError);
}

TEST_CASE("checksums are order-sensitive and stable") {
  CHECK(checksum_hex("") == checksum_hex(""));
  CHECK(checksum_hex("ab") != checksum_hex("ba"));
  CHECK(checksum_hex("x").size() == 16);
  // FNV-1a 64 reference value for the empty string.
  CHECK(checksum_hex("") == "cbf29ce484222325");
}
