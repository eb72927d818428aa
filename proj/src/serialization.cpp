#include "bellpoly/serialization.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace bellpoly {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& data) {
  for (unsigned char b : data) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw FormatError("trailing characters in integer: " + s);
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("expected an integer, got: " + s);
  }
}

long long parse_ll(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw FormatError("trailing characters in integer: " + s);
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("expected an integer, got: " + s);
  }
}

Rat parse_rat(const std::string& s) {
  try {
    return rat_parse(s);
  } catch (const std::exception&) {
    throw FormatError("expected a rational p/q, got: " + s);
  }
}

Int parse_big(const std::string& s) {
  if (s.empty()) throw FormatError("expected an integer, got an empty token");
  std::size_t start = s[0] == '-' ? 1 : 0;
  if (start == s.size()) throw FormatError("expected an integer, got: " + s);
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw FormatError("expected an integer, got: " + s);
  return Int(s);
}

// Strips and verifies the trailing "checksum <hex>" line; returns the body
// lines. When the line is absent: throws if required, else returns all lines.
std::vector<std::string> checked_body(const std::string& text, bool require_checksum) {
  std::vector<std::string> lines = split_lines(text);
  if (!lines.empty() && lines.back().rfind("checksum ", 0) == 0) {
    // The body is everything before the final line's first byte.
    std::size_t end = text.size();
    if (end && text[end - 1] == '\n') --end;
    if (end && text[end - 1] == '\r') --end;
    std::size_t nl = end ? text.find_last_of('\n', end - 1) : std::string::npos;
    std::string body = text.substr(0, nl == std::string::npos ? 0 : nl + 1);
    std::vector<std::string> toks = split_tokens(lines.back());
    std::string want = toks.size() == 2 ? toks[1] : "";
    if (want != checksum_hex(body)) throw ChecksumMismatch("stream checksum does not match");
    lines.pop_back();
    return lines;
  }
  if (require_checksum) throw ChecksumMismatch("missing trailing checksum line");
  return lines;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (unsigned char ch : s) {
    if (ch == '"' || ch == '\\') {
      out.push_back('\\');
      out.push_back(static_cast<char>(ch));
    } else if (ch < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", ch);
      out += buf;
    } else {
      out.push_back(static_cast<char>(ch));
    }
  }
  return out;
}

template <typename T, typename F>
std::string json_array(const std::vector<T>& v, F item) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += item(v[i]);
  }
  out += "]";
  return out;
}

}  // namespace

std::string checksum_hex(const std::string& data) { return hex64(fnv1a(kFnvOffset, data)); }

std::string setting_csv(const Setting& st) {
  std::string out = std::to_string(st.n);
  for (int cj : st.c) out += "," + std::to_string(cj);
  out += "," + std::to_string(st.d);
  return out;
}

Setting parse_setting_csv(const std::string& text) {
  std::vector<std::string> parts = split_commas(text);
  if (parts.size() < 3) throw FormatError("setting header needs n, c-list, d: " + text);
  Setting st;
  st.n = parse_int(parts.front());
  st.d = parse_int(parts.back());
  for (std::size_t i = 1; i + 1 < parts.size(); ++i) st.c.push_back(parse_int(parts[i]));
  if (static_cast<int>(st.c.size()) != st.n)
    throw FormatError("setting header lists " + std::to_string(st.c.size()) + " alphabets for " +
                      std::to_string(st.n) + " parties");
  try {
    st.validate();
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid setting header: ") + e.what());
  }
  return st;
}

// ---- function tables ----

std::string write_function_table(const FunctionOverSettings& f) {
  f.setting.validate();
  std::string out = setting_csv(f.setting);
  out += "\n";
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(f.table[i]);
  }
  out += "\n";
  return out;
}

FunctionOverSettings read_function_table(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.size() != 2) throw FormatError("function table needs a header and a value line");
  FunctionOverSettings f;
  f.setting = parse_setting_csv(lines[0]);
  for (const std::string& tok : split_commas(lines[1])) {
    int v = parse_int(tok);
    if (v < 0 || v >= f.setting.d) throw FormatError("table value out of range: " + tok);
    f.table.push_back(v);
  }
  if (static_cast<long long>(f.table.size()) != f.setting.setting_count())
    throw FormatError("function table has " + std::to_string(f.table.size()) + " values, needs " +
                      std::to_string(f.setting.setting_count()));
  return f;
}

// ---- polytope representations ----

std::string write_vrep(const VRep& v) {
  v.validate();
  std::string body = "vrep " + std::to_string(v.dim) + "\n";
  for (const RatVec& vert : v.vertices) {
    for (std::size_t i = 0; i < vert.size(); ++i) {
      if (i) body += " ";
      body += rat_str(vert[i]);
    }
    body += "\n";
  }
  return body + "checksum " + checksum_hex(body) + "\n";
}

VRep read_vrep(const std::string& text, bool require_checksum) {
  std::vector<std::string> lines = checked_body(text, require_checksum);
  if (lines.empty()) throw FormatError("empty vrep stream");
  std::vector<std::string> head = split_tokens(lines[0]);
  if (head.size() != 2 || head[0] != "vrep") throw FormatError("vrep header expected");
  VRep v;
  v.dim = parse_int(head[1]);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    RatVec row;
    for (const std::string& tok : split_tokens(lines[li])) row.push_back(parse_rat(tok));
    if (static_cast<int>(row.size()) != v.dim)
      throw FormatError("vertex row has " + std::to_string(row.size()) + " entries, needs " +
                        std::to_string(v.dim));
    v.vertices.push_back(std::move(row));
  }
  v.validate();
  return v;
}

namespace {

std::string hrep_row_text(const IntVec& row, bool equality, int dim) {
  if (static_cast<int>(row.size()) != dim + 1)
    throw FormatError("H-representation rows carry dim+1 integers");
  std::string out = equality ? "eq" : "ineq";
  for (const Int& a : row) {
    out += " ";
    out += a.get_str();
  }
  out += "\n";
  return out;
}

}  // namespace

std::string write_hrep(const HRep& h) {
  std::string body = "hrep " + std::to_string(h.dim) + "\n";
  for (const IntVec& row : h.eq) body += hrep_row_text(row, true, h.dim);
  for (const IntVec& row : h.ineq) body += hrep_row_text(row, false, h.dim);
  return body + "checksum " + checksum_hex(body) + "\n";
}

HRep read_hrep(const std::string& text, bool require_checksum) {
  std::vector<std::string> lines = checked_body(text, require_checksum);
  if (lines.empty()) throw FormatError("empty hrep stream");
  std::vector<std::string> head = split_tokens(lines[0]);
  if (head.size() != 2 || head[0] != "hrep") throw FormatError("hrep header expected");
  HRep h;
  h.dim = parse_int(head[1]);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::vector<std::string> toks = split_tokens(lines[li]);
    if (toks[0] != "ineq" && toks[0] != "eq")
      throw FormatError("row must start with ineq or eq: " + lines[li]);
    if (static_cast<int>(toks.size()) != h.dim + 2)
      throw FormatError("row has " + std::to_string(toks.size() - 1) + " integers, needs " +
                        std::to_string(h.dim + 1));
    IntVec row;
    for (std::size_t i = 1; i < toks.size(); ++i) row.push_back(parse_big(toks[i]));
    (toks[0] == "eq" ? h.eq : h.ineq).push_back(std::move(row));
  }
  return h;
}

FacetStreamWriter::FacetStreamWriter(std::ostream& out, int dim) : out_(out), dim_(dim) {
  hash_ = kFnvOffset;
  write("hrep " + std::to_string(dim) + "\n");
}

void FacetStreamWriter::write(const std::string& chunk) {
  hash_ = fnv1a(hash_, chunk);
  out_ << chunk;
}

void FacetStreamWriter::append(const IntVec& row, bool equality) {
  if (finished_) throw FormatError("facet stream already finished");
  write(hrep_row_text(row, equality, dim_));
}

void FacetStreamWriter::finish() {
  if (finished_) throw FormatError("facet stream already finished");
  finished_ = true;
  out_ << "checksum " << hex64(hash_) << "\n";
  out_.flush();
}

// ---- correlator vectors ----

std::string write_correlator(const CorrelatorVector& corr) {
  corr.validate();
  std::string body = "correlator " + setting_csv(corr.setting) + "\n";
  const int dm1 = corr.setting.d - 1;
  const long long ns = corr.setting.setting_count();
  for (long long s = 0; s < ns; ++s) {
    for (int k = 1; k <= dm1; ++k) {
      if (k > 1) body += " ";
      body += rat_str(corr.entries[corr.index_of(s, k)]);
    }
    body += "\n";
  }
  return body + "checksum " + checksum_hex(body) + "\n";
}

CorrelatorVector read_correlator(const std::string& text, bool require_checksum) {
  std::vector<std::string> lines = checked_body(text, require_checksum);
  if (lines.empty()) throw FormatError("empty correlator stream");
  std::vector<std::string> head = split_tokens(lines[0]);
  if (head.size() != 2 || head[0] != "correlator") throw FormatError("correlator header expected");
  Setting st = parse_setting_csv(head[1]);
  RatVec entries;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::vector<std::string> toks = split_tokens(lines[li]);
    if (static_cast<int>(toks.size()) != st.d - 1)
      throw FormatError("correlator row needs d-1 entries");
    for (const std::string& tok : toks) entries.push_back(parse_rat(tok));
  }
  CorrelatorVector corr(st, std::move(entries));
  corr.validate();
  return corr;
}

// ---- joint distributions ----

std::string write_distribution(const JointDistribution& dist) {
  dist.validate();
  std::string body = "distribution " + setting_csv(dist.setting) + "\n";
  const long long ns = dist.setting.setting_count();
  const long long nm = dist.setting.outcome_string_count();
  for (long long s = 0; s < ns; ++s) {
    for (long long m = 0; m < nm; ++m) {
      if (m) body += " ";
      body += rat_str(dist.entries[dist.index_of(s, m)]);
    }
    body += "\n";
  }
  return body + "checksum " + checksum_hex(body) + "\n";
}

JointDistribution read_distribution(const std::string& text, bool require_checksum) {
  std::vector<std::string> lines = checked_body(text, require_checksum);
  if (lines.empty()) throw FormatError("empty distribution stream");
  std::vector<std::string> head = split_tokens(lines[0]);
  if (head.size() != 2 || head[0] != "distribution")
    throw FormatError("distribution header expected");
  Setting st = parse_setting_csv(head[1]);
  const long long nm = st.outcome_string_count();
  RatVec entries;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::vector<std::string> toks = split_tokens(lines[li]);
    if (static_cast<long long>(toks.size()) != nm)
      throw FormatError("distribution row needs d^n entries");
    for (const std::string& tok : toks) entries.push_back(parse_rat(tok));
  }
  JointDistribution dist(st, std::move(entries));
  dist.validate();
  return dist;
}

// ---- inequality records ----

std::string write_inequalities(const std::vector<BellInequality>& list) {
  std::string out;
  for (const BellInequality& ineq : list) {
    ineq.validate();
    if (ineq.origin.find('\n') != std::string::npos || ineq.origin.find('\r') != std::string::npos)
      throw FormatError("origin strings are single-line");
    out += "inequality " + setting_csv(ineq.setting) + "\n";
    out += "offset " + rat_str(ineq.p0_offset) + "\n";
    out += "coeffs";
    for (const Rat& w : ineq.coeffs) out += " " + rat_str(w);
    out += "\n";
    out += "gamma_L " + rat_str(ineq.gamma_L) + "\n";
    out += "gamma_P " + rat_str(ineq.gamma_P) + "\n";
    out += "scale " + rat_str(ineq.paper_scale) + "\n";
    out += "origin " + ineq.origin + "\n";
    out += "end\n";
  }
  return out;
}

std::vector<BellInequality> read_inequalities(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  std::vector<BellInequality> out;
  std::size_t li = 0;
  while (li < lines.size()) {
    if (lines[li].empty()) {
      ++li;
      continue;
    }
    std::vector<std::string> head = split_tokens(lines[li]);
    if (head.size() != 2 || head[0] != "inequality")
      throw FormatError("inequality record expected at line " + std::to_string(li + 1));
    BellInequality ineq;
    ineq.setting = parse_setting_csv(head[1]);
    ++li;
    bool closed = false;
    while (li < lines.size() && !closed) {
      const std::string& line = lines[li];
      std::vector<std::string> toks = split_tokens(line);
      if (toks.empty()) throw FormatError("unexpected blank line inside an inequality record");
      const std::string& key = toks[0];
      if (key == "end") {
        closed = true;
      } else if (key == "offset" && toks.size() == 2) {
        ineq.p0_offset = parse_rat(toks[1]);
      } else if (key == "gamma_L" && toks.size() == 2) {
        ineq.gamma_L = parse_rat(toks[1]);
      } else if (key == "gamma_P" && toks.size() == 2) {
        ineq.gamma_P = parse_rat(toks[1]);
      } else if (key == "scale" && toks.size() == 2) {
        ineq.paper_scale = parse_rat(toks[1]);
      } else if (key == "coeffs") {
        for (std::size_t i = 1; i < toks.size(); ++i) ineq.coeffs.push_back(parse_rat(toks[i]));
      } else if (key == "origin") {
        std::size_t pos = line.find("origin ");
        ineq.origin = pos == 0 ? line.substr(7) : "";
      } else {
        throw FormatError("unknown inequality record line: " + line);
      }
      ++li;
    }
    if (!closed) throw FormatError("inequality record missing its end line");
    try {
      ineq.validate();
    } catch (const std::exception& e) {
      throw FormatError(std::string("invalid inequality record: ") + e.what());
    }
    out.push_back(std::move(ineq));
  }
  return out;
}

// ---- class reports ----

std::string write_class_report(const std::vector<ClassReportRow>& rows) {
  std::string out = "class_id,size,canonical,gamma_L,gamma_P,facet\n";
  for (const ClassReportRow& row : rows) {
    if (row.canonical_ref.find(',') != std::string::npos ||
        row.canonical_ref.find('\n') != std::string::npos)
      throw FormatError("canonical references must not contain commas or newlines");
    out += std::to_string(row.class_id) + "," + std::to_string(row.size) + "," +
           row.canonical_ref + "," + rat_str(row.gamma_L) + "," + rat_str(row.gamma_P) + "," +
           (row.facet ? "true" : "false") + "\n";
  }
  return out;
}

std::vector<ClassReportRow> read_class_report(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != "class_id,size,canonical,gamma_L,gamma_P,facet")
    throw FormatError("class report header expected");
  std::vector<ClassReportRow> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    std::vector<std::string> parts = split_commas(lines[li]);
    if (parts.size() != 6) throw FormatError("class report rows carry six columns");
    ClassReportRow row;
    row.class_id = parse_int(parts[0]);
    row.size = parse_ll(parts[1]);
    row.canonical_ref = parts[2];
    row.gamma_L = parse_rat(parts[3]);
    row.gamma_P = parse_rat(parts[4]);
    if (parts[5] == "true")
      row.facet = true;
    else if (parts[5] == "false")
      row.facet = false;
    else
      throw FormatError("facet column must be true or false: " + parts[5]);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- optimizer reports ----

std::string write_optimizer_report(const OptimizerReport& rep) {
  auto num = [](double v) { return fmt_double(v); };
  auto darr = [&](const std::vector<double>& v) { return json_array(v, num); };
  std::string phases = json_array(rep.phases, [&](const std::vector<std::vector<double>>& party) {
    return json_array(party, [&](const std::vector<double>& per_value) {
      return darr(per_value);
    });
  });

  std::string out = "{\n";
  out += "  \"inequality\": \"" + json_escape(rep.inequality_ref) + "\",\n";
  out += "  \"value\": " + num(rep.value) + ",\n";
  out += "  \"gamma_L\": \"" + rat_str(rep.gamma_L) + "\",\n";
  out += std::string("  \"violation\": ") + (rep.violation ? "true" : "false") + ",\n";
  out += "  \"phases\": " + phases + ",\n";
  out += "  \"schmidt\": " + darr(rep.schmidt) + ",\n";
  out += std::string("  \"max_entangled\": ") + (rep.max_entangled ? "true" : "false") + ",\n";
  out += "  \"seed\": " + std::to_string(rep.seed) + ",\n";
  out += "  \"restarts\": " + std::to_string(rep.restarts) + ",\n";
  out += "  \"best_restart\": " + std::to_string(rep.best_restart) + ",\n";
  out += "  \"rounds\": " + std::to_string(rep.rounds) + ",\n";
  out += "  \"restart_values\": " + darr(rep.restart_values) + "\n";
  out += "}\n";
  return out;
}

OptimizerReport read_optimizer_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw FormatError(std::string("optimizer report is not valid JSON: ") + e.what());
  }
  try {
    OptimizerReport rep;
    rep.inequality_ref = j.at("inequality").get<std::string>();
    rep.value = j.at("value").get<double>();
    rep.gamma_L = parse_rat(j.at("gamma_L").get<std::string>());
    rep.violation = j.at("violation").get<bool>();
    rep.phases = j.at("phases").get<std::vector<std::vector<std::vector<double>>>>();
    rep.schmidt = j.at("schmidt").get<std::vector<double>>();
    rep.max_entangled = j.at("max_entangled").get<bool>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.restarts = j.at("restarts").get<int>();
    rep.best_restart = j.at("best_restart").get<int>();
    rep.rounds = j.at("rounds").get<int>();
    rep.restart_values = j.at("restart_values").get<std::vector<double>>();
    return rep;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("optimizer report field error: ") + e.what());
  }
}

}  // namespace bellpoly
