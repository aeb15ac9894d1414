#include "steercert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steercert {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const Json& field(const Json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) fail_at(path, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) fail_at(path, std::string("missing field '") + name + "'");
  return *it;
}

std::size_t as_count(const Json& j, const std::string& path, bool allow_zero = false) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail_at(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0 || (!allow_zero && v == 0)) fail_at(path, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> as_counts(const Json& j, const std::string& path, bool allow_zero = false) {
  if (!j.is_array()) fail_at(path, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_count(j[i], path + "[" + std::to_string(i) + "]", allow_zero));
  return out;
}

double as_real(const Json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail_at(path, "non-finite number");
    return v;
  }
  if (j.is_string()) {
    try {
      return to_double(parse_rational(j.get<std::string>()));
    } catch (const Error& e) {
      fail_at(path, e.what());
    }
  }
  fail_at(path, "expected a number or a rational string \"p/q\"");
}

CMatrix as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Json& row = j[r];
    if (!row.is_array()) fail_at(rp, "expected a row array");
    if (r == 0) cols = row.size();
    if (row.size() != cols || cols == 0) fail_at(rp, "rows must have equal, non-zero length");
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2) fail_at(ep, "expected an entry [re, im]");
      entries.emplace_back(as_real(e[0], ep + "[0]"), as_real(e[1], ep + "[1]"));
    }
  }
  return CMatrix(rows, cols, std::move(entries));
}

HermitianMatrix as_hermitian(const Json& j, const std::string& path, double tol = 1e-9) {
  const CMatrix m = as_matrix(j, path);
  if (!m.is_square()) fail_at(path, "matrix must be square");
  try {
    return HermitianMatrix(m, tol);
  } catch (const Error& e) {
    fail_at(path, e.what());
  }
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size() && i < e.byte; ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
}

void check_version(const Json& doc) {
  const Json& v = field(doc, "format_version", "$");
  if (!v.is_string() || v.get<std::string>() != "1")
    fail_at("$.format_version", "unsupported format version (expected \"1\")");
}

Json component(double v, Encoding enc) {
  if (enc == Encoding::Rational) return to_string(exact_rational(v));
  return v;
}

Json matrix_json(const CMatrix& m, Encoding enc) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({component(m(r, c).real(), enc), component(m(r, c).imag(), enc)}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json_array(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (std::size_t x : v) a.push_back(x);
  return a;
}

Json scenario_json(const ScenarioSpec& s) {
  Json j;
  j["num_alices"] = s.num_alices;
  j["settings"] = to_json_array(s.settings);
  Json o = Json::array();
  for (const auto& row : s.outcomes) o.push_back(to_json_array(row));
  j["outcomes"] = o;
  j["num_bobs"] = s.num_bobs;
  j["bob_dims"] = to_json_array(s.bob_dims);
  return j;
}

ScenarioSpec parse_scenario(const Json& j, const std::string& path) {
  ScenarioSpec s;
  s.num_alices = as_count(field(j, "num_alices", path), path + ".num_alices");
  s.settings = as_counts(field(j, "settings", path), path + ".settings");
  const Json& o = field(j, "outcomes", path);
  if (!o.is_array()) fail_at(path + ".outcomes", "expected an array of arrays");
  for (std::size_t i = 0; i < o.size(); ++i)
    s.outcomes.push_back(as_counts(o[i], path + ".outcomes[" + std::to_string(i) + "]"));
  s.num_bobs = as_count(field(j, "num_bobs", path), path + ".num_bobs");
  s.bob_dims = as_counts(field(j, "bob_dims", path), path + ".bob_dims");
  try {
    s.check();
  } catch (const Error& e) {
    fail_at(path, e.what());
  }
  return s;
}

// Deterministic writer: fixed key order (insertion order), %.17g floats,
// arrays of scalars on one line.
void dump(const Json& j, std::ostringstream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_object() && !(e.is_array() && !e.empty() && (e[0].is_array() || e[0].is_object()));
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          dump(j[i], os, indent);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad_in;
        dump(j[i], os, indent + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        os << pad_in << Json(it.key()).dump() << ": ";
        dump(it.value(), os, indent + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << '}';
      return;
    }
    default:
      os << j.dump();
  }
}

std::string render(const Json& j) {
  std::ostringstream os;
  dump(j, os, 0);
  os << '\n';
  return os.str();
}

Json diagnostics_json(sdp::Status st, const sdp::Diagnostics& d) {
  Json j;
  j["status"] = sdp::to_string(st);
  j["iterations"] = d.iterations;
  j["primal_residual"] = d.primal_residual;
  j["dual_residual"] = d.dual_residual;
  j["equality_residual"] = d.equality_residual;
  j["relative_gap"] = d.relative_gap;
  j["dual_bound"] = d.dual_bound ? Json(*d.dual_bound) : Json(nullptr);
  j["message"] = d.message;
  return j;
}

Json key_json(const ElementKey& k) {
  Json j;
  j["a"] = to_json_array(k.a);
  j["x"] = to_json_array(k.x);
  return j;
}

Json parent_json(const ParentAssemblage& p) {
  Json arr = Json::array();
  for (const auto& [k, m] : p.elements) {
    Json e = key_json(k);
    e["matrix"] = matrix_json(m.matrix(), Encoding::Decimal);
    arr.push_back(std::move(e));
  }
  return arr;
}

Json lambda_json(const LambdaReport& r) {
  Json j;
  j["lambda_star"] = r.lambda_star;
  j["solver"] = diagnostics_json(r.status, r.diagnostics);
  j["parent"] = parent_json(r.parent);
  return j;
}

Json measurement_json(const MeasurementSet& m) {
  Json sets = Json::array();
  for (const auto& row : m.ops()) {
    Json ops = Json::array();
    for (const auto& h : row) ops.push_back(matrix_json(h.matrix(), Encoding::Decimal));
    sets.push_back(std::move(ops));
  }
  return sets;
}

MeasurementSet parse_measurements(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected an array of settings");
  std::vector<std::vector<HermitianMatrix>> ops;
  for (std::size_t x = 0; x < j.size(); ++x) {
    const std::string xp = path + "[" + std::to_string(x) + "]";
    if (!j[x].is_array() || j[x].empty()) fail_at(xp, "expected an array of operators");
    std::vector<HermitianMatrix> row;
    for (std::size_t a = 0; a < j[x].size(); ++a)
      row.push_back(as_hermitian(j[x][a], xp + "[" + std::to_string(a) + "]"));
    ops.push_back(std::move(row));
  }
  try {
    return MeasurementSet(std::move(ops), 1e-9);
  } catch (const Error& e) {
    fail_at(path, e.what());
  }
}

}  // namespace

Assemblage parse_assemblage_json(const std::string& text) {
  const Json doc = parse_text(text);
  check_version(doc);
  const ScenarioSpec s = parse_scenario(field(doc, "scenario", "$"), "$.scenario");
  const Json& els = field(doc, "elements", "$");
  if (!els.is_array()) fail_at("$.elements", "expected an array");
  Assemblage::Elements map;
  for (std::size_t i = 0; i < els.size(); ++i) {
    const std::string ep = "$.elements[" + std::to_string(i) + "]";
    ElementKey key;
    key.a = as_counts(field(els[i], "a", ep), ep + ".a", true);
    key.x = as_counts(field(els[i], "x", ep), ep + ".x", true);
    const Json& bobs = field(els[i], "bobs", ep);
    if (!bobs.is_array()) fail_at(ep + ".bobs", "expected an array of matrices");
    std::vector<HermitianMatrix> mats;
    for (std::size_t k = 0; k < bobs.size(); ++k)
      mats.push_back(as_hermitian(bobs[k], ep + ".bobs[" + std::to_string(k) + "]"));
    if (map.count(key)) fail_at(ep, "duplicate element " + to_string(key));
    map.emplace(std::move(key), std::move(mats));
  }
  try {
    Assemblage a(s, std::move(map));
    a.require_complete();
    return a;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail_at("$.elements", e.what());
  }
}

std::string assemblage_to_json(const Assemblage& a, Encoding enc) {
  Json doc;
  doc["format_version"] = "1";
  doc["scenario"] = scenario_json(a.scenario());
  Json els = Json::array();
  for (const auto& [key, bobs] : a.elements()) {
    Json e = key_json(key);
    Json mats = Json::array();
    for (const auto& b : bobs) mats.push_back(matrix_json(b.matrix(), enc));
    e["bobs"] = std::move(mats);
    els.push_back(std::move(e));
  }
  doc["elements"] = std::move(els);
  return render(doc);
}

RealizationDocument parse_realization_json(const std::string& text) {
  const Json doc = parse_text(text);
  check_version(doc);
  RealizationDocument out;
  auto& qr = out.realization;
  qr.alice_dims = as_counts(field(doc, "alice_dims", "$"), "$.alice_dims");
  qr.bob_dims = as_counts(field(doc, "bob_dims", "$"), "$.bob_dims");
  qr.state = as_hermitian(field(doc, "state", "$"), "$.state");
  const Json& am = field(doc, "alice_measurements", "$");
  if (!am.is_array()) fail_at("$.alice_measurements", "expected an array");
  for (std::size_t j = 0; j < am.size(); ++j)
    qr.alice_measurements.push_back(
        parse_measurements(am[j], "$.alice_measurements[" + std::to_string(j) + "]"));
  if (auto it = doc.find("bob_measurements"); it != doc.end()) {
    if (!it->is_array()) fail_at("$.bob_measurements", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k)
      out.bob_measurements.push_back(
          parse_measurements((*it)[k], "$.bob_measurements[" + std::to_string(k) + "]"));
  }
  try {
    qr.validate(1e-9);
  } catch (const Error& e) {
    fail_at("$", e.what());
  }
  return out;
}

std::string realization_to_json(const RealizationDocument& d) {
  Json doc;
  doc["format_version"] = "1";
  doc["alice_dims"] = to_json_array(d.realization.alice_dims);
  doc["bob_dims"] = to_json_array(d.realization.bob_dims);
  doc["state"] = matrix_json(d.realization.state.matrix(), Encoding::Decimal);
  Json am = Json::array();
  for (const auto& m : d.realization.alice_measurements) am.push_back(measurement_json(m));
  doc["alice_measurements"] = std::move(am);
  Json bm = Json::array();
  for (const auto& m : d.bob_measurements) bm.push_back(measurement_json(m));
  doc["bob_measurements"] = std::move(bm);
  return render(doc);
}

std::string report_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.ok();
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e;
    e["check"] = x.check;
    e["where"] = x.where;
    e["magnitude"] = x.magnitude;
    v.push_back(std::move(e));
  }
  j["violations"] = std::move(v);
  return render(j);
}

std::string report_json(const LambdaReport& r) { return render(lambda_json(r)); }

std::string report_json(const CertificationReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["failed_condition"] = r.failed_condition ? Json(to_string(*r.failed_condition)) : Json(nullptr);
  j["npa_level_used"] = r.npa_level_used;
  if (r.npa) {
    Json n;
    n["margin"] = r.npa->margin;
    n["moment_matrix_size"] = r.npa->moment_size;
    n["solver"] = diagnostics_json(r.npa->status, r.npa->diagnostics);
    j["npa"] = std::move(n);
  } else {
    j["npa"] = nullptr;
  }
  j["lambda"] = lambda_json(r.lambda);
  return render(j);
}

std::string report_json(const LhsResult& r) {
  Json j;
  j["status"] = sdp::to_string(r.status);
  j["margin"] = r.margin;
  if (r.model) {
    Json m = Json::array();
    for (std::size_t l = 0; l < r.model->strategies.size(); ++l) {
      Json e;
      e["strategy"] = to_json_array(r.model->strategies[l]);
      e["weight"] = r.model->weights[l];
      Json states = Json::array();
      for (const auto& s : r.model->bob_states[l]) states.push_back(matrix_json(s.matrix(), Encoding::Decimal));
      e["bob_states"] = std::move(states);
      m.push_back(std::move(e));
    }
    j["model"] = std::move(m);
  } else {
    j["model"] = nullptr;
  }
  j["solver"] = diagnostics_json(r.status, r.diagnostics);
  return render(j);
}

std::string report_json(const RobustnessResult& r) {
  Json j;
  j["r_star"] = r.r_star;
  j["noise"] = r.noise;
  j["lower_bound"] = r.lower_bound;
  j["solver"] = diagnostics_json(r.status, r.diagnostics);
  j["parent"] = parent_json(r.parent_at_optimum);
  return render(j);
}

std::string report_json(const HierarchyResult& r) {
  Json j;
  j["status"] = sdp::to_string(r.status);
  j["margin"] = r.margin;
  j["monomials"] = r.monomials;
  j["solver"] = diagnostics_json(r.status, r.diagnostics);
  return render(j);
}

std::string report_json(const NpaResult& r) {
  Json j;
  j["status"] = sdp::to_string(r.status);
  j["margin"] = r.margin;
  j["moment_matrix_size"] = r.moment_size;
  j["solver"] = diagnostics_json(r.status, r.diagnostics);
  return render(j);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace steercert
