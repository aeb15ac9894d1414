// steercert command-line front end. Uses only the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "steercert/steercert.h"

namespace {

constexpr int kExitUsage = 64;

struct Options {
  std::string file;
  std::string json_out;
  std::string sdpa_out;
  std::string noise = "white";
  std::string gen_name;
  std::string gen_out;
  int npa_level = 1;
  int level = 1;
  double tol = 0.0;
  bool decimal = false;
  bool timings = false;
  sc_solver_config cfg = sc_default_config();
};

int error_exit(sc_status s) {
  std::cerr << "steercert: " << sc_status_name(s) << ": " << sc_last_error() << "\n";
  switch (s) {
    case SC_ERR_VALIDATION: return 1;
    case SC_ERR_SOLVER_UNKNOWN:
    case SC_ERR_CONVERGENCE:
    case SC_ERR_NUMERICAL:
    case SC_ERR_INTERNAL: return 2;
    default: return kExitUsage;
  }
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "steercert: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

// Timings go in as a final top-level field only on request, so the
// default report is reproducible byte for byte.
std::string report_text(const sc_report* r, bool timings) {
  std::string js = sc_report_json(r);
  if (!timings) return js;
  const auto close = js.rfind('}');
  char buf[96];
  std::snprintf(buf, sizeof buf, ",\n  \"timings\": {\"wall_seconds\": %.6f}\n", sc_report_seconds(r));
  return js.substr(0, js.find_last_not_of(" \n", close - 1) + 1) + buf + "}\n";
}

int finish(sc_report* r, const Options& o) {
  std::cout << sc_report_summary(r) << "\n";
  int code = static_cast<int>(sc_report_outcome(r));
  if (!o.json_out.empty() && !write_text(o.json_out, report_text(r, o.timings))) code = kExitUsage;
  sc_report_free(r);
  return code;
}

class Loaded {
 public:
  explicit Loaded(const std::string& path) { status_ = sc_assemblage_load(path.c_str(), &a_); }
  ~Loaded() { sc_assemblage_free(a_); }
  Loaded(const Loaded&) = delete;
  Loaded& operator=(const Loaded&) = delete;
  sc_status status() const { return status_; }
  const sc_assemblage* get() const { return a_; }

 private:
  sc_assemblage* a_ = nullptr;
  sc_status status_ = SC_OK;
};

template <class F>
int run_on_file(const Options& o, F&& check) {
  Loaded a(o.file);
  if (a.status() != SC_OK) return error_exit(a.status());
  sc_report* r = nullptr;
  const sc_status s = check(a.get(), &r);
  if (s != SC_OK) return error_exit(s);
  return finish(r, o);
}

int dump_sdpa(const Options& o) {
  if (o.sdpa_out.empty()) return 0;
  Loaded a(o.file);
  if (a.status() != SC_OK) return error_exit(a.status());
  const sc_status s = sc_write_lambda_sdpa(a.get(), o.sdpa_out.c_str());
  return s == SC_OK ? 0 : error_exit(s);
}

int cmd_robustness(Options& o) {
  if (o.tol > 0.0) o.cfg.eps_feas = o.cfg.eps_gap = o.tol;
  Loaded a(o.file);
  if (a.status() != SC_OK) return error_exit(a.status());
  sc_assemblage* noise = nullptr;
  sc_status s;
  if (o.noise == "white" || o.noise == "ghz" || o.noise == "w")
    s = sc_assemblage_noise(o.noise.c_str(), a.get(), &noise);
  else
    s = sc_assemblage_load(o.noise.c_str(), &noise);
  if (s != SC_OK) return error_exit(s);
  sc_report* r = nullptr;
  s = sc_robustness(a.get(), noise, o.noise.c_str(), &o.cfg, &r);
  sc_assemblage_free(noise);
  if (s != SC_OK) return error_exit(s);
  return finish(r, o);
}

int cmd_gen(const Options& o) {
  sc_assemblage* a = nullptr;
  sc_status s;
  const std::string& n = o.gen_name;
  if (n == "white")
    s = sc_assemblage_noise("white", nullptr, &a);
  else if (n == "ghz-noise")
    s = sc_assemblage_noise("ghz", nullptr, &a);
  else if (n == "w-noise")
    s = sc_assemblage_noise("w", nullptr, &a);
  else
    s = sc_assemblage_fixture(n.c_str(), &a);
  if (s != SC_OK) return error_exit(s);
  s = sc_assemblage_save(a, o.gen_out.c_str(), o.decimal ? 0 : 1);
  sc_assemblage_free(a);
  if (s != SC_OK) return error_exit(s);
  std::cout << "wrote " << n << " to " << o.gen_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify steering assemblages with several characterised parties"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sc_version());

  Options o;
  auto solver_opts = [&](CLI::App* c) {
    c->add_option("--eps-feas", o.cfg.eps_feas, "Feasibility tolerance")->check(CLI::PositiveNumber);
    c->add_option("--eps-gap", o.cfg.eps_gap, "Relative duality-gap tolerance")->check(CLI::PositiveNumber);
    c->add_option("--max-iters", o.cfg.max_iters, "Interior-point iteration cap")->check(CLI::PositiveNumber);
  };
  auto file_arg = [&](CLI::App* c, const char* what = "Assemblage JSON document") {
    c->add_option("FILE", o.file, what)->required();
    c->add_option("--json", o.json_out, "Write a machine-readable report here");
    c->add_flag("--timings", o.timings, "Add wall-clock timings to the JSON report");
  };

  auto* validate = app.add_subcommand("validate", "Check the assemblage invariants");
  file_arg(validate);

  auto* certify = app.add_subcommand("certify", "Quantum / postquantum verdict");
  file_arg(certify);
  certify->add_option("--npa-level", o.npa_level, "NPA level for the Alices' correlations (1 or 2)");
  certify->add_option("--dump-sdpa", o.sdpa_out, "Export the parent-state SDP in SDPA format");
  solver_opts(certify);

  auto* lambda = app.add_subcommand("lambda", "Largest t with a parent sigma - tI PSD");
  file_arg(lambda);
  lambda->add_option("--dump-sdpa", o.sdpa_out, "Export the parent-state SDP in SDPA format");
  solver_opts(lambda);

  auto* lhs = app.add_subcommand("lhs", "Search for a local-hidden-state model");
  file_arg(lhs);
  solver_opts(lhs);

  auto* robust = app.add_subcommand("robustness", "Smallest noise weight admitting a parent");
  file_arg(robust);
  robust->add_option("--noise", o.noise, "white, ghz, w or a noise assemblage file")->required();
  robust->add_option("--tol", o.tol, "Solver tolerance (sets --eps-feas and --eps-gap)")
      ->check(CLI::PositiveNumber);
  solver_opts(robust);

  auto* hier = app.add_subcommand("hierarchy", "Operator hierarchy membership test");
  file_arg(hier);
  hier->add_option("--level", o.level, "Hierarchy level")->required();
  solver_opts(hier);

  auto* gen = app.add_subcommand("gen", "Write a built-in assemblage");
  gen->add_option("NAME", o.gen_name, "pr, abb1, abb-pqnl, abb-ptp1, white, ghz-noise or w-noise")
      ->required()
      ->check(CLI::IsMember({"pr", "abb1", "abb-pqnl", "abb-ptp1", "white", "ghz-noise", "w-noise"}));
  gen->add_option("--out", o.gen_out, "Output file")->required();
  gen->add_flag("--decimal", o.decimal, "Write decimal numbers instead of exact rationals");

  auto* chsh = app.add_subcommand("chsh", "CHSH value of a realisation with Bob measurements");
  file_arg(chsh, "Realisation JSON document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*validate) return run_on_file(o, [&](const sc_assemblage* a, sc_report** r) { return sc_validate(a, r); });
  if (*certify) {
    if (const int c = dump_sdpa(o)) return c;
    return run_on_file(o, [&](const sc_assemblage* a, sc_report** r) {
      return sc_certify(a, o.npa_level, &o.cfg, r);
    });
  }
  if (*lambda) {
    if (const int c = dump_sdpa(o)) return c;
    return run_on_file(o, [&](const sc_assemblage* a, sc_report** r) { return sc_lambda(a, &o.cfg, r); });
  }
  if (*lhs) return run_on_file(o, [&](const sc_assemblage* a, sc_report** r) { return sc_lhs(a, &o.cfg, r); });
  if (*robust) return cmd_robustness(o);
  if (*hier)
    return run_on_file(o, [&](const sc_assemblage* a, sc_report** r) {
      return sc_hierarchy(a, o.level, &o.cfg, r);
    });
  if (*gen) return cmd_gen(o);
  if (*chsh) {
    sc_report* r = nullptr;
    const sc_status s = sc_chsh(o.file.c_str(), &r);
    if (s != SC_OK) return error_exit(s);
    return finish(r, o);
  }
  return kExitUsage;
}
