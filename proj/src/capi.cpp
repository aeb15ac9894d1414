#include "steercert/steercert.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "steercert/construct.hpp"
#include "steercert/io.hpp"

using namespace steercert;

struct sc_assemblage {
  Assemblage a;
};

struct sc_report {
  sc_outcome outcome = SC_INCONCLUSIVE;
  double value = 0.0;
  double seconds = 0.0;
  std::string json;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

sc_status fail(sc_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
sc_status guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    return fail(SC_ERR_PARSE, e.what());
  } catch (const IoError& e) {
    return fail(SC_ERR_IO, e.what());
  } catch (const DimensionError& e) {
    return fail(SC_ERR_DIMENSION, e.what());
  } catch (const ValidationError& e) {
    return fail(SC_ERR_VALIDATION, e.what());
  } catch (const ConvergenceError& e) {
    return fail(SC_ERR_CONVERGENCE, e.what());
  } catch (const NumericalBreakdown& e) {
    return fail(SC_ERR_NUMERICAL, e.what());
  } catch (const UnsupportedLevel& e) {
    return fail(SC_ERR_UNSUPPORTED_LEVEL, e.what());
  } catch (const SolverUnknown& e) {
    return fail(SC_ERR_SOLVER_UNKNOWN, e.what());
  } catch (const InvalidArgument& e) {
    return fail(SC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SC_ERR_INTERNAL, e.what());
  }
}

#define SC_REQUIRE(cond, what) \
  if (!(cond)) return fail(SC_ERR_INVALID_ARGUMENT, what)

sdp::SolverConfig to_config(const sc_solver_config* c) {
  sdp::SolverConfig cfg;
  if (c) {
    if (!(c->eps_feas > 0.0) || !(c->eps_gap > 0.0) || c->max_iters <= 0)
      throw InvalidArgument("solver config: tolerances and iteration cap must be positive");
    cfg.eps_feas = c->eps_feas;
    cfg.eps_gap = c->eps_gap;
    cfg.max_iters = c->max_iters;
  }
  return cfg;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Runs the check, timing it, and hands over a freshly allocated report.
template <class F>
sc_status make_report(sc_report** out, F&& fill) {
  SC_REQUIRE(out, "output pointer is null");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<sc_report>();
    const auto t0 = std::chrono::steady_clock::now();
    fill(*r);
    r->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    *out = r.release();
    return SC_OK;
  });
}

sc_outcome from_status(sdp::Status s) {
  switch (s) {
    case sdp::Status::Feasible:
    case sdp::Status::Optimal: return SC_PASS;
    case sdp::Status::Infeasible: return SC_NEGATIVE;
    case sdp::Status::Unknown: break;
  }
  return SC_INCONCLUSIVE;
}

NoiseKind noise_kind(const char* kind) {
  const std::string k = kind ? kind : "";
  if (k == "white") return NoiseKind::White;
  if (k == "ghz") return NoiseKind::GHZ;
  if (k == "w") return NoiseKind::W;
  throw InvalidArgument("unknown noise kind '" + k + "' (expected white, ghz or w)");
}

}  // namespace

extern "C" {

const char* sc_version(void) { return "1.0.0"; }

const char* sc_last_error(void) { return g_last_error.c_str(); }

const char* sc_status_name(sc_status s) {
  switch (s) {
    case SC_OK: return "ok";
    case SC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SC_ERR_DIMENSION: return "dimension mismatch";
    case SC_ERR_VALIDATION: return "validation failed";
    case SC_ERR_PARSE: return "parse error";
    case SC_ERR_IO: return "i/o error";
    case SC_ERR_CONVERGENCE: return "no convergence";
    case SC_ERR_NUMERICAL: return "numerical breakdown";
    case SC_ERR_UNSUPPORTED_LEVEL: return "unsupported level";
    case SC_ERR_SOLVER_UNKNOWN: return "solver status unknown";
    case SC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sc_solver_config sc_default_config(void) {
  const sdp::SolverConfig d;
  return {d.eps_feas, d.eps_gap, d.max_iters};
}

sc_status sc_assemblage_from_json(const char* text, sc_assemblage** out) {
  SC_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new sc_assemblage{parse_assemblage_json(text)};
    return SC_OK;
  });
}

sc_status sc_assemblage_load(const char* path, sc_assemblage** out) {
  SC_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string text = read_file(path);
    try {
      *out = new sc_assemblage{parse_assemblage_json(text)};
    } catch (const ParseError& e) {
      throw ParseError(std::string(path) + ": " + e.what());
    }
    return SC_OK;
  });
}

sc_status sc_assemblage_fixture(const char* name, sc_assemblage** out) {
  SC_REQUIRE(name && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new sc_assemblage{load_fixture(fixture_from_name(name))};
    return SC_OK;
  });
}

sc_status sc_assemblage_noise(const char* kind, const sc_assemblage* like, sc_assemblage** out) {
  SC_REQUIRE(out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const ScenarioSpec s = like ? like->a.scenario() : ScenarioSpec::uniform(1, 2, 2, {2, 2});
    *out = new sc_assemblage{noise_assemblage(noise_kind(kind), s)};
    return SC_OK;
  });
}

sc_status sc_assemblage_to_json(const sc_assemblage* a, int rational, char** out) {
  SC_REQUIRE(a && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::string s = assemblage_to_json(a->a, rational ? Encoding::Rational : Encoding::Decimal);
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
    return SC_OK;
  });
}

sc_status sc_assemblage_save(const sc_assemblage* a, const char* path, int rational) {
  SC_REQUIRE(a && path, "null argument");
  return guarded([&] {
    write_file(path, assemblage_to_json(a->a, rational ? Encoding::Rational : Encoding::Decimal));
    return SC_OK;
  });
}

size_t sc_assemblage_num_alices(const sc_assemblage* a) { return a ? a->a.scenario().num_alices : 0; }
size_t sc_assemblage_num_bobs(const sc_assemblage* a) { return a ? a->a.scenario().num_bobs : 0; }

void sc_assemblage_free(sc_assemblage* a) { delete a; }

sc_status sc_validate(const sc_assemblage* a, sc_report** out) {
  SC_REQUIRE(a, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const ValidationReport v = validate(a->a);
    r.outcome = v.ok() ? SC_PASS : SC_NEGATIVE;
    r.value = 0.0;
    for (const auto& x : v.violations) r.value = std::max(r.value, x.magnitude);
    r.json = report_json(v);
    if (v.ok()) {
      r.summary = "valid assemblage";
    } else {
      r.summary = "invalid assemblage (" + std::to_string(v.violations.size()) + " violations)";
      const std::size_t shown = std::min<std::size_t>(v.violations.size(), 10);
      for (std::size_t i = 0; i < shown; ++i) {
        const auto& x = v.violations[i];
        r.summary += "\n  " + x.check + " at " + x.where + ": " + fmt("%.3g", x.magnitude);
      }
    }
  });
}

sc_status sc_lambda(const sc_assemblage* a, const sc_solver_config* cfg, sc_report** out) {
  SC_REQUIRE(a, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const auto c = to_config(cfg);
    const LambdaReport l = lambda_relaxation(a->a, c);
    r.value = l.lambda_star;
    r.outcome = l.parent_exists(c.eps_feas) ? SC_PASS : SC_NEGATIVE;
    r.json = report_json(l);
    r.summary = "t* = " + fmt("%.6g", l.lambda_star) +
                (r.outcome == SC_PASS ? " (parent assemblage exists)" : " (no parent assemblage: postquantum)");
  });
}

sc_status sc_certify(const sc_assemblage* a, int npa_level, const sc_solver_config* cfg,
                     sc_report** out) {
  SC_REQUIRE(a, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const CertificationReport c = certify(a->a, npa_level, to_config(cfg));
    r.value = c.lambda.lambda_star;
    switch (c.verdict) {
      case Verdict::QuantumCertified: r.outcome = SC_PASS; break;
      case Verdict::PostquantumCertified: r.outcome = SC_NEGATIVE; break;
      case Verdict::Inconclusive: r.outcome = SC_INCONCLUSIVE; break;
    }
    r.json = report_json(c);
    r.summary = std::string(to_string(c.verdict));
    if (c.failed_condition) r.summary += std::string(" (") + to_string(*c.failed_condition) + ")";
    r.summary += "\n  t* = " + fmt("%.6g", c.lambda.lambda_star);
    if (c.npa)
      r.summary += "\n  NPA level " + std::to_string(c.npa_level_used) + ": " +
                   sdp::to_string(c.npa->status) + " (margin " + fmt("%.3g", c.npa->margin) + ")";
  });
}

sc_status sc_lhs(const sc_assemblage* a, const sc_solver_config* cfg, sc_report** out) {
  SC_REQUIRE(a, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const LhsResult l = lhs_membership(a->a, to_config(cfg));
    r.value = l.margin;
    r.outcome = from_status(l.status);
    r.json = report_json(l);
    switch (r.outcome) {
      case SC_PASS:
        r.summary = "LHS model found (" + std::to_string(l.model->strategies.size()) +
                    " deterministic strategies, residual " + fmt("%.3g", lhs_model_residual(*l.model, a->a)) + ")";
        break;
      case SC_NEGATIVE: r.summary = "no LHS model"; break;
      case SC_INCONCLUSIVE: r.summary = "LHS membership undecided: " + l.diagnostics.message; break;
    }
  });
}

sc_status sc_robustness(const sc_assemblage* a, const sc_assemblage* noise, const char* noise_label,
                        const sc_solver_config* cfg, sc_report** out) {
  SC_REQUIRE(a && noise, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const auto c = to_config(cfg);
    const RobustnessResult rr = robustness(a->a, noise->a, noise_label ? noise_label : "custom", c);
    r.value = rr.r_star;
    r.outcome = rr.r_star > c.eps_feas ? SC_NEGATIVE : SC_PASS;
    r.json = report_json(rr);
    r.summary = "r* = " + fmt("%.6g", rr.r_star) + " against " + rr.noise + " noise";
    if (rr.lower_bound) r.summary += " (lower bound)";
    if (r.outcome == SC_NEGATIVE) r.summary += "; the input has no parent assemblage";
  });
}

sc_status sc_hierarchy(const sc_assemblage* a, int level, const sc_solver_config* cfg, sc_report** out) {
  SC_REQUIRE(a, "null assemblage");
  return make_report(out, [&](sc_report& r) {
    const HierarchyResult h = outer_hierarchy_membership(a->a, level, to_config(cfg));
    r.value = h.margin;
    r.outcome = from_status(h.status);
    r.json = report_json(h);
    r.summary = "level " + std::to_string(level) + " (" + std::to_string(h.monomials) +
                " monomials): " + sdp::to_string(h.status);
  });
}

sc_status sc_chsh(const char* realization_path, sc_report** out) {
  SC_REQUIRE(realization_path, "null path");
  return make_report(out, [&](sc_report& r) {
    const RealizationDocument doc = parse_realization_json(read_file(realization_path));
    if (doc.bob_measurements.empty())
      throw InvalidArgument("chsh: the realisation document has no bob_measurements");
    const BellScenarioData d = correlations_from_realization(doc.realization, doc.bob_measurements);
    if (d.parties.num_alices < 2) throw InvalidArgument("chsh: needs at least two parties");
    // The last two parties (the Bobs of a one-Alice realisation with two Bobs).
    const std::size_t n = d.parties.num_alices;
    const BellScenarioData two = n == 2 ? d : marginal(d, {n - 2, n - 1});
    const ChshValue v = best_chsh(two);
    r.value = v.value;
    r.outcome = v.value > 2.0 + 1e-9 ? SC_PASS : SC_NEGATIVE;
    const BellFunctional f = chsh_functional(v.minus_y1, v.minus_y2);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\n  \"functional\": \"%s\",\n  \"value\": %.17g,\n  \"classical_bound\": %.17g,\n"
                  "  \"minus_sign_at\": [%zu, %zu],\n  \"no_signalling_violation\": %.17g\n}\n",
                  f.label.c_str(), v.value, f.classical_bound, v.minus_y1, v.minus_y2,
                  d.no_signalling_violation());
    r.json = buf;
    r.summary = f.label + " = " + fmt("%.12g", v.value) +
                (r.outcome == SC_PASS ? " (violates the classical bound 2)" : " (within the classical bound 2)");
  });
}

sc_status sc_write_lambda_sdpa(const sc_assemblage* a, const char* path) {
  SC_REQUIRE(a && path, "null argument");
  return guarded([&] {
    const LambdaProblem lp = build_lambda_problem(a->a);
    std::ofstream os(path);
    if (!os) throw IoError(std::string("cannot open '") + path + "' for writing");
    sdp::write_sdpa(lp.problem, os);
    if (!os) throw IoError(std::string("failed writing '") + path + "'");
    return SC_OK;
  });
}

sc_outcome sc_report_outcome(const sc_report* r) { return r ? r->outcome : SC_INCONCLUSIVE; }
double sc_report_value(const sc_report* r) { return r ? r->value : 0.0; }
double sc_report_seconds(const sc_report* r) { return r ? r->seconds : 0.0; }
const char* sc_report_json(const sc_report* r) { return r ? r->json.c_str() : ""; }
const char* sc_report_summary(const sc_report* r) { return r ? r->summary.c_str() : ""; }
void sc_report_free(sc_report* r) { delete r; }

void sc_string_free(char* s) { std::free(s); }

}  // extern "C"
