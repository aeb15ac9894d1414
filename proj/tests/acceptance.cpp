// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "steercert/bell.hpp"
#include "steercert/certify.hpp"
#include "steercert/construct.hpp"
#include "steercert/robustness.hpp"
#include "support.hpp"

using namespace steercert;
using namespace testing_support;

namespace {

constexpr double kEpsFeas = 1e-8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %2d %s: %s -- %s\n", n, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

Outcome lambda_reproduction() {
  const double t1 = lambda_relaxation(load_fixture(Fixture::ABB_1)).lambda_star;
  const double t2 = lambda_relaxation(load_fixture(Fixture::ABB_PTP_1)).lambda_star;
  const bool ok1 = std::abs(t1 - (-0.00185)) <= 0.25 * 0.00185;
  const bool ok2 = std::abs(t2 - (-1.04e-4)) <= 5e-5;
  const bool pq = certify(load_fixture(Fixture::ABB_1)).verdict == Verdict::PostquantumCertified &&
                  certify(load_fixture(Fixture::ABB_PTP_1)).verdict == Verdict::PostquantumCertified;
  return {ok1 && ok2 && t1 < -kEpsFeas && t2 < -kEpsFeas && pq,
          "ABB_1 t* = " + fmt("%.6g", t1) + " (target -0.00185 +-25%), ABB_PTP_1 t* = " + fmt("%.6g", t2) +
              " (target -1.04e-4 +- 5e-5), both PostquantumCertified: " + (pq ? "yes" : "no")};
}

Outcome quantum_feasibility() {
  const auto t0 = Clock::now();
  const auto r = certify(load_fixture(Fixture::ABB_PQNL));
  const double dt = seconds_since(t0);
  const bool ok = r.verdict == Verdict::QuantumCertified && r.lambda.lambda_star >= -1e-8 && dt < 5.0;
  return {ok, std::string("verdict ") + to_string(r.verdict) + ", t* = " + fmt("%.6g", r.lambda.lambda_star) +
                  ", " + fmt("%.3f s", dt) + " (limit 5 s)"};
}

Outcome robustness_values() {
  const Assemblage abb = load_fixture(Fixture::ABB_1);
  const double rw = robustness(abb, NoiseKind::White).r_star;
  const double rg = robustness(abb, NoiseKind::GHZ).r_star;
  const double rW = robustness(abb, NoiseKind::W).r_star;
  const double rp = robustness(load_fixture(Fixture::ABB_PTP_1), NoiseKind::White).r_star;
  const bool ok = std::abs(rw - 0.0147) <= 0.002 && std::abs(rg - 0.0167) <= 0.002 &&
                  std::abs(rW - 0.0139) <= 0.002 && rW < rw && rw < rg && std::abs(rp - 0.0017) <= 0.0005;
  return {ok, "ABB_1 r^w = " + fmt("%.5f", rw) + ", r^GHZ = " + fmt("%.5f", rg) + ", r^W = " + fmt("%.5f", rW) +
                  " (ordering W < w < GHZ: " + (rW < rw && rw < rg ? "yes" : "no") + "), ABB_PTP_1 r^w = " +
                  fmt("%.5f", rp)};
}

Outcome pr_pipeline() {
  const Assemblage pr = pr_assemblage();
  const double t = lambda_relaxation(pr).lambda_star;
  const auto npa = npa_membership(pr.scenario(), joint_probabilities(pr), 1);
  const auto c = certify(pr, 1);
  const bool ok = t >= -kEpsFeas && npa.status == sdp::Status::Infeasible &&
                  c.verdict == Verdict::PostquantumCertified && c.failed_condition == Condition::Condition1_NPA;
  return {ok, "t* = " + fmt("%.3g", t) + ", NPA level 1 " + sdp::to_string(npa.status) + ", verdict " +
                  to_string(c.verdict) + (c.failed_condition ? std::string(" via ") + to_string(*c.failed_condition) : "")};
}

Outcome chsh() {
  const auto qr = maximally_mixed_realization();
  const auto d = correlations_from_realization(qr, tsirelson_bob_measurements());
  const auto bobs = marginal(d, {1, 2});
  // With Psi+ and these Bob settings the violated sign pattern has its minus
  // at y = (1, 0); the usual pattern gives 0. Same inequality after
  // relabelling Bob 1's Z outcomes.
  const double v = evaluate(chsh_functional(1, 0), bobs);
  const double standard = evaluate(chsh_functional(), bobs);
  double fact = 0.0;
  for (const auto& [key, p] : d.p) {
    const ElementKey bk{{key.a[1], key.a[2]}, {key.x[1], key.x[2]}};
    fact = std::max(fact, std::abs(p - 0.5 * bobs.p.at(bk)));
  }
  const Assemblage mm = from_quantum_realization(qr);
  double quarter = 0.0;
  for (const auto& [key, els] : mm.elements())
    for (const auto& e : els) quarter = std::max(quarter, max_abs_diff(e.matrix(), CMatrix::identity(2) * cplx(0.25)));
  const auto lhs = lhs_membership(mm);
  const bool ok = std::abs(v - 2.0 * std::sqrt(2.0)) <= 1e-9 && fact <= 1e-10 && quarter <= 1e-15 &&
                  lhs.status == sdp::Status::Feasible;
  return {ok, "CHSH (minus sign at y=(1,0); the usual y=(1,1) pattern gives " + fmt("%.2g", standard) +
                  " for this realisation) = " + fmt("%.12f", v) + ", max |p(ab|xy) - p(b|y)/2| = " + fmt("%.2g", fact) +
                  ", all-I/4 assemblage LHS: " + sdp::to_string(lhs.status)};
}

Outcome generator_exactness() {
  auto diag = [](Rational a, Rational b) {
    QMatrix m(2, 2);
    m(0, 0) = QComplex(a);
    m(1, 1) = QComplex(b);
    return m;
  };
  auto sym = [](Rational a, Rational b, Rational c) {
    QMatrix m(2, 2);
    m(0, 0) = QComplex(a);
    m(0, 1) = QComplex(b);
    m(1, 0) = QComplex(b);
    m(1, 1) = QComplex(c);
    return m;
  };
  const Rational h = Rational(1) / 2, q = Rational(1) / 4, t = Rational(1) / 3, s = Rational(1) / 6;
  const std::map<ElementKey, QMatrix> ghz = {{{{0}, {0}}, diag(h, 0)},
                                             {{{1}, {0}}, diag(0, h)},
                                             {{{0}, {1}}, diag(q, q)},
                                             {{{1}, {1}}, diag(q, q)}};
  const std::map<ElementKey, QMatrix> w = {{{{0}, {0}}, diag(t, t)},
                                           {{{1}, {0}}, diag(t, 0)},
                                           {{{0}, {1}}, sym(t, s, s)},
                                           {{{1}, {1}}, sym(t, -s, s)}};
  bool exact = true;
  double fl = 0.0;
  for (const auto& [real, expect] : {std::pair{ghz_realization_exact(), ghz}, std::pair{w_realization_exact(), w}}) {
    const auto e = exact_from_quantum_realization(real);
    const Assemblage f = from_quantum_realization(real.to_realization());
    for (const auto& [key, m] : expect)
      for (std::size_t k = 0; k < 2; ++k) {
        exact = exact && e.at(key).at(k) == m;
        fl = std::max(fl, max_abs_diff(f.element(key, k).matrix(), to_cmatrix(m)));
      }
  }
  return {exact && fl <= 1e-12,
          std::string("rational comparison ") + (exact ? "exact (0 error)" : "MISMATCH") +
              ", floating-point max error " + fmt("%.2g", fl)};
}

Outcome positive_map() {
  Rng rng(7001);
  const auto m = PositiveMapSpec::reduction_transpose(x_tensor_y());
  double trace_err = 0.0, min_eig = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const auto rho = random_density(rng, 4, pick(rng, 1, 4));
    const CMatrix out = apply_positive_map(m, rho.matrix());
    trace_err = std::max(trace_err, std::abs(out.trace() - rho.matrix().trace()));
    min_eig = std::min(min_eig, min_eigenvalue(HermitianMatrix(out)));
  }
  // Marginal commutation: map the global state, measure, reduce; compare with
  // the map applied to the measured marginal.
  double comm = 0.0;
  const std::vector<PositiveMapSpec> maps = {PositiveMapSpec::identity(2), m};
  for (int i = 0; i < 100; ++i) {
    const auto rho = random_density(rng, 16, pick(rng, 1, 16));
    const auto meas = random_measurements(rng, 2, {2, 2});
    const CMatrix mapped = apply_local_map(m, rho.matrix(), DimVector{2, 2, 4}, 2);
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t a = 0; a < 2; ++a) {
        const CMatrix measured = kron(meas.op(x, a).matrix(), CMatrix::identity(8)) * rho.matrix();
        const CMatrix measured_mapped = kron(meas.op(x, a).matrix(), CMatrix::identity(8)) * mapped;
        const CMatrix lhs = oracle_partial_trace(measured_mapped, {2, 2, 4}, {2});
        const CMatrix rhs = apply_positive_map(m, oracle_partial_trace(measured, {2, 2, 4}, {2}));
        comm = std::max(comm, max_abs_diff(lhs, rhs));
      }
  }
  return {trace_err <= 1e-12 && min_eig >= -1e-10 && comm <= 1e-10,
          "max trace error " + fmt("%.2g", trace_err) + ", min eigenvalue over 1000 states " + fmt("%.3g", min_eig) +
              ", marginal-commutation error over 100 instances " + fmt("%.2g", comm)};
}

Outcome hierarchy_nesting() {
  Rng rng(8001);
  int feasible = 0, nested = 0;
  for (int i = 0; i < 50; ++i) {
    const Assemblage a = from_quantum_realization(random_realization_one_alice(rng));
    const auto h = outer_hierarchy_membership(a, 1);
    if (h.status == sdp::Status::Feasible) {
      ++feasible;
      if (lambda_relaxation(a).lambda_star >= -kEpsFeas) ++nested;
    }
  }
  const auto h1 = outer_hierarchy_membership(load_fixture(Fixture::ABB_1), 1).status;
  const auto h2 = outer_hierarchy_membership(pr_assemblage(), 1).status;
  const bool ok = feasible == 50 && nested == feasible && h1 == sdp::Status::Infeasible &&
                  h2 == sdp::Status::Infeasible;
  return {ok, std::to_string(feasible) + "/50 random quantum assemblages Q1-feasible, " + std::to_string(nested) +
                  " of them with t* >= -eps; ABB_1 " + sdp::to_string(h1) + ", PR " + sdp::to_string(h2)};
}

Outcome oracle_equivalence() {
  Rng rng(9001);
  double kron_err = 0.0, pt_err = 0.0, jp_err = 0.0;
  for (int i = 0; i < 500; ++i) {
    const CMatrix a = ginibre(rng, pick(rng, 1, 4), pick(rng, 1, 4));
    const CMatrix b = ginibre(rng, pick(rng, 1, 4), pick(rng, 1, 4));
    kron_err = std::max(kron_err, max_abs_diff(kron(a, b), oracle_kron(a, b)));

    std::vector<std::size_t> dims(pick(rng, 1, 4));
    for (auto& d : dims) d = pick(rng, 1, 3);
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    const CMatrix m = ginibre(rng, n, n);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < dims.size(); ++k)
      if (pick(rng, 0, 1)) keep.push_back(k);
    if (keep.empty()) keep.push_back(0);
    pt_err = std::max(pt_err, max_abs_diff(partial_trace(m, DimVector(dims), std::span<const std::size_t>(keep)),
                                           oracle_partial_trace(m, dims, keep)));

    const auto qr = random_realization_one_alice(rng);
    for (const auto& [key, p] : joint_probabilities(from_quantum_realization(qr)))
      jp_err = std::max(jp_err, std::abs(p - oracle_probability(qr, key)));
  }
  // LHS models, whenever returned, must reproduce the assemblage.
  int models = 0, good = 0;
  for (int i = 0; i < 30; ++i) {
    const Assemblage q = from_quantum_realization(random_realization_one_alice(rng));
    const Assemblage a = mix(noise_assemblage(NoiseKind::White, q.scenario()), q,
                             std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const auto r = lhs_membership(a);
    if (r.model) {
      ++models;
      if (lhs_model_residual(*r.model, a) <= 1e-7) ++good;
    }
  }
  const bool ok = kron_err <= 1e-10 && pt_err <= 1e-10 && jp_err <= 1e-10 && models > 0 && good == models;
  return {ok, "500 instances each: kron " + fmt("%.2g", kron_err) + ", partial_trace " + fmt("%.2g", pt_err) +
                  ", joint_probabilities " + fmt("%.2g", jp_err) + "; LHS models " + std::to_string(good) + "/" +
                  std::to_string(models) + " with residual <= 1e-7"};
}

Outcome two_alice_pipeline() {
  // The AABB_PTP reference numbers come from random states that were never
  // recorded, so only the construction and the pipeline are checked.
  Rng rng(10001);
  int valid = 0, finished = 0;
  double slowest = 0.0;
  std::map<std::string, int> verdicts;
  for (int i = 0; i < 20; ++i) {
    const auto t0 = Clock::now();
    const Assemblage a = two_alice_ptp_construction(HermitianMatrix(CMatrix::outer(random_pure_vector(rng, 32))));
    if (validate(a).ok()) ++valid;
    const auto r = certify(a, 1);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    if (dt < 60.0) ++finished;
    ++verdicts[to_string(r.verdict)];
  }
  std::string tally;
  for (const auto& [v, n] : verdicts) tally += (tally.empty() ? "" : ", ") + v + " x" + std::to_string(n);
  return {valid == 20 && finished == 20,
          std::to_string(valid) + "/20 valid, " + std::to_string(finished) + "/20 certified under 60 s (slowest " +
              fmt("%.1f s", slowest) + "); verdicts: " + tally +
              ". AABB_PTP_1/2 reference values not reproduced (states not recorded)"};
}

}  // namespace

int main() {
  criterion(1, "lambda reproduction", lambda_reproduction);
  criterion(2, "quantum feasibility of ABB_PQNL", quantum_feasibility);
  criterion(3, "robustness to noise", robustness_values);
  criterion(4, "PR pipeline", pr_pipeline);
  criterion(5, "CHSH from an LHS assemblage", chsh);
  criterion(6, "generator exactness (GHZ, W)", generator_exactness);
  criterion(7, "positive-map properties", positive_map);
  criterion(8, "hierarchy nesting", hierarchy_nesting);
  criterion(9, "oracle equivalence", oracle_equivalence);
  criterion(10, "two-Alice construction pipeline", two_alice_pipeline);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
