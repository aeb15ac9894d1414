#include <doctest.h>

#include "steercert/certify.hpp"
#include "steercert/construct.hpp"
#include "steercert/robustness.hpp"
#include "support.hpp"

using namespace steercert;
using namespace testing_support;

namespace {

ScenarioSpec two_binary_parties() { return ScenarioSpec::uniform(2, 2, 2, {1}); }

// Isotropic mixture of the PR box with white noise: E(x, y) = v (-1)^{xy}.
std::map<ElementKey, double> noisy_pr(double v) {
  std::map<ElementKey, double> p;
  for (const auto& key : all_keys(two_binary_parties())) {
    const double parity = (key.a[0] ^ key.a[1]) == (key.x[0] & key.x[1]) ? 1.0 : -1.0;
    p[key] = 0.25 * (1.0 + v * parity);
  }
  return p;
}

// Two-qubit Werner state v |Phi+><Phi+| + (1 - v) I/4, Alice measuring X then Z.
Assemblage werner_assemblage(double v) {
  std::vector<cplx> phi = {M_SQRT1_2, 0.0, 0.0, M_SQRT1_2};
  QuantumRealization qr;
  qr.alice_dims = {2};
  qr.bob_dims = {2};
  qr.state = HermitianMatrix(CMatrix::outer(phi) * cplx(v) + CMatrix::identity(4) * cplx((1.0 - v) / 4.0));
  qr.alice_measurements = {plus_minus_then_computational()};
  return from_quantum_realization(qr);
}

}  // namespace

TEST_CASE("NPA: CHSH-symmetric boxes are quantum exactly up to visibility 1/sqrt2") {
  const auto s = two_binary_parties();
  for (int level : {1, 2}) {
    CAPTURE(level);
    CHECK(npa_membership(s, noisy_pr(0.0), level).status == sdp::Status::Feasible);
    CHECK(npa_membership(s, noisy_pr(0.70), level).status == sdp::Status::Feasible);
    CHECK(npa_membership(s, noisy_pr(0.72), level).status == sdp::Status::Infeasible);
    CHECK(npa_membership(s, noisy_pr(1.0), level).status == sdp::Status::Infeasible);
  }
  CHECK_THROWS_AS(npa_membership(s, noisy_pr(0.5), 3), UnsupportedLevel);
}

TEST_CASE("NPA: deterministic points are feasible") {
  ScenarioSpec s = ScenarioSpec::uniform(2, 2, 3, {1});
  std::map<ElementKey, double> p;
  for (const auto& key : all_keys(s)) p[key] = (key.a[0] == key.x[0] && key.a[1] == 2) ? 1.0 : 0.0;
  const auto r = npa_membership(s, p, 1);
  CHECK(r.status == sdp::Status::Feasible);
  CHECK(r.moment_size == 1 + 2 * 2 * 2);
}

TEST_CASE("property: measured quantum assemblages have a parent") {
  Rng rng(51);
  for (int t = 0; t < 12; ++t) {
    const auto qr = random_realization_one_alice(rng);
    const Assemblage a = from_quantum_realization(qr);
    const LambdaReport l = lambda_relaxation(a);
    // The measured state itself is a feasible parent.
    double floor = 1e300;
    for (const auto& [key, m] : quantum_parent(qr)) floor = std::min(floor, min_eigenvalue(m));
    REQUIRE(l.lambda_star >= floor - 1e-7);
    REQUIRE(l.parent_exists(1e-8));
    // Reported parent reproduces the marginals.
    for (const auto& [key, sigma] : l.parent.elements) {
      REQUIRE(min_eigenvalue(sigma) >= l.lambda_star - 1e-6);
      for (std::size_t k = 0; k < qr.bob_dims.size(); ++k) {
        const CMatrix marg = oracle_partial_trace(sigma.matrix(), qr.bob_dims, {k});
        REQUIRE(max_abs_diff(marg, a.element(key, k).matrix()) < 1e-7);
      }
    }
    REQUIRE(certify(a).verdict == Verdict::QuantumCertified);
  }
}

TEST_CASE("lambda: postquantum fixtures have no parent") {
  const LambdaReport l = lambda_relaxation(load_fixture(Fixture::ABB_1));
  CHECK(l.lambda_star < -1e-3);
  const auto c = certify(load_fixture(Fixture::ABB_1));
  CHECK(c.verdict == Verdict::PostquantumCertified);
  REQUIRE(c.failed_condition.has_value());
  CHECK(*c.failed_condition == Condition::Condition2_Parent);
  CHECK(c.npa_level_used == 0);
}

TEST_CASE("lambda problem structure") {
  const auto lp = build_lambda_problem(load_fixture(Fixture::ABB_1));
  CHECK(lp.parents.size() == 4);
  CHECK(lp.problem.psd_constraints().size() == 4);
  CHECK(lp.problem.objective().has_value());
}

TEST_CASE("LHS: Werner steering threshold for two Pauli measurements") {
  CHECK(lhs_membership(werner_assemblage(0.65)).status == sdp::Status::Feasible);
  CHECK(lhs_membership(werner_assemblage(0.75)).status == sdp::Status::Infeasible);
  CHECK(lhs_membership(werner_assemblage(1.0)).status == sdp::Status::Infeasible);
}

TEST_CASE("LHS: returned models reproduce the assemblage") {
  Rng rng(52);
  ScenarioSpec s;
  s.num_alices = 2;
  s.settings = {2, 2};
  s.outcomes = {{2, 3}, {2, 2}};
  s.num_bobs = 2;
  s.bob_dims = {2, 2};
  const Assemblage white = noise_assemblage(NoiseKind::White, s);
  const auto r = lhs_membership(white);
  REQUIRE(r.status == sdp::Status::Feasible);
  REQUIRE(r.model.has_value());
  CHECK(lhs_model_residual(*r.model, white) <= 1e-7);
  double total = 0.0;
  for (double w : r.model->weights) {
    CHECK(w >= -1e-9);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));

  for (double v : {0.2, 0.5}) {
    const auto lw = lhs_membership(werner_assemblage(v));
    REQUIRE(lw.model.has_value());
    CHECK(lhs_model_residual(*lw.model, werner_assemblage(v)) <= 1e-7);
    for (const auto& states : lw.model->bob_states)
      for (const auto& st : states) CHECK(st.trace() == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("deterministic strategies") {
  ScenarioSpec s;
  s.num_alices = 2;
  s.settings = {2, 1};
  s.outcomes = {{2, 3}, {4}};
  s.num_bobs = 1;
  s.bob_dims = {2};
  const auto all = deterministic_strategies(s);
  CHECK(all.size() == 2 * 3 * 4);
  std::set<std::vector<std::size_t>> uniq(all.begin(), all.end());
  CHECK(uniq.size() == all.size());
  // Each strategy picks exactly one outcome vector per setting vector.
  for (const auto& st : all)
    for (const auto& x : s.setting_vectors()) {
      int hits = 0;
      for (const auto& a : s.outcome_vectors(x)) hits += strategy_outputs(s, st, {a, x}) ? 1 : 0;
      REQUIRE(hits == 1);
    }
}

TEST_CASE("outer hierarchy") {
  Rng rng(53);
  for (int t = 0; t < 5; ++t) {
    const auto a = from_quantum_realization(random_realization_one_alice(rng));
    CHECK(outer_hierarchy_membership(a, 1).status == sdp::Status::Feasible);
  }
  CHECK(outer_hierarchy_membership(load_fixture(Fixture::ABB_1), 1).status == sdp::Status::Infeasible);
  CHECK(outer_hierarchy_membership(load_fixture(Fixture::ABB_PQNL), 1).status == sdp::Status::Feasible);
  CHECK_THROWS_AS(outer_hierarchy_membership(load_fixture(Fixture::ABB_1), 2), UnsupportedLevel);
}

TEST_CASE("robustness: zero for quantum inputs, consistent with lambda otherwise") {
  const Assemblage abb = load_fixture(Fixture::ABB_1);
  const Assemblage white = noise_assemblage(NoiseKind::White, abb.scenario());
  const auto ghz = noise_assemblage(NoiseKind::GHZ, abb.scenario());
  CHECK(robustness(ghz, white, "white").r_star < 1e-7);

  const auto r = robustness(abb, NoiseKind::White);
  CHECK_FALSE(r.lower_bound);
  CHECK(r.noise == "white");
  // Just above r* the mixture has a parent; well below it it does not.
  CHECK(lambda_relaxation(mix(white, abb, r.r_star + 1e-5)).lambda_star >= -1e-8);
  CHECK(lambda_relaxation(mix(white, abb, 0.8 * r.r_star)).lambda_star < -1e-5);
  // Noise that has no parent itself is refused.
  CHECK_THROWS_AS(robustness(ghz, abb, "abb1"), InvalidArgument);
  CHECK_THROWS_AS(mix(white, abb, 1.5), InvalidArgument);
}
