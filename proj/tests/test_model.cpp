#include <doctest.h>

#include "steercert/construct.hpp"
#include "steercert/model.hpp"
#include "support.hpp"

using namespace steercert;
using namespace testing_support;

namespace {

Assemblage replace_element(const Assemblage& a, const ElementKey& key, std::size_t bob, const CMatrix& m) {
  auto e = a.elements();
  e.at(key).at(bob) = HermitianMatrix(m);
  return Assemblage(a.scenario(), std::move(e));
}

}  // namespace

TEST_CASE("scenario enumeration order") {
  ScenarioSpec s;
  s.num_alices = 2;
  s.settings = {2, 3};
  s.outcomes = {{2, 3}, {2, 2, 4}};
  s.num_bobs = 1;
  s.bob_dims = {2};
  s.check();
  const auto xs = s.setting_vectors();
  REQUIRE(xs.size() == 6);
  CHECK(xs[0] == std::vector<std::size_t>{0, 0});
  CHECK(xs[1] == std::vector<std::size_t>{0, 1});
  CHECK(xs[3] == std::vector<std::size_t>{1, 0});
  const auto as = s.outcome_vectors({1, 2});
  CHECK(as.size() == 12);
  CHECK(as[1] == std::vector<std::size_t>{0, 1});
  CHECK(all_keys(s).size() == 2 * 2 + 2 * 2 + 2 * 4 + 3 * 2 + 3 * 2 + 3 * 4);
  CHECK(s.bob_total_dim() == 2);
}

TEST_CASE("scenario consistency errors") {
  ScenarioSpec s = ScenarioSpec::uniform(2, 2, 2, {2});
  s.settings = {2};
  CHECK_THROWS_AS(s.check(), InvalidArgument);
  s = ScenarioSpec::uniform(1, 2, 2, {2, 0});
  CHECK_THROWS_AS(s.check(), InvalidArgument);
  s = ScenarioSpec::uniform(1, 2, 2, {2});
  s.outcomes = {{2}};
  CHECK_THROWS_AS(s.check(), InvalidArgument);
}

TEST_CASE("assemblage construction rejects bad keys and shapes") {
  const ScenarioSpec s = ScenarioSpec::uniform(1, 2, 2, {2});
  Assemblage::Elements e;
  e[{{2}, {0}}] = {HermitianMatrix::identity(2)};
  CHECK_THROWS_AS(Assemblage(s, e), DimensionError);
  e.clear();
  e[{{0}, {0}}] = {HermitianMatrix::identity(3)};
  CHECK_THROWS_AS(Assemblage(s, e), DimensionError);
  e.clear();
  e[{{0}, {0}}] = {HermitianMatrix::identity(2).scaled(0.25)};
  const Assemblage partial(s, e);
  CHECK(partial.missing_keys().size() == 3);
  CHECK_THROWS_AS(partial.require_complete(), ValidationError);
  CHECK_THROWS_AS(validate(partial), ValidationError);
}

TEST_CASE("property: measured quantum assemblages validate") {
  Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const auto qr = random_realization_one_alice(rng);
    const Assemblage a = from_quantum_realization(qr);
    const auto rep = validate(a);
    REQUIRE(rep.ok());
    // Bob marginals are the reduced states of rho.
    std::vector<std::size_t> dims = qr.alice_dims;
    dims.insert(dims.end(), qr.bob_dims.begin(), qr.bob_dims.end());
    for (std::size_t k = 0; k < qr.bob_dims.size(); ++k) {
      const CMatrix expect = oracle_partial_trace(qr.state.matrix(), dims, {k + 1});
      REQUIRE(max_abs_diff(bob_reduced_state(a, k).matrix(), expect) < 1e-10);
    }
  }
}

TEST_CASE("property: joint probabilities match the direct trace") {
  Rng rng(22);
  for (int t = 0; t < 60; ++t) {
    const auto qr = random_realization_one_alice(rng);
    const Assemblage a = from_quantum_realization(qr);
    const auto p = joint_probabilities(a);
    for (const auto& x : a.scenario().setting_vectors()) {
      double total = 0.0;
      for (const auto& av : a.scenario().outcome_vectors(x)) {
        const ElementKey key{av, x};
        REQUIRE(std::abs(p.at(key) - oracle_probability(qr, key)) < 1e-12);
        total += p.at(key);
      }
      REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("validation detects each kind of violation") {
  Rng rng(23);
  QuantumRealization qr;
  qr.alice_dims = {2};
  qr.bob_dims = {2, 2};
  qr.state = random_density(rng, 8);
  qr.alice_measurements = {plus_minus_then_computational()};
  const Assemblage a = from_quantum_realization(qr);
  REQUIRE(validate(a).ok());
  const ElementKey k00{{0}, {0}};

  SUBCASE("bob consistency") {
    // Traceless shift: only the x-independence of the Bob marginal breaks.
    const CMatrix shifted = a.element(k00, 0).matrix() + pauli::X() * cplx(1e-4);
    const auto rep = validate(replace_element(a, k00, 0, shifted));
    CHECK(!rep.ok());
    CHECK(rep.worst("bob_consistency") == doctest::Approx(1e-4));
    CHECK(rep.worst("normalisation") == 0.0);
  }
  SUBCASE("trace agreement and normalisation") {
    const CMatrix bigger = a.element(k00, 1).matrix() * cplx(1.5);
    const auto rep = validate(replace_element(a, k00, 1, bigger));
    CHECK(rep.worst("trace_agreement") > 1e-3);
  }
  SUBCASE("psd") {
    const CMatrix neg = a.element(k00, 0).matrix() - CMatrix::identity(2) * cplx(1.0);
    const auto rep = validate(replace_element(a, k00, 0, neg));
    CHECK(rep.worst("psd") > 0.1);
  }
}

TEST_CASE("two-Alice no-signalling is checked per Alice") {
  const Assemblage pr = pr_assemblage();
  REQUIRE(validate(pr).ok());
  // Signalling box: p(a1 a2 | x1 x2) = [a1 = x2][a2 = 0].
  const ScenarioSpec s = pr.scenario();
  Assemblage::Elements e;
  for (const auto& key : all_keys(s)) {
    const double p = (key.a[0] == key.x[1] && key.a[1] == 0) ? 1.0 : 0.0;
    std::vector<HermitianMatrix> bobs;
    for (std::size_t d : s.bob_dims) bobs.push_back(HermitianMatrix::identity(d).scaled(p / d));
    e.emplace(key, std::move(bobs));
  }
  const auto rep = validate(Assemblage(s, std::move(e)));
  CHECK(rep.worst("no_signalling") == doctest::Approx(0.5));  // entrywise, elements are p I/2
  CHECK(rep.worst("bob_consistency") == 0.0);
}

TEST_CASE("measurement sets") {
  CHECK_NOTHROW(plus_minus_then_computational());
  std::vector<std::vector<HermitianMatrix>> incomplete = {
      {HermitianMatrix(CMatrix{{1.0, 0.0}, {0.0, 0.0}})}};
  CHECK_THROWS_AS(MeasurementSet(incomplete, 1e-10), ValidationError);
  std::vector<std::vector<HermitianMatrix>> nonpsd = {
      {HermitianMatrix(CMatrix{{2.0, 0.0}, {0.0, 0.0}}), HermitianMatrix(CMatrix{{-1.0, 0.0}, {0.0, 1.0}})}};
  CHECK_THROWS_AS(MeasurementSet(nonpsd, 1e-10), ValidationError);
  const auto m = MeasurementSet::from_bases({CMatrix::identity(3)});
  CHECK(m.num_outcomes(0) == 3);
  CHECK(m.dim() == 3);
}

TEST_CASE("conditional states") {
  const Assemblage pr = pr_assemblage();
  const auto c = conditional_state(pr, {{0, 0}, {1, 1}}, 0);
  CHECK_FALSE(c.has_value());
  const auto d = conditional_state(pr, {{0, 1}, {1, 1}}, 1);
  REQUIRE(d.has_value());
  CHECK(d->trace() == doctest::Approx(1.0));
}
