#include <doctest.h>

#include <filesystem>

#include "steercert/bell.hpp"
#include "steercert/construct.hpp"
#include "steercert/io.hpp"
#include "support.hpp"

using namespace steercert;
using namespace testing_support;

TEST_CASE("CHSH on the maximally mixed realisation") {
  const auto qr = maximally_mixed_realization();
  const auto d = correlations_from_realization(qr, tsirelson_bob_measurements());
  CHECK(d.no_signalling_violation() < 1e-12);
  CHECK(d.normalisation_violation() < 1e-12);
  const auto bobs = marginal(d, {1, 2});
  const auto best = best_chsh(bobs);
  CHECK(best.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  // With Psi+ the usual sign pattern is not the violated one.
  CHECK(std::abs(evaluate(chsh_functional(), bobs)) < 1e-12);
  CHECK(evaluate(chsh_functional(1, 0), bobs) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  // Alice's outcome is an independent fair coin.
  for (const auto& [key, v] : d.p) {
    const ElementKey bk{{key.a[1], key.a[2]}, {key.x[1], key.x[2]}};
    REQUIRE(std::abs(v - 0.5 * bobs.p.at(bk)) < 1e-12);
  }
}

TEST_CASE("property: quantum correlations never exceed Tsirelson's bound") {
  Rng rng(61);
  for (int t = 0; t < 40; ++t) {
    QuantumRealization qr;
    qr.alice_dims = {2};
    qr.bob_dims = {2, 2};
    qr.state = random_density(rng, 8, pick(rng, 1, 3));
    qr.alice_measurements = {random_measurements(rng, 2, {2, 2})};
    const std::vector<MeasurementSet> bm = {random_measurements(rng, 2, {2, 2}),
                                            random_measurements(rng, 2, {2, 2})};
    const auto d = correlations_from_realization(qr, bm);
    REQUIRE(d.min_probability() >= -1e-12);
    REQUIRE(d.no_signalling_violation() < 1e-12);
    REQUIRE(best_chsh(marginal(d, {1, 2})).value <= 2.0 * std::sqrt(2.0) + 1e-9);
  }
}

TEST_CASE("bell input checks") {
  const auto qr = maximally_mixed_realization();
  CHECK_THROWS_AS(correlations_from_realization(qr, {tsirelson_bob_measurements()[0]}), DimensionError);
  CHECK_THROWS_AS(chsh_functional(2, 0), InvalidArgument);
  const auto d = correlations_from_realization(qr, tsirelson_bob_measurements());
  CHECK_THROWS_AS(evaluate(chsh_functional(), d), InvalidArgument);
  CHECK_THROWS_AS(marginal(d, {3}), InvalidArgument);
}

TEST_CASE("rational JSON round trip is bit exact") {
  Rng rng(62);
  std::vector<Assemblage> all = {load_fixture(Fixture::ABB_1), load_fixture(Fixture::ABB_PTP_1), pr_assemblage()};
  for (int t = 0; t < 5; ++t) all.push_back(from_quantum_realization(random_realization_one_alice(rng)));
  for (const auto& a : all) {
    const Assemblage b = parse_assemblage_json(assemblage_to_json(a, Encoding::Rational));
    REQUIRE(b.scenario() == a.scenario());
    for (const auto& [key, bobs] : a.elements())
      for (std::size_t k = 0; k < bobs.size(); ++k) REQUIRE(b.element(key, k).matrix() == bobs[k].matrix());
    // Decimal output is 17 significant digits, also exact for doubles.
    const Assemblage c = parse_assemblage_json(assemblage_to_json(a, Encoding::Decimal));
    for (const auto& [key, bobs] : a.elements())
      for (std::size_t k = 0; k < bobs.size(); ++k) REQUIRE(c.element(key, k).matrix() == bobs[k].matrix());
  }
}

TEST_CASE("parse errors name the line or field") {
  auto message = [](const std::string& text) {
    try {
      parse_assemblage_json(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n\"format_version\": \"1\",\n\"scenario\": }").find("line 3") != std::string::npos);
  CHECK(message(R"({"format_version": "2"})").find("format version") != std::string::npos);
  CHECK(message(R"({"format_version": "1"})").find("missing field 'scenario'") != std::string::npos);

  std::string good = assemblage_to_json(pr_assemblage());
  auto patched = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
  };
  CHECK(message(patched("\"1/4\"", "\"1/x\"")).find("$.elements[") != std::string::npos);
  CHECK(message(patched("\"1/4\"", "true")).find("].bobs[") != std::string::npos);
  CHECK(message(patched("\"num_bobs\": 2", "\"num_bobs\": -2")).find("$.scenario.num_bobs") != std::string::npos);
  CHECK(message(patched("\"a\": [0, 0]", "\"a\": [0, 1]")).find("duplicate element") != std::string::npos);
}

TEST_CASE("realisation documents") {
  RealizationDocument doc{maximally_mixed_realization(), tsirelson_bob_measurements()};
  const auto back = parse_realization_json(realization_to_json(doc));
  CHECK(back.realization.state.matrix() == doc.realization.state.matrix());
  CHECK(back.bob_measurements.size() == 2);
  CHECK(best_chsh(marginal(correlations_from_realization(back.realization, back.bob_measurements), {1, 2})).value ==
        doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(parse_realization_json(R"({"format_version": "1", "alice_dims": [2]})"), ParseError);
}

TEST_CASE("reports are deterministic") {
  const auto a = load_fixture(Fixture::ABB_1);
  const std::string r1 = report_json(lambda_relaxation(a));
  const std::string r2 = report_json(lambda_relaxation(a));
  CHECK(r1 == r2);
  CHECK(r1.find("\"lambda_star\": -0.0018") != std::string::npos);
  CHECK(report_json(validate(a)).find("\"valid\": true") != std::string::npos);
}

TEST_CASE("file helpers") {
  const auto path = std::filesystem::temp_directory_path() / "steercert_io_test.json";
  write_file(path.string(), assemblage_to_json(pr_assemblage()));
  CHECK(parse_assemblage_json(read_file(path.string())).scenario().num_alices == 2);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_file(path.string()), IoError);
}
