// Scalar moment-matrix relaxation of the quantum set for the Alices'
// correlations.

#include <map>

#include "steercert/certify.hpp"
#include "words.hpp"

namespace steercert {

namespace {

using detail::Letter;
using detail::Word;

double marginal_probability(const ScenarioSpec& s, const std::map<ElementKey, double>& p,
                            const Word& w) {
  // Parties outside w are marginalised at setting 0.
  std::vector<std::size_t> x(s.num_alices, 0);
  for (const Letter& l : w) x[l.party] = l.setting;
  double acc = 0.0;
  for (const auto& a : s.outcome_vectors(x)) {
    bool match = true;
    for (const Letter& l : w) match = match && a[l.party] == l.outcome;
    if (!match) continue;
    auto it = p.find({a, x});
    if (it == p.end()) throw ValidationError("npa_membership: missing probability " + to_string(ElementKey{a, x}));
    acc += it->second;
  }
  return acc;
}

}  // namespace

sdp::ConicProblem build_npa_problem(const ScenarioSpec& parties,
                                    const std::map<ElementKey, double>& p, int level) {
  if (level != 1 && level != 2)
    throw UnsupportedLevel("npa_membership: level " + std::to_string(level) +
                           " is not supported (use 1 or 2)");
  parties.check();
  std::vector<Letter> letters;
  for (std::size_t j = 0; j < parties.num_alices; ++j)
    for (std::size_t x = 0; x < parties.settings[j]; ++x)
      for (std::size_t a = 0; a + 1 < parties.outcomes[j][x]; ++a) letters.push_back({j, x, a});

  // Level L: products of at most L projectors in total.
  const auto mons = detail::monomials(letters, level);
  const std::size_t n = mons.size();

  sdp::ConicProblem prob;
  std::map<Word, std::size_t> free_moments;
  sdp::AffineMatrix gamma(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto w = detail::product(mons[i], mons[j]);
      sdp::LinearForm f;
      if (!w) {
        f = sdp::LinearForm(0.0);
      } else if (detail::is_local_product(*w)) {
        f = sdp::LinearForm(marginal_probability(parties, p, *w));
      } else {
        // Real moment matrices suffice: <w> and <w^dag> are identified.
        const Word key = std::min(*w, detail::adjoint(*w));
        auto it = free_moments.find(key);
        if (it == free_moments.end())
          it = free_moments.emplace(key, prob.add_scalar("m" + std::to_string(free_moments.size()))).first;
        f = prob.scalar(it->second);
      }
      gamma(i, j).re = f;
      gamma(j, i).re = f;
    }
  prob.add_psd(std::move(gamma), "moment matrix");
  return prob;
}

NpaResult npa_membership(const ScenarioSpec& parties, const std::map<ElementKey, double>& p,
                         int level, const sdp::SolverConfig& cfg) {
  const sdp::ConicProblem prob = build_npa_problem(parties, p, level);
  const auto o = sdp::solve(prob, cfg);
  NpaResult r;
  r.status = o.status;
  r.margin = o.margin;
  r.moment_size = prob.psd_constraints().front().expr.rows();
  r.diagnostics = o.diagnostics;
  return r;
}

}  // namespace steercert
