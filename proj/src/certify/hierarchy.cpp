// Level 1 of the operator-valued moment hierarchy: one D x D block per pair
// of monomials, where D is the composite Bob dimension.

#include <map>

#include "steercert/certify.hpp"
#include "words.hpp"

namespace steercert {

namespace {

using detail::Letter;
using detail::Word;
using sdp::AffineMatrix;

// sum over the outcomes of Alices outside w (at setting 0) of sigma^(k).
CMatrix assemblage_marginal(const Assemblage& asm_, const Word& w, std::size_t k) {
  const auto& s = asm_.scenario();
  std::vector<std::size_t> x(s.num_alices, 0);
  for (const Letter& l : w) x[l.party] = l.setting;
  CMatrix acc(s.bob_dims[k], s.bob_dims[k]);
  for (const auto& a : s.outcome_vectors(x)) {
    bool match = true;
    for (const Letter& l : w) match = match && a[l.party] == l.outcome;
    if (match) acc += asm_.element({a, x}, k).matrix();
  }
  return acc;
}

}  // namespace

HierarchyResult outer_hierarchy_membership(const Assemblage& asm_, int level,
                                           const sdp::SolverConfig& cfg) {
  if (level != 1)
    throw UnsupportedLevel("outer_hierarchy_membership: level " + std::to_string(level) +
                           " is not supported (only level 1)");
  asm_.require_complete();
  const auto& s = asm_.scenario();
  const std::size_t D = s.bob_total_dim();
  const DimVector bdims = s.bob_dim_vector();

  // Monomials: identity and every product of at most one projector per Alice
  // (the last outcome of each setting is implied by completeness).
  std::vector<Word> mons{Word{}};
  for (std::size_t j = 0; j < s.num_alices; ++j) {
    const std::size_t count = mons.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t x = 0; x < s.settings[j]; ++x)
        for (std::size_t a = 0; a + 1 < s.outcomes[j][x]; ++a) {
          Word w = mons[i];
          w.push_back({j, x, a});
          mons.push_back(w);
        }
  }
  const std::size_t n = mons.size();

  sdp::ConicProblem p;
  std::map<Word, sdp::MatrixVar> blocks;  // keyed by the representative of {w, w^dag}
  auto block_for = [&](const Word& w) -> AffineMatrix {
    const Word adj = detail::adjoint(w);
    const Word rep = std::min(w, adj);
    auto it = blocks.find(rep);
    if (it == blocks.end()) {
      const std::string name = "G" + std::to_string(blocks.size());
      const auto var = rep == adj ? p.add_hermitian(name, D) : p.add_complex(name, D, D);
      it = blocks.emplace(rep, var).first;
    }
    const AffineMatrix& e = p.expr(it->second);
    return w == rep ? e : e.adjoint();
  };

  std::vector<std::vector<AffineMatrix>> grid(n, std::vector<AffineMatrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto w = detail::product(mons[i], mons[j]);
      grid[i][j] = w ? block_for(*w) : AffineMatrix(D, D);
      if (j != i) grid[j][i] = grid[i][j].adjoint();
    }
  p.add_psd(AffineMatrix::from_blocks(grid), "moment matrix");

  // Blocks of local products are parent elements and must reproduce the
  // assemblage on every Bob.
  for (const auto& [w, var] : blocks) {
    if (!detail::is_local_product(w)) continue;
    const AffineMatrix& e = p.expr(var);
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      const CMatrix target = assemblage_marginal(asm_, w, k);
      if (s.num_bobs == 1) {
        p.add_hermitian_equality(e, target);
      } else {
        p.add_hermitian_equality(e.partial_trace(bdims, {k}), target);
      }
    }
  }

  const auto o = sdp::solve(p, cfg);
  HierarchyResult r;
  r.status = o.status;
  r.margin = o.margin;
  r.monomials = n;
  r.diagnostics = o.diagnostics;
  return r;
}

}  // namespace steercert
