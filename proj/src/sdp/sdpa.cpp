// SDPA sparse format: minimise c.x subject to sum_i F_i x_i - F_0 PSD.
// Our lowered blocks read S = G0 + sum u_j G_j, so F_0 = -G0 and F_j = G_j.
// Equalities e_r(u) = 0 are written as the 2-entry diagonal pairs
// (e_r, -e_r) in one trailing LP block.

#include <iomanip>
#include <ostream>

#include "lowering.hpp"

namespace steercert::sdp {

void write_sdpa(const ConicProblem& p, std::ostream& os) {
  const bool feasibility = !p.objective().has_value();
  const auto lp = detail::lower(p, feasibility);
  const int m = lp.num_unknowns;
  const int neq = static_cast<int>(lp.equalities.size());
  const int nblocks = static_cast<int>(lp.blocks.size()) + (neq > 0 ? 1 : 0);

  os << std::setprecision(17);
  os << "\"steercert lowered problem: " << lp.blocks.size() << " PSD blocks, " << neq
     << " equalities\"\n";
  os << m << "\n" << nblocks << "\n";
  for (const auto& b : lp.blocks) os << b.dim << ' ';
  if (neq > 0) os << -2 * neq;
  os << "\n";
  for (int j = 0; j < m; ++j) os << lp.c(j) << (j + 1 < m ? ' ' : '\n');
  if (m == 0) os << "\n";

  for (std::size_t bi = 0; bi < lp.blocks.size(); ++bi) {
    const auto& b = lp.blocks[bi];
    for (int r = 0; r < b.dim; ++r)
      for (int c = r; c < b.dim; ++c)
        if (b.g0(r, c) != 0.0)
          os << 0 << ' ' << bi + 1 << ' ' << r + 1 << ' ' << c + 1 << ' ' << -b.g0(r, c) << '\n';
    for (const auto& g : b.vars)
      for (std::size_t k = 0; k < g.vals.size(); ++k)
        if (g.rows[k] <= g.cols[k] && g.vals[k] != 0.0)
          os << g.var + 1 << ' ' << bi + 1 << ' ' << g.rows[k] + 1 << ' ' << g.cols[k] + 1 << ' '
             << g.vals[k] << '\n';
  }
  if (neq > 0) {
    const std::size_t lpb = lp.blocks.size() + 1;
    for (int r = 0; r < neq; ++r) {
      auto f = lp.equalities[r];
      f.compress();
      const int i1 = 2 * r + 1;
      const int i2 = 2 * r + 2;
      if (f.constant != 0.0) {
        os << 0 << ' ' << lpb << ' ' << i1 << ' ' << i1 << ' ' << -f.constant << '\n';
        os << 0 << ' ' << lpb << ' ' << i2 << ' ' << i2 << ' ' << f.constant << '\n';
      }
      for (const auto& [k, v] : f.terms) {
        os << k + 1 << ' ' << lpb << ' ' << i1 << ' ' << i1 << ' ' << v << '\n';
        os << k + 1 << ' ' << lpb << ' ' << i2 << ' ' << i2 << ' ' << -v << '\n';
      }
    }
  }
}

}  // namespace steercert::sdp
