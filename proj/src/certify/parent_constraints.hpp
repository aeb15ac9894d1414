#pragma once

#include <map>

#include "steercert/model.hpp"
#include "steercert/sdp.hpp"

namespace steercert::detail {

// Summing a parent over Alice j's outcome gives the same operator for every
// setting of Alice j.
inline void add_parent_no_signalling(sdp::ConicProblem& p, const ScenarioSpec& s,
                                     const std::map<ElementKey, sdp::MatrixVar>& parents) {
  const std::size_t D = s.bob_total_dim();
  for (std::size_t j = 0; j < s.num_alices; ++j)
    for (const auto& key : all_keys(s)) {
      if (key.x[j] == 0 || key.a[j] != 0) continue;
      sdp::AffineMatrix diff(D, D);
      for (std::size_t a = 0; a < s.outcomes[j][key.x[j]]; ++a) {
        ElementKey k2 = key;
        k2.a[j] = a;
        diff += p.expr(parents.at(k2));
      }
      for (std::size_t a = 0; a < s.outcomes[j][0]; ++a) {
        ElementKey k2 = key;
        k2.x[j] = 0;
        k2.a[j] = a;
        diff -= p.expr(parents.at(k2));
      }
      p.add_hermitian_equality(diff, CMatrix(D, D));
    }
}

}  // namespace steercert::detail
