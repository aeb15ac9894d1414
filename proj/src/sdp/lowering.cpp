#include "lowering.hpp"

#include <map>

namespace steercert::sdp::detail {

namespace {

struct BlockBuilder {
  int dim;
  Eigen::MatrixXd g0;
  std::map<int, SparseSym> vars;

  explicit BlockBuilder(int n) : dim(n), g0(Eigen::MatrixXd::Zero(n, n)) {}

  void add(int r, int c, const LinearForm& f, double sign = 1.0) {
    g0(r, c) += sign * f.constant;
    for (const auto& [k, v] : f.terms) {
      auto& s = vars[static_cast<int>(k)];
      s.var = static_cast<int>(k);
      s.rows.push_back(r);
      s.cols.push_back(c);
      s.vals.push_back(sign * v);
    }
  }

  LoweredBlock finish(int source, bool embedded) {
    LoweredBlock b;
    b.dim = dim;
    b.g0 = std::move(g0);
    b.source = source;
    b.embedded = embedded;
    b.vars.reserve(vars.size());
    for (auto& [k, s] : vars) b.vars.push_back(std::move(s));
    return b;
  }
};

bool needs_embedding(const AffineMatrix& e) {
  for (std::size_t i = 0; i < e.rows(); ++i)
    for (std::size_t j = i + 1; j < e.cols(); ++j)
      if (!e(i, j).im.terms.empty() || e(i, j).im.constant != 0.0) return true;
  return false;
}

}  // namespace

LoweredProblem lower(const ConicProblem& p, bool feasibility_mode) {
  LoweredProblem out;
  out.num_unknowns = static_cast<int>(p.num_unknowns());
  if (feasibility_mode) out.slack = out.num_unknowns++;

  const auto& psd = p.psd_constraints();
  for (std::size_t idx = 0; idx < psd.size(); ++idx) {
    const AffineMatrix& e = psd[idx].expr;
    const int d = static_cast<int>(e.rows());
    const bool embed = needs_embedding(e);
    BlockBuilder bb(embed ? 2 * d : d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        // Hermitian completion from the upper triangle.
        const bool upper = i <= j;
        const ComplexForm& f = upper ? e(i, j) : e(j, i);
        const double im_sign = upper ? 1.0 : -1.0;
        bb.add(i, j, f.re);
        if (embed) {
          bb.add(i + d, j + d, f.re);
          if (i != j) {
            bb.add(i + d, j, f.im, im_sign);
            bb.add(i, j + d, f.im, -im_sign);
          }
        }
      }
    if (feasibility_mode) {
      LinearForm minus_t = LinearForm::variable(static_cast<std::size_t>(out.slack), -1.0);
      for (int i = 0; i < bb.dim; ++i) bb.add(i, i, minus_t);
    }
    out.blocks.push_back(bb.finish(static_cast<int>(idx), embed));
  }

  out.c = Eigen::VectorXd::Zero(out.num_unknowns);
  if (feasibility_mode) {
    BlockBuilder cap(1);
    LinearForm f(1.0);
    f.terms.emplace_back(static_cast<std::size_t>(out.slack), -1.0);
    cap.add(0, 0, f);
    out.blocks.push_back(cap.finish(-1, false));
    out.c(out.slack) = -1.0;
    out.maximize = true;
  } else if (p.objective()) {
    const auto& obj = *p.objective();
    const double s = obj.sense == Sense::Maximize ? -1.0 : 1.0;
    for (const auto& [k, v] : obj.f.terms) out.c(static_cast<Eigen::Index>(k)) += s * v;
    out.c0 = s * obj.f.constant;
    out.maximize = obj.sense == Sense::Maximize;
  }
  out.equalities = p.equalities();
  return out;
}

}  // namespace steercert::sdp::detail
