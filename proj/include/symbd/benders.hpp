#pragma once

#include <vector>

#include "symbd/core.hpp"
#include "symbd/lp.hpp"

namespace symbd {

// Value-function cut for a continuous subproblem
//   phi(x) = min d.y  s.t.  B y (rel) f - C x,  y >= 0.
// The dual multipliers u of the rows give phi(x) >= u.f - (C^T u).x for every
// x, so the cut reads  w >= beta + alpha.x.
struct ClassicalCut {
  double beta = 0.0;
  std::vector<double> alpha;
};

struct SubproblemRow {
  std::vector<double> b;  // coefficients on y
  std::vector<double> c;  // coefficients on x inside the rhs  f - c.x
  Relation rel = Relation::GE;
  double f = 0.0;
};

inline ClassicalCut classical_benders_cut(const std::vector<double>& d,
                                          const std::vector<SubproblemRow>& rows,
                                          const std::vector<double>& xhat) {
  if (rows.empty() || d.empty()) throw Error(ErrorKind::EmptyInput, "empty subproblem");
  LinearProgram lp;
  for (double dj : d) lp.add_var(dj, 0.0, kInf);
  for (const SubproblemRow& r : rows) {
    if (r.b.size() != d.size() || r.c.size() != xhat.size())
      throw Error(ErrorKind::MalformedModel, "subproblem row dimensions disagree");
    LinearRow row;
    for (int j = 0; j < static_cast<int>(r.b.size()); ++j)
      if (r.b[j] != 0.0) row.coeffs.push_back({j, r.b[j]});
    row.rel = r.rel;
    row.rhs = r.f;
    for (int k = 0; k < static_cast<int>(r.c.size()); ++k) row.rhs -= r.c[k] * xhat[k];
    lp.rows.push_back(std::move(row));
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Unbounded)
    throw Error(ErrorKind::SubproblemUnbounded, "value function is unbounded below");
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorKind::MalformedModel, "optimality cut needs a feasible subproblem");
  ClassicalCut cut;
  cut.alpha.assign(xhat.size(), 0.0);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    cut.beta += sol.duals[r] * rows[r].f;
    for (int k = 0; k < static_cast<int>(xhat.size()); ++k)
      cut.alpha[k] -= sol.duals[r] * rows[r].c[k];
  }
  return cut;
}

}  // namespace symbd
