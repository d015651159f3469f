#ifndef SUBJFAIR_TESTS_SUPPORT_LP_H_
#define SUBJFAIR_TESTS_SUPPORT_LP_H_

#include <vector>

namespace subjfair::testing {

// minimize c.x  s.t.  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
};

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

// Dense two-phase tableau simplex with Bland's rule. Assumes a bounded
// objective.
LpSolution SolveLp(const LinearProgram& lp);

}  // namespace subjfair::testing

#endif  // SUBJFAIR_TESTS_SUPPORT_LP_H_
