#ifndef AUTOCRAT_LP_HPP_
#define AUTOCRAT_LP_HPP_

#include <cstddef>
#include <limits>
#include <vector>

namespace autocrat::lp {

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kPivotTol = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);

// maximize c.x  s.t.  A x (sense) b,  lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t add_variable(double lo = 0.0, double hi = kInf,
                           double cost = 0.0);
  // Sparse convenience: (index, coefficient) pairs.
  void add_constraint(const std::vector<std::pair<std::size_t, double>>& terms,
                      Sense sense, double b);
};

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

// Dense two-phase tableau simplex with Bland's rule. Throws SolverFailure
// when the iteration cap is hit or the final point fails verification.
LpSolution solve_lp(const LinearProgram& lp);

bool feasible(const LinearProgram& lp);

}  // namespace autocrat::lp

#endif  // AUTOCRAT_LP_HPP_
