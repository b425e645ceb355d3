#include "autocrat/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "autocrat/core.hpp"

namespace autocrat::lp {
namespace {

// Original variable j is offset + sum(coef * y[k]) over its terms.
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> terms;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * (cols_ + 1) + c];
  }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) {
        at(r, c) -= f * at(pr, c);
        if (std::abs(at(r, c)) < 1e-14) at(r, c) = 0.0;
      }
      at(r, pc) = 0.0;
      if (rhs(r) < 0.0 && rhs(r) > -1e-12) rhs(r) = 0.0;
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class Phase { kOptimal, kUnbounded };

// Maximizes cost . v over the current basic feasible tableau.
Phase run_simplex(Tableau& tab, const std::vector<double>& cost,
                  const std::vector<bool>& allowed, std::size_t max_iter,
                  std::size_t& iterations) {
  const std::size_t R = tab.rows();
  const std::size_t C = tab.cols();
  std::vector<bool> in_basis(C);
  while (true) {
    std::fill(in_basis.begin(), in_basis.end(), false);
    for (std::size_t r = 0; r < R; ++r) in_basis[tab.basis()[r]] = true;

    // Bland: lowest-index improving column.
    std::size_t enter = C;
    for (std::size_t j = 0; j < C; ++j) {
      if (in_basis[j] || !allowed[j]) continue;
      double d = cost[j];
      for (std::size_t r = 0; r < R; ++r) d -= cost[tab.basis()[r]] * tab.at(r, j);
      if (d > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == C) return Phase::kOptimal;

    std::size_t leave = R;
    double best = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const double a = tab.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab.rhs(r) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best));
      if (leave == R || ratio < best - tie) {
        leave = r;
        best = ratio;
      } else if (ratio <= best + tie && tab.basis()[r] < tab.basis()[leave]) {
        leave = r;
        best = std::min(best, ratio);
      }
    }
    if (leave == R) return Phase::kUnbounded;

    if (++iterations > max_iter) {
      throw SolverFailure("simplex iteration limit exceeded");
    }
    tab.pivot(leave, enter);
  }
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

std::size_t LinearProgram::add_variable(double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (auto& row : rows) row.push_back(0.0);
  return objective.size() - 1;
}

void LinearProgram::add_constraint(
    const std::vector<std::pair<std::size_t, double>>& terms, Sense sense,
    double b) {
  std::vector<double> row(num_vars(), 0.0);
  for (const auto& [j, a] : terms) {
    if (j >= num_vars()) throw InvalidInput("constraint references unknown variable");
    row[j] += a;
  }
  rows.push_back(std::move(row));
  senses.push_back(sense);
  rhs.push_back(b);
}

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  if (lp.lower.size() != n || lp.upper.size() != n ||
      lp.senses.size() != lp.rows.size() || lp.rhs.size() != lp.rows.size()) {
    throw InvalidInput("linear program dimension mismatch");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw InvalidInput("linear program dimension mismatch");
    for (double a : row) {
      if (!std::isfinite(a)) throw InvalidInput("non-finite constraint coefficient");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) throw InvalidInput("non-finite objective");
    if (std::isnan(lp.lower[j]) || std::isnan(lp.upper[j]) ||
        lp.lower[j] == kInf || lp.upper[j] == -kInf) {
      throw InvalidInput("invalid variable bound");
    }
  }

  // Shift and split variables so that every internal variable is >= 0.
  std::vector<VarMap> vars(n);
  std::size_t ny = 0;
  std::vector<std::pair<std::vector<double>, double>> le_rows;  // g.y <= h
  std::vector<std::pair<std::size_t, double>> upper_rows;        // y_k <= h
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (std::isfinite(lo)) {
      vars[j].offset = lo;
      vars[j].terms.push_back({ny, 1.0});
      if (std::isfinite(hi)) upper_rows.push_back({ny, hi - lo});
      ++ny;
    } else if (std::isfinite(hi)) {
      vars[j].offset = hi;
      vars[j].terms.push_back({ny++, -1.0});
    } else {
      vars[j].terms.push_back({ny++, 1.0});
      vars[j].terms.push_back({ny++, -1.0});
    }
  }

  auto transform = [&](const std::vector<double>& a, double b) {
    std::vector<double> g(ny, 0.0);
    double h = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == 0.0) continue;
      h -= a[j] * vars[j].offset;
      for (const auto& [k, c] : vars[j].terms) g[k] += a[j] * c;
    }
    return std::make_pair(std::move(g), h);
  };
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    auto [g, h] = transform(lp.rows[i], lp.rhs[i]);
    if (lp.senses[i] != Sense::kGreaterEqual) le_rows.push_back({g, h});
    if (lp.senses[i] != Sense::kLessEqual) {
      for (double& v : g) v = -v;
      le_rows.push_back({std::move(g), -h});
    }
  }
  for (const auto& [k, h] : upper_rows) {
    std::vector<double> g(ny, 0.0);
    g[k] = 1.0;
    le_rows.push_back({std::move(g), h});
  }

  const std::size_t R = le_rows.size();
  std::size_t n_art = 0;
  for (const auto& row : le_rows) n_art += row.second < 0.0 ? 1 : 0;
  const std::size_t C = ny + R + n_art;
  Tableau tab(R, C);
  std::vector<bool> is_art(C, false);
  std::size_t next_art = ny + R;
  double scale = 1.0;
  for (std::size_t r = 0; r < R; ++r) {
    const auto& [g, h] = le_rows[r];
    scale = std::max(scale, std::abs(h));
    const double sign = h < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < ny; ++k) tab.at(r, k) = sign * g[k];
    tab.at(r, ny + r) = sign;
    tab.rhs(r) = sign * h;
    if (h < 0.0) {
      tab.at(r, next_art) = 1.0;
      is_art[next_art] = true;
      tab.basis()[r] = next_art++;
    } else {
      tab.basis()[r] = ny + r;
    }
  }

  const std::size_t max_iter = 10 * (R + C) * (R + C);
  LpSolution sol;
  std::vector<bool> allowed(C, true);

  if (n_art > 0) {
    std::vector<double> cost(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) cost[c] = is_art[c] ? -1.0 : 0.0;
    run_simplex(tab, cost, allowed, max_iter, sol.iterations);
    double infeas = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      if (is_art[tab.basis()[r]]) infeas += tab.rhs(r);
    }
    if (infeas > kFeasTol * scale) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out where a real column can replace them.
    for (std::size_t r = 0; r < R; ++r) {
      if (!is_art[tab.basis()[r]]) continue;
      for (std::size_t c = 0; c < C; ++c) {
        if (!is_art[c] && std::abs(tab.at(r, c)) > kPivotTol) {
          tab.pivot(r, c);
          break;
        }
      }
    }
    for (std::size_t c = 0; c < C; ++c) allowed[c] = !is_art[c];
  }

  std::vector<double> cost(C, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [k, c] : vars[j].terms) cost[k] += lp.objective[j] * c;
  }
  if (run_simplex(tab, cost, allowed, max_iter, sol.iterations) ==
      Phase::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  std::vector<double> y(C, 0.0);
  for (std::size_t r = 0; r < R; ++r) y[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
  sol.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = vars[j].offset;
    for (const auto& [k, c] : vars[j].terms) v += c * y[k];
    sol.x[j] = std::clamp(v, lp.lower[j], lp.upper[j]);
  }

  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0.0;
    double mag = std::max(1.0, std::abs(lp.rhs[i]));
    for (std::size_t j = 0; j < n; ++j) {
      lhs += lp.rows[i][j] * sol.x[j];
      mag = std::max(mag, std::abs(lp.rows[i][j] * sol.x[j]));
    }
    const double tol = kFeasTol * mag;
    const double d = lhs - lp.rhs[i];
    const bool ok = (lp.senses[i] == Sense::kLessEqual && d <= tol) ||
                    (lp.senses[i] == Sense::kGreaterEqual && d >= -tol) ||
                    (lp.senses[i] == Sense::kEqual && std::abs(d) <= tol);
    if (!ok) {
      throw SolverFailure("simplex solution violates constraint " +
                          std::to_string(i) + " by " + std::to_string(d));
    }
  }
  sol.status = Status::kOptimal;
  for (std::size_t j = 0; j < n; ++j) {
    sol.objective_value += lp.objective[j] * sol.x[j];
  }
  return sol;
}

bool feasible(const LinearProgram& lp) {
  LinearProgram copy = lp;
  std::fill(copy.objective.begin(), copy.objective.end(), 0.0);
  return solve_lp(copy).status == Status::kOptimal;
}

}  // namespace autocrat::lp
