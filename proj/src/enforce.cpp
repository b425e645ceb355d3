#include "autocrat/enforce.hpp"

#include <algorithm>
#include <cmath>

#include "autocrat/lp.hpp"

namespace autocrat {
namespace {

using lp::kInf;
using lp::LinearProgram;
using lp::Sense;
using lp::Status;

double magnitude(const ObjectiveMatrix& phi) {
  double s = 1.0;
  for (const auto& row : phi.matrix()) {
    for (double v : row) s = std::max(s, std::abs(v));
  }
  return s;
}

// Drop LP noise and renormalize a nonnegative vector onto the simplex.
MixedAction to_simplex(std::vector<double> x) {
  double sum = 0.0;
  for (double& v : x) {
    if (v < 1e-9) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) throw SolverFailure("degenerate simplex point from LP");
  for (double& v : x) v /= sum;
  return MixedAction(std::move(x));
}

bool lex_less(const MixedAction& a, const MixedAction& b) {
  return std::lexicographical_compare(a.weights().begin(), a.weights().end(),
                                      b.weights().begin(), b.weights().end());
}

// Adds m simplex variables and returns the index of the first.
std::size_t add_simplex(LinearProgram& prog, std::size_t m) {
  std::size_t first = prog.num_vars();
  std::vector<std::pair<std::size_t, double>> sum;
  for (std::size_t i = 0; i < m; ++i) sum.push_back({prog.add_variable(), 1.0});
  prog.add_constraint(sum, Sense::kEqual, 1.0);
  return first;
}

// Rows lo <= phi(x, s) <= hi for every s, on weights starting at x0.
void add_envelope_rows(LinearProgram& prog, const ObjectiveMatrix& phi,
                       std::size_t x0, std::optional<std::size_t> lo,
                       std::optional<std::size_t> hi) {
  for (std::size_t j = 0; j < phi.cols(); ++j) {
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      terms.push_back({x0 + i, phi(i, j)});
    }
    if (lo) {
      auto row = terms;
      for (auto& t : row) t.second = -t.second;
      row.push_back({*lo, 1.0});
      prog.add_constraint(row, Sense::kLessEqual, 0.0);
    }
    if (hi) {
      auto row = terms;
      row.push_back({*hi, -1.0});
      prog.add_constraint(row, Sense::kLessEqual, 0.0);
    }
  }
}

struct CharnesCooper {
  double value = 0.0;
  double t = 0.0;
  std::vector<double> x_plus;
  std::vector<double> x_minus;
};

// variant 1 fixes w+ - w- = 1, variant 2 fixes z+ - z- = 1.
CharnesCooper solve_charnes_cooper(const ObjectiveMatrix& phi, int variant,
                                   double t_floor) {
  const std::size_t m = phi.rows();
  LinearProgram prog;
  const std::size_t xp = prog.num_vars();
  for (std::size_t i = 0; i < m; ++i) prog.add_variable();
  const std::size_t xm = prog.num_vars();
  for (std::size_t i = 0; i < m; ++i) prog.add_variable();
  const std::size_t zp = prog.add_variable(0.0, kInf, 1.0);
  const std::size_t wp = prog.add_variable(-kInf, kInf);
  const std::size_t zm = prog.add_variable(-kInf, kInf);
  const std::size_t wm = prog.add_variable(-kInf, 0.0, -1.0);
  const std::size_t t = prog.add_variable(t_floor, kInf);

  add_envelope_rows(prog, phi, xp, zp, wp);
  add_envelope_rows(prog, phi, xm, zm, wm);
  std::vector<std::pair<std::size_t, double>> sp{{t, -1.0}}, sm{{t, -1.0}};
  for (std::size_t i = 0; i < m; ++i) {
    sp.push_back({xp + i, 1.0});
    sm.push_back({xm + i, 1.0});
  }
  prog.add_constraint(sp, Sense::kEqual, 0.0);
  prog.add_constraint(sm, Sense::kEqual, 0.0);
  prog.add_constraint({{wp, 1.0}, {wm, -1.0}},
                      variant == 1 ? Sense::kEqual : Sense::kLessEqual, 1.0);
  prog.add_constraint({{zp, 1.0}, {zm, -1.0}},
                      variant == 1 ? Sense::kLessEqual : Sense::kEqual, 1.0);

  const auto sol = lp::solve_lp(prog);
  if (sol.status != Status::kOptimal) {
    throw SolverFailure(std::string("ratio program ended ") +
                        lp::to_string(sol.status));
  }
  CharnesCooper out;
  out.value = sol.objective_value;
  out.t = sol.x[t];
  out.x_plus.assign(sol.x.begin() + xp, sol.x.begin() + xp + m);
  out.x_minus.assign(sol.x.begin() + xm, sol.x.begin() + xm + m);
  return out;
}

// Among pairs whose ratio is at least r, pick the lexicographically
// smallest tau+ and then tau-.
std::optional<std::pair<MixedAction, MixedAction>> lex_smallest_pair(
    const ObjectiveMatrix& phi, double r, double slack) {
  const std::size_t m = phi.rows();
  LinearProgram prog;
  const std::size_t tp = add_simplex(prog, m);
  const std::size_t tm = add_simplex(prog, m);
  const std::size_t zp = prog.add_variable(0.0, kInf);
  const std::size_t wp = prog.add_variable(-kInf, kInf);
  const std::size_t zm = prog.add_variable(-kInf, kInf);
  const std::size_t wm = prog.add_variable(-kInf, 0.0);
  add_envelope_rows(prog, phi, tp, zp, wp);
  add_envelope_rows(prog, phi, tm, zm, wm);
  // (z+ - w-) - r (w+ - w-) >= -slack and (z+ - w-) - r (z+ - z-) >= -slack.
  prog.add_constraint({{zp, 1.0}, {wm, r - 1.0}, {wp, -r}},
                      Sense::kGreaterEqual, -slack);
  prog.add_constraint({{zp, 1.0 - r}, {wm, -1.0}, {zm, r}},
                      Sense::kGreaterEqual, -slack);

  std::vector<double> x;
  for (std::size_t k = 0; k < 2 * m; ++k) {
    const std::size_t var = k < m ? tp + k : tm + (k - m);
    std::fill(prog.objective.begin(), prog.objective.end(), 0.0);
    prog.objective[var] = -1.0;
    const auto sol = lp::solve_lp(prog);
    if (sol.status != Status::kOptimal) return std::nullopt;
    x = sol.x;
    prog.add_constraint({{var, 1.0}}, Sense::kLessEqual, sol.x[var] + 1e-12);
  }
  return std::make_pair(
      to_simplex({x.begin() + tp, x.begin() + tp + m}),
      to_simplex({x.begin() + tm, x.begin() + tm + m}));
}

bool dominance_holds(const ObjectiveMatrix& phi) {
  if (phi.rows() != 2 || phi.cols() != 2) return false;
  const bool left = phi(0, 0) >= phi(0, 1) && phi(1, 0) >= phi(1, 1);
  const bool right = phi(0, 0) <= phi(0, 1) && phi(1, 0) <= phi(1, 1);
  return left || right;
}

}  // namespace

SeparationWitness make_witness(const ObjectiveMatrix& phi,
                               const MixedAction& tau_plus,
                               const MixedAction& tau_minus) {
  return {tau_plus, tau_minus, row_envelope(phi, tau_plus),
          row_envelope(phi, tau_minus)};
}

SeparationResult separation_witnesses(const ObjectiveMatrix& phi) {
  const std::size_t m = phi.rows();
  const double tol = 1e-9 * magnitude(phi);
  SeparationResult out;
  for (int side = 0; side < 2; ++side) {
    LinearProgram prog;
    const std::size_t x0 = add_simplex(prog, m);
    const std::size_t v = prog.add_variable(-kInf, kInf, side == 0 ? 1.0 : -1.0);
    if (side == 0) {
      add_envelope_rows(prog, phi, x0, v, std::nullopt);
    } else {
      add_envelope_rows(prog, phi, x0, std::nullopt, v);
    }
    const auto sol = lp::solve_lp(prog);
    if (sol.status != Status::kOptimal) {
      throw SolverFailure(std::string("matrix-game program ended ") +
                          lp::to_string(sol.status));
    }
    MixedAction tau = to_simplex({sol.x.begin() + x0, sol.x.begin() + x0 + m});
    const Envelope env = row_envelope(phi, tau);
    if (side == 0) {
      out.max_min = env.min;
      if (env.min >= -tol) out.tau_plus = tau;
    } else {
      out.min_max = env.max;
      if (env.max <= tol) out.tau_minus = tau;
    }
  }
  return out;
}

std::optional<Interval> enforce_interval(const ObjectiveMatrix& phi) {
  const auto sep = separation_witnesses(phi);
  if (sep.min_max > sep.max_min + 1e-9 * magnitude(phi)) return std::nullopt;
  return Interval{std::min(sep.min_max, sep.max_min), sep.max_min};
}

std::optional<MixedAction> find_trivial(const ObjectiveMatrix& phi) {
  const std::size_t m = phi.rows();
  LinearProgram prog;
  const std::size_t x0 = add_simplex(prog, m);
  const std::size_t e = prog.add_variable(0.0, kInf, -1.0);
  for (std::size_t j = 0; j < phi.cols(); ++j) {
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t i = 0; i < m; ++i) row.push_back({x0 + i, phi(i, j)});
    auto lower = row;
    row.push_back({e, -1.0});
    lower.push_back({e, 1.0});
    prog.add_constraint(row, Sense::kLessEqual, 0.0);
    prog.add_constraint(lower, Sense::kGreaterEqual, 0.0);
  }
  const auto sol = lp::solve_lp(prog);
  if (sol.status != Status::kOptimal) {
    throw SolverFailure("trivial-action program did not solve");
  }
  MixedAction x = to_simplex({sol.x.begin() + x0, sol.x.begin() + x0 + m});
  const Envelope env = row_envelope(phi, x);
  const double tol = 1e-9 * magnitude(phi);
  if (std::max(std::abs(env.min), std::abs(env.max)) > tol) return std::nullopt;
  return x;
}

LemmaSides lemma_sides(const Envelope& plus, const Envelope& minus,
                       double lambda) {
  return {plus.min, (1.0 - lambda) * plus.max + lambda * minus.max, minus.max,
          lambda * plus.min + (1.0 - lambda) * minus.min};
}

double lambda_bound(const Envelope& plus, const Envelope& minus) {
  const double scale =
      std::max({1.0, std::abs(plus.max), std::abs(minus.min)});
  auto ratio = [scale](double num, double den) {
    if (den <= 1e-15 * scale) return 0.0;
    return num / den;
  };
  const double a = ratio(plus.max - plus.min, plus.max - minus.max);
  const double b = ratio(minus.max - minus.min, plus.min - minus.min);
  return std::clamp(std::max(a, b), 0.0, 1.0);
}

std::optional<SeparationWitness> best_pure_pair(const ObjectiveMatrix& phi) {
  const std::size_t m = phi.rows();
  const double tol = 1e-12 * magnitude(phi);
  std::optional<SeparationWitness> best;
  double best_lambda = 2.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto tp = MixedAction::pure(m, i);
    const Envelope ep = row_envelope(phi, tp);
    if (ep.min < -tol) continue;
    for (std::size_t k = 0; k < m; ++k) {
      const auto tm = MixedAction::pure(m, k);
      const Envelope em = row_envelope(phi, tm);
      if (em.max > tol) continue;
      const double l = lambda_bound(ep, em);
      bool take = !best || l < best_lambda;
      if (best && l == best_lambda) {
        take = lex_less(tp, best->tau_plus) ||
               (tp.weights() == best->tau_plus.weights() &&
                lex_less(tm, best->tau_minus));
      }
      if (take) {
        best = SeparationWitness{tp, tm, ep, em};
        best_lambda = l;
      }
    }
  }
  return best;
}

std::optional<double> lambda_min_pure(const ObjectiveMatrix& phi) {
  const auto pair = best_pure_pair(phi);
  if (!pair) return std::nullopt;
  return lambda_bound(pair->plus, pair->minus);
}

LambdaMinResult lambda_min(const ObjectiveMatrix& phi) {
  const auto sep = separation_witnesses(phi);
  if (!sep.tau_plus || !sep.tau_minus) {
    throw NotEnforceable("no autocratic strategy: a separation set is empty");
  }
  const double scale = magnitude(phi);
  LambdaMinResult out{1.0, make_witness(phi, *sep.tau_plus, *sep.tau_minus)};

  if (auto trivial = find_trivial(phi)) {
    out.lambda_min = 0.0;
    out.optimizer = make_witness(phi, *trivial, *trivial);
    out.path = LambdaPath::kTrivial;
    out.certified = true;
    return out;
  }

  if (dominance_holds(phi)) {
    if (auto pure = best_pure_pair(phi)) {
      out.optimizer = *pure;
      out.lambda_min = lambda_bound(pure->plus, pure->minus);
      out.path = LambdaPath::kPure;
    }
  }
  if (out.path != LambdaPath::kPure) {
    int variant = 1;
    CharnesCooper best = solve_charnes_cooper(phi, 1, 0.0);
    CharnesCooper second = solve_charnes_cooper(phi, 2, 0.0);
    if (second.value > best.value) {
      best = std::move(second);
      variant = 2;
    }
    if (best.t <= 1e-12) best = solve_charnes_cooper(phi, variant, 1e-6);
    const double r = std::clamp(best.value, 0.0, 1.0);
    out.lambda_min = 1.0 - r;
    out.path = LambdaPath::kLinearProgram;
    for (double& v : best.x_plus) v /= best.t;
    for (double& v : best.x_minus) v /= best.t;
    out.optimizer = make_witness(phi, to_simplex(best.x_plus),
                                 to_simplex(best.x_minus));
    if (auto lex = lex_smallest_pair(phi, r, 1e-12 * scale)) {
      auto candidate = make_witness(phi, lex->first, lex->second);
      if (candidate.plus.min >= -1e-9 * scale &&
          candidate.minus.max <= 1e-9 * scale &&
          lambda_bound(candidate.plus, candidate.minus) <=
              lambda_bound(out.optimizer.plus, out.optimizer.minus) + 1e-9) {
        out.optimizer = std::move(candidate);
      }
    }
  }

  const double needed = lambda_bound(out.optimizer.plus, out.optimizer.minus);
  out.certified = needed <= out.lambda_min + 1e-10;
  out.needs_margin = !out.certified && needed <= out.lambda_min + 1e-9;
  if (!out.certified && !out.needs_margin) {
    throw SolverFailure("optimizer pair does not certify the reported lambda_min");
  }

  const double tol = 1e-9 * scale;
  const auto& w = out.optimizer;
  out.undiscounted_only = out.lambda_min >= 1.0 - 1e-12 && w.plus.max > tol &&
                          std::abs(w.plus.min) <= tol &&
                          std::abs(w.minus.max) <= tol && w.minus.min < -tol;
  return out;
}

bool is_enforceable(const ObjectiveMatrix& phi, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidInput("discount factor outside [0,1]");
  }
  const auto sep = separation_witnesses(phi);
  if (!sep.tau_plus || !sep.tau_minus) return false;
  if (lambda == 1.0) return true;
  const auto res = lambda_min(phi);
  if (res.undiscounted_only) return false;
  return lambda >= res.lambda_min - 1e-9;
}

std::optional<double> additive_lambda_min(const ObjectiveMatrix& phi) {
  const auto& add = phi.additive();
  if (!add) return std::nullopt;
  const auto [xlo, xhi] = std::minmax_element(add->phi_x.begin(), add->phi_x.end());
  const auto [ylo, yhi] = std::minmax_element(add->phi_y.begin(), add->phi_y.end());
  const double rx = *xhi - *xlo;
  if (rx <= 1e-12 * magnitude(phi)) return std::nullopt;
  return (*yhi - *ylo) / rx;
}

EnforceabilityReport analyze(const ObjectiveMatrix& phi) {
  EnforceabilityReport rep;
  const auto sep = separation_witnesses(phi);
  rep.phi_plus_nonempty = sep.tau_plus.has_value();
  rep.phi_minus_nonempty = sep.tau_minus.has_value();
  rep.interval = enforce_interval(phi);
  rep.trivial_action = find_trivial(phi);
  rep.pure_lambda_min = lambda_min_pure(phi);
  if (rep.enforceable()) {
    const auto res = lambda_min(phi);
    rep.lambda_min = res.lambda_min;
    rep.optimizer = res.optimizer;
    rep.undiscounted_only = res.undiscounted_only;
    rep.certified = res.certified;
    rep.needs_margin = res.needs_margin;
  }
  return rep;
}

}  // namespace autocrat
