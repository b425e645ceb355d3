#ifndef AUTOCRAT_ENFORCE_HPP_
#define AUTOCRAT_ENFORCE_HPP_

#include <optional>

#include "autocrat/core.hpp"

namespace autocrat {

struct SeparationWitness {
  MixedAction tau_plus;
  MixedAction tau_minus;
  Envelope plus;   // envelope of phi(tau_plus, .)
  Envelope minus;  // envelope of phi(tau_minus, .)
};

SeparationWitness make_witness(const ObjectiveMatrix& phi,
                               const MixedAction& tau_plus,
                               const MixedAction& tau_minus);

struct SeparationResult {
  std::optional<MixedAction> tau_plus;   // maximizes min phi(tau, .)
  std::optional<MixedAction> tau_minus;  // minimizes max phi(tau, .)
  double max_min = 0.0;
  double min_max = 0.0;
};

SeparationResult separation_witnesses(const ObjectiveMatrix& phi);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v, double tol = 1e-9) const {
    return v >= lo - tol && v <= hi + tol;
  }
};

// [min_tau max_s phi, max_tau min_s phi] when nonempty.
std::optional<Interval> enforce_interval(const ObjectiveMatrix& phi);

std::optional<MixedAction> find_trivial(const ObjectiveMatrix& phi);

// Both sides of the two correction inequalities for a candidate pair:
//   min+ >= (1-l) max+ + l max-     and     max- <= l min+ + (1-l) min-.
struct LemmaSides {
  double upper_lhs = 0.0;
  double upper_rhs = 0.0;
  double lower_lhs = 0.0;
  double lower_rhs = 0.0;
  bool holds(double tol = 1e-9) const {
    return upper_lhs >= upper_rhs - tol && lower_lhs <= lower_rhs + tol;
  }
};

LemmaSides lemma_sides(const Envelope& plus, const Envelope& minus,
                       double lambda);

// Smallest lambda in [0,1] at which the pair satisfies both inequalities,
// assuming min+ >= 0 >= max-.
double lambda_bound(const Envelope& plus, const Envelope& minus);

enum class LambdaPath { kTrivial, kPure, kLinearProgram };

struct LambdaMinResult {
  double lambda_min = 1.0;
  SeparationWitness optimizer;
  LambdaPath path = LambdaPath::kLinearProgram;
  bool undiscounted_only = false;
  // Witness satisfies both inequalities at lambda_min (within 1e-10).
  bool certified = false;
  // Witness needs lambda_min + 1e-9 rather than lambda_min itself.
  bool needs_margin = false;
};

// Throws NotEnforceable when either separation set is empty.
LambdaMinResult lambda_min(const ObjectiveMatrix& phi);

std::optional<double> lambda_min_pure(const ObjectiveMatrix& phi);

// Best pure pair under lambda_bound; ties go to the lexicographically
// smallest weight vectors.
std::optional<SeparationWitness> best_pure_pair(const ObjectiveMatrix& phi);

bool is_enforceable(const ObjectiveMatrix& phi, double lambda);

// range(phi_y) / range(phi_x) for additive phi with non-constant phi_x.
std::optional<double> additive_lambda_min(const ObjectiveMatrix& phi);

struct EnforceabilityReport {
  bool phi_plus_nonempty = false;
  bool phi_minus_nonempty = false;
  std::optional<MixedAction> trivial_action;
  std::optional<Interval> interval;
  std::optional<double> lambda_min;
  std::optional<SeparationWitness> optimizer;
  std::optional<double> pure_lambda_min;
  bool undiscounted_only = false;
  bool certified = false;
  bool needs_margin = false;

  bool enforceable() const { return phi_plus_nonempty && phi_minus_nonempty; }
};

EnforceabilityReport analyze(const ObjectiveMatrix& phi);

}  // namespace autocrat

#endif  // AUTOCRAT_ENFORCE_HPP_
