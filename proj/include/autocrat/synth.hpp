#ifndef AUTOCRAT_SYNTH_HPP_
#define AUTOCRAT_SYNTH_HPP_

#include <functional>
#include <span>

#include "autocrat/core.hpp"

namespace autocrat {

enum class Mode { kDiscounted, kUndiscounted };

const char* to_string(Mode mode);

// State is the weight p on tau_plus; play is p*tau_plus + (1-p)*tau_minus.
// The response is affine in p, so it is stored by its values at p=0 and p=1.
class TwoPointStrategy {
 public:
  TwoPointStrategy(MixedAction tau_plus, MixedAction tau_minus, double psi_plus,
                   double psi_minus, double p0, double lambda, double k,
                   Mode mode, std::vector<double> at_zero,
                   std::vector<double> at_one);

  const MixedAction& tau_plus() const { return tau_plus_; }
  const MixedAction& tau_minus() const { return tau_minus_; }
  double psi_plus() const { return psi_plus_; }
  double psi_minus() const { return psi_minus_; }
  double gap() const { return psi_plus_ - psi_minus_; }
  double p0() const { return p0_; }
  double lambda() const { return lambda_; }
  double k() const { return k_; }
  Mode mode() const { return mode_; }
  const std::vector<double>& at_zero() const { return at_zero_; }
  const std::vector<double>& at_one() const { return at_one_; }
  std::size_t opponent_actions() const { return at_zero_.size(); }

  double respond(double p, std::size_t s_y) const;
  MixedAction mixed(double p) const;
  MixedAction initial() const { return mixed(p0_); }
  // Potential on the segment: psi_minus + p * gap.
  double potential(double p) const { return psi_minus_ + p * gap(); }
  // Weights p_0 .. p_T along an opponent history of length T.
  std::vector<double> chain(std::span<const std::size_t> history) const;

 private:
  MixedAction tau_plus_;
  MixedAction tau_minus_;
  double psi_plus_;
  double psi_minus_;
  double p0_;
  double lambda_;
  double k_;
  Mode mode_;
  std::vector<double> at_zero_;
  std::vector<double> at_one_;
};

// A two-point strategy with no enforcement claim (potentials zero).
TwoPointStrategy make_behavioral(MixedAction tau_plus, MixedAction tau_minus,
                                 double p0, std::vector<double> at_zero,
                                 std::vector<double> at_one, double lambda);

// Next weight on tau_plus solving the correction condition for one
// opponent action; phi_plus = phi(tau_plus, s), phi_minus = phi(tau_minus, s).
double correction_response(double phi_plus, double phi_minus, double p,
                           double k, double lambda, double gap, double p0);

TwoPointStrategy synthesize_two_point(const ObjectiveMatrix& phi, double lambda,
                                      const MixedAction& tau_plus,
                                      const MixedAction& tau_minus,
                                      double k = 0.0);

TwoPointStrategy synthesize_undiscounted(const ObjectiveMatrix& phi,
                                         const MixedAction& tau_plus,
                                         const MixedAction& tau_minus,
                                         double k = 0.0, double p0 = 0.5);

struct ReactiveStrategy {
  MixedAction sigma0;
  std::vector<double> response;  // weight on tau_plus after each s_y
  double p0_lo = 0.0;
  double p0_hi = 0.0;
  TwoPointStrategy chain;  // the same strategy in two-point form
};

ReactiveStrategy synthesize_reactive(const ObjectiveMatrix& phi, double lambda,
                                     const MixedAction& tau_plus,
                                     const MixedAction& tau_minus,
                                     double k = 0.0);

struct CorrectionCheck {
  bool ok = true;
  double worst = 0.0;  // largest absolute residual
  double p = 0.0;      // where it occurred
  std::size_t s_y = 0;
  explicit operator bool() const { return ok; }
};

// Checks phi(tau_p, s) - K = Psi(p) - lambda Psi(p*) - (1-lambda) Psi(p0)
// at p in {0,1} for every s, within 1e-9.
CorrectionCheck verify_correction_condition(const TwoPointStrategy& strategy,
                                            const ObjectiveMatrix& phi,
                                            double lambda);

using HistoryMap = std::function<MixedAction(std::span<const std::size_t>)>;

// -lambda^-T * sum_{t<T} lambda^t phi(tau_t, s_t) along the strategy's chain.
double reconstruct_potential(const HistoryMap& strategy,
                             const ObjectiveMatrix& phi, double lambda,
                             std::span<const std::size_t> history);
double reconstruct_potential(const TwoPointStrategy& strategy,
                             const ObjectiveMatrix& phi, double lambda,
                             std::span<const std::size_t> history);

// (1-q)*s1 + q*s2 in initial weight, response, potentials and K.
TwoPointStrategy combine_convex(const TwoPointStrategy& s1,
                                const TwoPointStrategy& s2, double q);

}  // namespace autocrat

#endif  // AUTOCRAT_SYNTH_HPP_
