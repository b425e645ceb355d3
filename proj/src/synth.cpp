#include "autocrat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "autocrat/enforce.hpp"

namespace autocrat {
namespace {

constexpr double kRangeTol = 1e-9;
constexpr double kDegenerateGap = 1e-12;

double magnitude(const ObjectiveMatrix& phi) {
  double s = 1.0;
  for (const auto& row : phi.matrix()) {
    for (double v : row) s = std::max(s, std::abs(v));
  }
  return s;
}

double unit_clamp(double v, const char* what) {
  if (!std::isfinite(v) || v < -kRangeTol || v > 1.0 + kRangeTol) {
    throw NotEnforceable(std::string(what) + " leaves [0,1]: " +
                         std::to_string(v));
  }
  return std::clamp(v, 0.0, 1.0);
}

void check_pair(const ObjectiveMatrix& phi, const MixedAction& tau_plus,
                const MixedAction& tau_minus) {
  if (tau_plus.size() != phi.rows() || tau_minus.size() != phi.rows()) {
    throw InvalidInput("mixed action size does not match objective rows");
  }
}

}  // namespace

const char* to_string(Mode mode) {
  return mode == Mode::kDiscounted ? "discounted" : "undiscounted";
}

TwoPointStrategy::TwoPointStrategy(MixedAction tau_plus, MixedAction tau_minus,
                                   double psi_plus, double psi_minus, double p0,
                                   double lambda, double k, Mode mode,
                                   std::vector<double> at_zero,
                                   std::vector<double> at_one)
    : tau_plus_(std::move(tau_plus)),
      tau_minus_(std::move(tau_minus)),
      psi_plus_(psi_plus),
      psi_minus_(psi_minus),
      p0_(p0),
      lambda_(lambda),
      k_(k),
      mode_(mode),
      at_zero_(std::move(at_zero)),
      at_one_(std::move(at_one)) {
  if (tau_plus_.size() != tau_minus_.size()) {
    throw InvalidInput("tau_plus and tau_minus differ in size");
  }
  if (at_zero_.empty() || at_zero_.size() != at_one_.size()) {
    throw InvalidInput("response table is empty or ragged");
  }
  if (!std::isfinite(psi_plus_) || !std::isfinite(psi_minus_) ||
      !std::isfinite(k_)) {
    throw InvalidInput("non-finite strategy parameter");
  }
  if (psi_plus_ < psi_minus_ - 1e-12) throw InvalidInput("psi_plus < psi_minus");
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) {
    throw InvalidInput("discount factor outside [0,1]");
  }
  if (!(p0_ >= 0.0 && p0_ <= 1.0)) throw InvalidInput("p0 outside [0,1]");
  for (auto* table : {&at_zero_, &at_one_}) {
    for (double& v : *table) {
      if (!std::isfinite(v) || v < -kRangeTol || v > 1.0 + kRangeTol) {
        throw InvalidInput("response weight outside [0,1]");
      }
      v = std::clamp(v, 0.0, 1.0);
    }
  }
}

double TwoPointStrategy::respond(double p, std::size_t s_y) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("weight p outside [0,1]");
  if (s_y >= at_zero_.size()) throw InvalidInput("opponent action out of range");
  const double v = at_zero_[s_y] + p * (at_one_[s_y] - at_zero_[s_y]);
  return std::clamp(v, 0.0, 1.0);
}

MixedAction TwoPointStrategy::mixed(double p) const {
  return MixedAction::mix(tau_plus_, tau_minus_, p);
}

std::vector<double> TwoPointStrategy::chain(
    std::span<const std::size_t> history) const {
  std::vector<double> p{p0_};
  p.reserve(history.size() + 1);
  for (std::size_t s : history) p.push_back(respond(p.back(), s));
  return p;
}

TwoPointStrategy make_behavioral(MixedAction tau_plus, MixedAction tau_minus,
                                 double p0, std::vector<double> at_zero,
                                 std::vector<double> at_one, double lambda) {
  return TwoPointStrategy(std::move(tau_plus), std::move(tau_minus), 0.0, 0.0,
                          p0, lambda, 0.0, Mode::kDiscounted,
                          std::move(at_zero), std::move(at_one));
}

double correction_response(double phi_plus, double phi_minus, double p,
                           double k, double lambda, double gap, double p0) {
  return (k - p * phi_plus - (1.0 - p) * phi_minus) / (lambda * gap) +
         (p - (1.0 - lambda) * p0) / lambda;
}

TwoPointStrategy synthesize_two_point(const ObjectiveMatrix& phi, double lambda,
                                      const MixedAction& tau_plus,
                                      const MixedAction& tau_minus, double k) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw InvalidInput("discounted synthesis needs lambda in [0,1)");
  }
  check_pair(phi, tau_plus, tau_minus);
  const double tol = 1e-9 * magnitude(phi);
  const Envelope ep = row_envelope(phi, tau_plus);
  const Envelope em = row_envelope(phi, tau_minus);
  if (k < em.max - tol || k > ep.min + tol) {
    throw NotEnforceable("K lies outside [max phi(tau-), min phi(tau+)]");
  }
  const Envelope sp{ep.min - k, ep.max - k};
  const Envelope sm{em.min - k, em.max - k};
  if (!lemma_sides(sp, sm, lambda).holds(tol)) {
    throw NotEnforceable("pair violates the correction inequalities at lambda");
  }

  const double psi_plus = ep.min / (1.0 - lambda);
  const double psi_minus = em.max / (1.0 - lambda);
  const double gap = psi_plus - psi_minus;
  const std::size_t n = phi.cols();
  if (gap < kDegenerateGap) {
    return TwoPointStrategy(tau_plus, tau_minus, psi_plus,
                            std::min(psi_minus, psi_plus), 1.0, lambda, k,
                            Mode::kDiscounted, std::vector<double>(n, 1.0),
                            std::vector<double>(n, 1.0));
  }
  const double p0 = unit_clamp((k - em.max) / (ep.min - em.max), "p0");
  std::vector<double> at_zero(n, p0), at_one(n, p0);
  if (lambda > 0.0) {
    const auto fp = eval_row(phi, tau_plus);
    const auto fm = eval_row(phi, tau_minus);
    for (std::size_t s = 0; s < n; ++s) {
      at_zero[s] = unit_clamp(
          correction_response(fp[s], fm[s], 0.0, k, lambda, gap, p0), "response");
      at_one[s] = unit_clamp(
          correction_response(fp[s], fm[s], 1.0, k, lambda, gap, p0), "response");
    }
  }
  return TwoPointStrategy(tau_plus, tau_minus, psi_plus, psi_minus, p0, lambda,
                          k, Mode::kDiscounted, std::move(at_zero),
                          std::move(at_one));
}

TwoPointStrategy synthesize_undiscounted(const ObjectiveMatrix& phi,
                                         const MixedAction& tau_plus,
                                         const MixedAction& tau_minus, double k,
                                         double p0) {
  check_pair(phi, tau_plus, tau_minus);
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw InvalidInput("p0 outside [0,1]");
  const double tol = 1e-9 * magnitude(phi);
  const Envelope ep = row_envelope(phi, tau_plus);
  const Envelope em = row_envelope(phi, tau_minus);
  if (ep.min < k - tol) throw NotEnforceable("tau_plus is not in the upper separation set");
  if (em.max > k + tol) throw NotEnforceable("tau_minus is not in the lower separation set");

  const double psi_plus = std::max({ep.max - k, k - em.min, 0.0});
  const std::size_t n = phi.cols();
  if (psi_plus < kDegenerateGap) {
    return TwoPointStrategy(tau_plus, tau_minus, 0.0, 0.0, 1.0, 1.0, k,
                            Mode::kUndiscounted, std::vector<double>(n, 1.0),
                            std::vector<double>(n, 1.0));
  }
  const auto fp = eval_row(phi, tau_plus);
  const auto fm = eval_row(phi, tau_minus);
  std::vector<double> at_zero(n), at_one(n);
  for (std::size_t s = 0; s < n; ++s) {
    at_zero[s] = unit_clamp(
        correction_response(fp[s], fm[s], 0.0, k, 1.0, psi_plus, p0), "response");
    at_one[s] = unit_clamp(
        correction_response(fp[s], fm[s], 1.0, k, 1.0, psi_plus, p0), "response");
  }
  return TwoPointStrategy(tau_plus, tau_minus, psi_plus, 0.0, p0, 1.0, k,
                          Mode::kUndiscounted, std::move(at_zero),
                          std::move(at_one));
}

ReactiveStrategy synthesize_reactive(const ObjectiveMatrix& phi, double lambda,
                                     const MixedAction& tau_plus,
                                     const MixedAction& tau_minus, double k) {
  const auto& add = phi.additive();
  if (!add) throw InvalidInput("reactive synthesis needs an additive objective");
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw InvalidInput("reactive synthesis needs lambda in [0,1)");
  }
  check_pair(phi, tau_plus, tau_minus);
  const double tol = 1e-9 * magnitude(phi);

  double xp = 0.0, xm = 0.0;
  for (std::size_t i = 0; i < phi.rows(); ++i) {
    xp += tau_plus[i] * add->phi_x[i];
    xm += tau_minus[i] * add->phi_x[i];
  }
  const auto [ylo, yhi] = std::minmax_element(add->phi_y.begin(), add->phi_y.end());
  if (k < xm + *yhi - tol || k > xp + *ylo + tol) {
    throw NotEnforceable("K lies outside the range reachable by the pair");
  }
  const Envelope sp{xp + *ylo - k, xp + *yhi - k};
  const Envelope sm{xm + *ylo - k, xm + *yhi - k};
  if (!lemma_sides(sp, sm, lambda).holds(tol)) {
    throw NotEnforceable("pair violates the correction inequalities at lambda");
  }

  const std::size_t n = phi.cols();
  const double d = xp - xm;
  if (d < kDegenerateGap) {
    auto chain = TwoPointStrategy(tau_plus, tau_minus, xp, std::min(xm, xp), 1.0,
                                  lambda, k, Mode::kDiscounted,
                                  std::vector<double>(n, 1.0),
                                  std::vector<double>(n, 1.0));
    return {tau_plus, std::vector<double>(n, 1.0), 1.0, 1.0, std::move(chain)};
  }

  const double base = (k - xm) / ((1.0 - lambda) * d);
  const double lo = std::max(base - *ylo / ((1.0 - lambda) * d) -
                                 lambda / (1.0 - lambda),
                             0.0);
  const double hi = std::min(base - *yhi / ((1.0 - lambda) * d), 1.0);
  if (lo > hi + 1e-12) {
    throw NotEnforceable("empty initial-weight interval; lambda is below lambda_min");
  }
  const double p0 = std::clamp(0.5 * (lo + hi), 0.0, 1.0);

  std::vector<double> response(n, p0);
  if (lambda > 0.0) {
    for (std::size_t s = 0; s < n; ++s) {
      response[s] = unit_clamp((k - xm - add->phi_y[s]) / (lambda * d) -
                                   (1.0 - lambda) * p0 / lambda,
                               "response");
    }
  }
  auto chain = TwoPointStrategy(tau_plus, tau_minus, xp, xm, p0, lambda, k,
                                Mode::kDiscounted, response, response);
  return {MixedAction::mix(tau_plus, tau_minus, p0), std::move(response),
          std::min(lo, hi), hi, std::move(chain)};
}

CorrectionCheck verify_correction_condition(const TwoPointStrategy& strategy,
                                            const ObjectiveMatrix& phi,
                                            double lambda) {
  CorrectionCheck out;
  if (strategy.tau_plus().size() != phi.rows() ||
      strategy.opponent_actions() != phi.cols()) {
    out.ok = false;
    out.worst = std::numeric_limits<double>::infinity();
    return out;
  }
  const double tol = 1e-9 * magnitude(phi);
  const double psi0 = strategy.potential(strategy.p0());
  for (double p : {0.0, 1.0}) {
    const MixedAction tau = strategy.mixed(p);
    for (std::size_t s = 0; s < phi.cols(); ++s) {
      const double next = strategy.respond(p, s);
      const double lhs = eval_mixed(phi, tau, s) - strategy.k();
      const double rhs = strategy.potential(p) -
                         lambda * strategy.potential(next) -
                         (1.0 - lambda) * psi0;
      const double err = std::abs(lhs - rhs);
      if (err > out.worst) {
        out.worst = err;
        out.p = p;
        out.s_y = s;
      }
    }
  }
  out.ok = out.worst <= tol;
  return out;
}

double reconstruct_potential(const HistoryMap& strategy,
                             const ObjectiveMatrix& phi, double lambda,
                             std::span<const std::size_t> history) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw InvalidInput("potential reconstruction needs lambda in (0,1]");
  }
  double sum = 0.0;
  double weight = 1.0;
  for (std::size_t t = 0; t < history.size(); ++t) {
    const MixedAction tau = strategy(history.first(t));
    sum += weight * eval_mixed(phi, tau, history[t]);
    weight *= lambda;
  }
  return -sum / weight;
}

double reconstruct_potential(const TwoPointStrategy& strategy,
                             const ObjectiveMatrix& phi, double lambda,
                             std::span<const std::size_t> history) {
  const auto p = strategy.chain(history);
  HistoryMap map = [&](std::span<const std::size_t> h) {
    return strategy.mixed(p[h.size()]);
  };
  return reconstruct_potential(map, phi, lambda, history);
}

TwoPointStrategy combine_convex(const TwoPointStrategy& s1,
                                const TwoPointStrategy& s2, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("q outside [0,1]");
  auto same = [](const MixedAction& a, const MixedAction& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i] - b[i]) > 1e-12) return false;
    }
    return true;
  };
  if (!same(s1.tau_plus(), s2.tau_plus()) ||
      !same(s1.tau_minus(), s2.tau_minus())) {
    throw InvalidInput("strategies do not share tau_plus and tau_minus");
  }
  if (s1.lambda() != s2.lambda() || s1.mode() != s2.mode()) {
    throw InvalidInput("strategies do not share lambda and mode");
  }
  if (s1.opponent_actions() != s2.opponent_actions()) {
    throw InvalidInput("strategies differ in opponent action count");
  }
  const double scale = std::max({1.0, std::abs(s1.gap()), std::abs(s2.gap())});
  if (std::abs(s1.gap() - s2.gap()) > 1e-9 * scale) {
    throw InvalidInput("strategies have different potential gaps");
  }
  auto mix = [q](double a, double b) { return (1.0 - q) * a + q * b; };
  std::vector<double> z(s1.opponent_actions()), o(s1.opponent_actions());
  for (std::size_t s = 0; s < z.size(); ++s) {
    z[s] = mix(s1.at_zero()[s], s2.at_zero()[s]);
    o[s] = mix(s1.at_one()[s], s2.at_one()[s]);
  }
  return TwoPointStrategy(s1.tau_plus(), s1.tau_minus(),
                          mix(s1.psi_plus(), s2.psi_plus()),
                          mix(s1.psi_minus(), s2.psi_minus()),
                          mix(s1.p0(), s2.p0()), s1.lambda(),
                          mix(s1.k(), s2.k()), s1.mode(), std::move(z),
                          std::move(o));
}

}  // namespace autocrat
