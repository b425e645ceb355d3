#ifndef AUTOCRAT_GAMES_HPP_
#define AUTOCRAT_GAMES_HPP_

#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "autocrat/core.hpp"
#include "autocrat/enforce.hpp"

namespace autocrat {

using GameParams = std::map<std::string, double>;

// Rows/columns (C, D) with u_x = [[R, S], [T, P]].
StageGame make_pd(double r, double s, double t, double p);
StageGame make_donation(double b, double c);
// Rows/columns (C1, C2, D).
StageGame make_nonlinear_donation(double b1, double c1, double b2, double c2);
StageGame make_asym_donation(double b_x, double c_x, double b_y, double c_y);
// Rows/columns (Hawk, Dove).
StageGame make_hawk_dove(double v, double c);

// Names: pd, donation, nonlinear_donation, asym_donation, hawk_dove.
// Missing parameters take the defaults listed by default_params.
StageGame make_game(const std::string& name, const GameParams& params);
GameParams default_params(const std::string& name);
std::vector<std::string> builtin_game_names();

std::optional<double> pd_lambda_min_closed_form(double r, double s, double t,
                                                double p, double kappa,
                                                double chi);

// (kappa, chi) for which always cooperating with probability q is trivial.
KappaChi pd_trivial_params(double r, double s, double t, double p, double q);

enum class Target { kSelf, kOpponent };

std::optional<Interval> equalizer_interval(const StageGame& game, Target target);

struct ZeroSumResult {
  bool enforceable = false;
  std::optional<MixedAction> tau_plus;
  std::optional<MixedAction> tau_minus;
};

ZeroSumResult zero_sum_enforceable(const StageGame& game);

enum class Dichotomy { kTrivial, kUndiscountedOnly, kNotEnforceable };

const char* to_string(Dichotomy d);

Dichotomy symmetric_dichotomy(const StageGame& game, const ObjectiveMatrix& phi);

// Reference payoffs for the (kappa, chi) axes: R = u_x[0][0] (mutual first
// action), P = u_x[last][last].
struct Reference {
  double r = 0.0;
  double p = 0.0;
};

Reference reference_payoffs(const StageGame& game);

struct HeatmapOptions {
  double r_lo = -0.25;
  double r_hi = 1.25;
  double theta_lo = -std::numbers::pi / 4 + 0.01;
  double theta_hi = std::numbers::pi / 2 - 0.01;
  std::size_t grid = 201;
  unsigned threads = 0;
};

struct HeatmapRecord {
  double r = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double chi = 0.0;
  bool enforceable = false;
  double lambda_min = -1.0;  // -1 when not enforceable
  bool mixed_optimizer = false;
  bool overflow = false;  // |chi| > 1e6
};

// Row-major over (r index, theta index).
std::vector<HeatmapRecord> heatmap(const StageGame& game,
                                   const HeatmapOptions& options);

HeatmapRecord heatmap_cell(const StageGame& game, double r, double theta);

}  // namespace autocrat

#endif  // AUTOCRAT_GAMES_HPP_
