#include "autocrat/games.hpp"

#include <cmath>

#include "autocrat/parallel.hpp"

namespace autocrat {
namespace {

void require(bool ok, const std::string& constraint) {
  if (!ok) throw InvalidInput("parameter constraint violated: " + constraint);
}

void require_pd(double r, double s, double t, double p) {
  require(t > r, "T > R");
  require(r > p, "R > P");
  require(p > s, "P > S");
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.front().size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) out[j][i] = m[i][j];
  }
  return out;
}

double param(const GameParams& params, const GameParams& defaults,
             const std::string& key) {
  if (auto it = params.find(key); it != params.end()) return it->second;
  return defaults.at(key);
}

}  // namespace

StageGame make_pd(double r, double s, double t, double p) {
  require_pd(r, s, t, p);
  Matrix u{{r, s}, {t, p}};
  return StageGame(ActionSet({"C", "D"}), ActionSet({"C", "D"}), u, transpose(u));
}

StageGame make_donation(double b, double c) {
  require(c > 0.0, "c > 0");
  require(b > c, "b > c");
  Matrix u{{b - c, -c}, {b, 0.0}};
  return StageGame(ActionSet({"C", "D"}), ActionSet({"C", "D"}), u, transpose(u));
}

StageGame make_nonlinear_donation(double b1, double c1, double b2, double c2) {
  require(c1 > 0.0, "0 < c1");
  require(c1 < c2, "c1 < c2");
  require(b1 > 0.0, "0 < b1");
  require(b1 < b2, "b1 < b2");
  require(b2 - c2 < b1 - c1, "b2 - c2 < b1 - c1");
  Matrix u{{b1 - c1, b2 - c1, -c1}, {b1 - c2, b2 - c2, -c2}, {b1, b2, 0.0}};
  return StageGame(ActionSet({"C1", "C2", "D"}), ActionSet({"C1", "C2", "D"}), u,
                   transpose(u));
}

StageGame make_asym_donation(double b_x, double c_x, double b_y, double c_y) {
  require(c_x > 0.0 && b_x > c_x, "b_X > c_X > 0");
  require(c_y > 0.0 && b_y > c_y, "b_Y > c_Y > 0");
  Matrix ux{{b_y - c_x, -c_x}, {b_y, 0.0}};
  Matrix uy{{b_x - c_y, b_x}, {-c_y, 0.0}};
  return StageGame(ActionSet({"C", "D"}), ActionSet({"C", "D"}), ux, uy);
}

StageGame make_hawk_dove(double v, double c) {
  require(v > 0.0, "V > 0");
  require(c > v, "C > V");
  Matrix u{{(v - c) / 2.0, v}, {0.0, v / 2.0}};
  return StageGame(ActionSet({"Hawk", "Dove"}), ActionSet({"Hawk", "Dove"}), u,
                   transpose(u));
}

std::vector<std::string> builtin_game_names() {
  return {"pd", "donation", "nonlinear_donation", "asym_donation", "hawk_dove"};
}

GameParams default_params(const std::string& name) {
  if (name == "pd") return {{"R", 3}, {"S", 0}, {"T", 5}, {"P", 1}};
  if (name == "donation") return {{"b", 3}, {"c", 1}};
  if (name == "nonlinear_donation") {
    return {{"b1", 3}, {"c1", 1}, {"b2", 4}, {"c2", 2.5}};
  }
  if (name == "asym_donation") {
    return {{"b_x", 3}, {"c_x", 1}, {"b_y", 2}, {"c_y", 1}};
  }
  if (name == "hawk_dove") return {{"V", 2}, {"C", 4}};
  throw InvalidInput("unknown game: " + name);
}

StageGame make_game(const std::string& name, const GameParams& params) {
  const GameParams defaults = default_params(name);
  for (const auto& [key, value] : params) {
    if (!defaults.count(key)) {
      throw InvalidInput("unknown parameter '" + key + "' for game " + name);
    }
    if (!std::isfinite(value)) throw InvalidInput("non-finite parameter " + key);
  }
  auto get = [&](const std::string& key) { return param(params, defaults, key); };
  if (name == "pd") return make_pd(get("R"), get("S"), get("T"), get("P"));
  if (name == "donation") return make_donation(get("b"), get("c"));
  if (name == "nonlinear_donation") {
    return make_nonlinear_donation(get("b1"), get("c1"), get("b2"), get("c2"));
  }
  if (name == "asym_donation") {
    return make_asym_donation(get("b_x"), get("c_x"), get("b_y"), get("c_y"));
  }
  return make_hawk_dove(get("V"), get("C"));
}

std::optional<double> pd_lambda_min_closed_form(double r, double s, double t,
                                                double p, double kappa,
                                                double chi) {
  require_pd(r, s, t, p);
  if (std::abs(chi - 1.0) <= 1e-12) return 1.0;
  if (kappa < p || kappa > r) return std::nullopt;
  const bool wide = s + t >= r + p;
  if (chi > 1.0) {
    const double num = (chi - 1.0) * (r - p);
    return wide ? 1.0 - num / (-s + chi * t - (chi - 1.0) * p)
                : 1.0 - num / ((chi - 1.0) * r - chi * s + t);
  }
  const double limit = std::min(-(r - s) / (t - r), -(t - p) / (p - s));
  if (chi <= limit) {
    // On the band's corners a pure action is trivial.
    const double tol = 1e-12 * std::max({1.0, std::abs(chi)}) *
                       std::max({1.0, std::abs(r), std::abs(s), std::abs(t), std::abs(p)});
    const double cc = (chi - 1.0) * (r - kappa), cd = chi * (t - kappa) - (s - kappa);
    const double dc = chi * (s - kappa) - (t - kappa), dd = (chi - 1.0) * (p - kappa);
    if ((std::abs(cc) <= tol && std::abs(cd) <= tol) ||
        (std::abs(dc) <= tol && std::abs(dd) <= tol)) {
      return 0.0;
    }
    // the larger denominator binds; (1-chi)(R+P-S-T) decides which
    const double num = (1.0 - chi) * (r - p);
    return wide ? 1.0 - num / (s - chi * t - (1.0 - chi) * p)
                : 1.0 - num / ((1.0 - chi) * r - t + chi * s);
  }
  return std::nullopt;
}

KappaChi pd_trivial_params(double r, double s, double t, double p, double q) {
  require_pd(r, s, t, p);
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("probability outside [0,1]");
  const double curve = r - s - t + p;
  const double den = s - p + q * curve;
  if (std::abs(den) <= 1e-12) {
    throw InvalidInput("degenerate trivial parameters: chi denominator is zero");
  }
  return {p + q * (s + t - 2.0 * p) + q * q * curve, (t - p + q * curve) / den};
}

std::optional<Interval> equalizer_interval(const StageGame& game, Target target) {
  const Matrix& u = target == Target::kSelf ? game.u_x() : game.u_y();
  return enforce_interval(ObjectiveMatrix(u));
}

ZeroSumResult zero_sum_enforceable(const StageGame& game) {
  const auto sep =
      separation_witnesses(build_linear_phi(game, AlphaBetaGamma{1.0, 1.0, 0.0}));
  return {sep.tau_plus && sep.tau_minus, sep.tau_plus, sep.tau_minus};
}

const char* to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::kTrivial:
      return "trivial";
    case Dichotomy::kUndiscountedOnly:
      return "undiscounted_only";
    case Dichotomy::kNotEnforceable:
      return "not_enforceable";
  }
  return "unknown";
}

Dichotomy symmetric_dichotomy(const StageGame& game, const ObjectiveMatrix& phi) {
  if (!(game.actions_x() == game.actions_y())) {
    throw InvalidInput("players have different action sets");
  }
  const std::size_t m = phi.rows();
  if (phi.cols() != m || m != game.rows()) {
    throw InvalidInput("objective is not square over the shared action set");
  }
  bool symmetric = true, skew = true;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      symmetric = symmetric && std::abs(phi(i, j) - phi(j, i)) <= 1e-9;
      skew = skew && std::abs(phi(i, j) + phi(j, i)) <= 1e-9;
    }
  }
  if (!symmetric && !skew) {
    throw InvalidInput("objective is neither symmetric nor skew-symmetric");
  }
  if (find_trivial(phi)) return Dichotomy::kTrivial;
  const auto sep = separation_witnesses(phi);
  return std::abs(sep.max_min) <= 1e-9 ? Dichotomy::kUndiscountedOnly
                                       : Dichotomy::kNotEnforceable;
}

Reference reference_payoffs(const StageGame& game) {
  return {game.u_x().front().front(), game.u_x().back().back()};
}

HeatmapRecord heatmap_cell(const StageGame& game, double r, double theta) {
  const Reference ref = reference_payoffs(game);
  HeatmapRecord rec;
  rec.r = r;
  rec.theta = theta;
  rec.kappa = ref.p + r * (ref.r - ref.p);
  rec.chi = std::tan(theta + std::numbers::pi / 4);
  if (!std::isfinite(rec.chi) || std::abs(rec.chi) > 1e6) {
    rec.overflow = true;
    return rec;
  }
  const auto phi = build_linear_phi(game, KappaChi{rec.kappa, rec.chi});
  const auto sep = separation_witnesses(phi);
  if (!sep.tau_plus || !sep.tau_minus) return rec;
  rec.enforceable = true;
  rec.lambda_min = lambda_min(phi).lambda_min;
  const auto pure = lambda_min_pure(phi);
  rec.mixed_optimizer = !pure || *pure - rec.lambda_min > 1e-6;
  return rec;
}

std::vector<HeatmapRecord> heatmap(const StageGame& game,
                                   const HeatmapOptions& options) {
  if (options.grid < 2) throw InvalidInput("heatmap grid must be at least 2");
  if (game.rows() != game.cols()) throw InvalidInput("heatmap needs a square game");
  const std::size_t n = options.grid;
  auto at = [n](double lo, double hi, std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<HeatmapRecord> out(n * n);
  parallel_for(n * n, options.threads, [&](std::size_t k) {
    const std::size_t row = k / n, col = k % n;
    out[k] = heatmap_cell(game, at(options.r_lo, options.r_hi, row),
                          at(options.theta_lo, options.theta_hi, col));
  });
  return out;
}

}  // namespace autocrat
