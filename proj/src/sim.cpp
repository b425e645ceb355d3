#include "autocrat/sim.hpp"

#include <algorithm>
#include <cmath>

#include "autocrat/parallel.hpp"

namespace autocrat {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double dot(const MixedAction& tau, const Matrix& u, std::size_t s) {
  double v = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) v += tau[i] * u[i][s];
  return v;
}

struct TrialOutcome {
  double pi_x = 0.0;
  double pi_y = 0.0;
  double phi = 0.0;
};

// Plays one trajectory. Opponent memory uses X's realized action, which is
// drawn whenever it is needed.
class Player {
 public:
  Player(const ObjectiveMatrix& phi, const OpponentModel& opponent)
      : phi_(phi), opponent_(opponent) {}

  bool needs_realized_x() const {
    return std::holds_alternative<MemoryOne>(opponent_);
  }

  std::size_t next(std::size_t t, const MixedAction& tau, Stream& rng) {
    return std::visit(
        [&](const auto& o) -> std::size_t {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, Exogenous>) {
            return o.actions[t % o.actions.size()];
          } else if constexpr (std::is_same_v<T, MemoryOne>) {
            if (t == 0) return rng.sample(o.initial);
            return rng.sample(o.response[last_x_][last_y_]);
          } else if constexpr (std::is_same_v<T, UniformRandom>) {
            return rng.below(phi_.cols());
          } else {
            return adversarial_step(o, phi_, tau);
          }
        },
        opponent_);
  }

  void observe(std::size_t x, std::size_t y) {
    last_x_ = x;
    last_y_ = y;
  }

 private:
  const ObjectiveMatrix& phi_;
  const OpponentModel& opponent_;
  std::size_t last_x_ = 0;
  std::size_t last_y_ = 0;
};

TrialOutcome run_trial(const StageGame& game, const ObjectiveMatrix& phi,
                       const TwoPointStrategy& strategy,
                       const OpponentModel& opponent, const SimOptions& opt,
                       std::size_t horizon, Stream& rng) {
  Player player(phi, opponent);
  const bool sampled = opt.backend == Backend::kSampled;
  const double lambda = opt.lambda;
  TrialOutcome out;
  double p = strategy.p0();
  double weight = 1.0;
  double total_weight = 0.0;
  for (std::size_t t = 0;; ++t) {
    if (!opt.geometric && t >= horizon) break;
    const MixedAction tau = strategy.mixed(p);
    const std::size_t s = player.next(t, tau, rng);
    std::size_t x = 0;
    if (sampled || player.needs_realized_x()) x = rng.sample(tau);
    double ux, uy, f;
    if (sampled) {
      ux = game.u_x()[x][s];
      uy = game.u_y()[x][s];
      f = phi(x, s);
    } else {
      ux = dot(tau, game.u_x(), s);
      uy = dot(tau, game.u_y(), s);
      f = eval_mixed(phi, tau, s);
    }
    f -= strategy.k();
    out.pi_x += weight * ux;
    out.pi_y += weight * uy;
    out.phi += weight * f;
    total_weight += weight;
    player.observe(x, s);
    p = strategy.respond(p, s);
    if (opt.geometric) {
      if (rng.uniform() >= lambda) break;
    } else {
      weight *= lambda;
    }
  }
  if (opt.geometric) {
    out.pi_x *= 1.0 - lambda;
    out.pi_y *= 1.0 - lambda;
    out.phi *= 1.0 - lambda;
    return out;
  }
  // Payoffs are averaged over the truncated weights, so constant play
  // reports its stage payoff exactly.
  if (total_weight > 0.0) {
    out.pi_x /= total_weight;
    out.pi_y /= total_weight;
  }
  if (opt.analytic_tail) {
    out.phi -= weight * (strategy.p0() - p) * strategy.gap();
  }
  out.phi *= 1.0 - lambda;
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe summarize(std::vector<double>& v) {
  const std::size_t n = v.size();
  MeanSe out;
  if (n == 0) return out;
  out.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  if (n < 2) return out;
  for (double& x : v) x = (x - out.mean) * (x - out.mean);
  const double var = pairwise_sum(v.data(), n) / static_cast<double>(n - 1);
  out.se = std::sqrt(var / static_cast<double>(n));
  return out;
}

void check_strategy(const StageGame& game, const ObjectiveMatrix& phi,
                    const TwoPointStrategy& strategy) {
  if (phi.rows() != game.rows() || phi.cols() != game.cols()) {
    throw InvalidInput("objective shape does not match the game");
  }
  if (strategy.tau_plus().size() != game.rows() ||
      strategy.opponent_actions() != game.cols()) {
    throw InvalidInput("strategy shape does not match the game");
  }
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Stream::Stream(std::uint64_t master, std::uint64_t index)
    : engine_(mix_seed(master, index)) {}

double Stream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Stream::below(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

std::size_t Stream::sample(const MixedAction& tau) {
  const double u = uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] <= 0.0) continue;
    last = i;
    acc += tau[i];
    if (u < acc) return i;
  }
  return last;
}

void validate_opponent(const OpponentModel& opponent, std::size_t m,
                       std::size_t n) {
  if (const auto* e = std::get_if<Exogenous>(&opponent)) {
    if (e->actions.empty()) throw InvalidInput("exogenous sequence is empty");
    for (std::size_t s : e->actions) {
      if (s >= n) throw InvalidInput("exogenous action out of range");
    }
  } else if (const auto* mo = std::get_if<MemoryOne>(&opponent)) {
    if (mo->initial.size() != n || mo->response.size() != m) {
      throw InvalidInput("memory-one opponent has the wrong shape");
    }
    for (const auto& row : mo->response) {
      if (row.size() != n) throw InvalidInput("memory-one opponent has the wrong shape");
      for (const auto& tau : row) {
        if (tau.size() != n) throw InvalidInput("memory-one opponent has the wrong shape");
      }
    }
  }
}

MemoryOne random_memory_one(std::size_t m, std::size_t n, Stream& rng) {
  auto draw = [&] {
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) {
      v = -std::log(1.0 - rng.uniform());
      sum += v;
    }
    for (double& v : w) v /= sum;
    return MixedAction(std::move(w));
  };
  MemoryOne out{draw(), {}};
  out.response.resize(m);
  for (auto& row : out.response) {
    for (std::size_t j = 0; j < n; ++j) row.push_back(draw());
  }
  return out;
}

std::size_t adversarial_step(AdversarialMax, const ObjectiveMatrix& phi,
                             const MixedAction& tau) {
  const auto row = eval_row(phi, tau);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) -
                                  row.begin());
}

std::size_t adversarial_step(AdversarialMin, const ObjectiveMatrix& phi,
                             const MixedAction& tau) {
  const auto row = eval_row(phi, tau);
  return static_cast<std::size_t>(std::min_element(row.begin(), row.end()) -
                                  row.begin());
}

ExactSum exact_discounted_sum(const TwoPointStrategy& strategy,
                              const ObjectiveMatrix& phi,
                              const OpponentModel& opponent, std::size_t horizon,
                              std::uint64_t seed) {
  if (strategy.mode() != Mode::kDiscounted) {
    throw InvalidInput("exact discounted sum needs a discounted strategy");
  }
  const double lambda = strategy.lambda();
  if (!(lambda < 1.0)) throw InvalidInput("lambda = 1: use the Cesaro check");
  validate_opponent(opponent, phi.rows(), phi.cols());
  Stream rng(seed, 0);
  Player player(phi, opponent);
  ExactSum out;
  out.trace.lambda = lambda;
  out.trace.horizon = horizon;
  out.trace.rounds.reserve(horizon);
  double p = strategy.p0();
  double weight = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const MixedAction tau = strategy.mixed(p);
    const std::size_t s = player.next(t, tau, rng);
    const std::size_t x = player.needs_realized_x() ? rng.sample(tau) : 0;
    const double f = eval_mixed(phi, tau, s);
    out.trace.rounds.push_back({p, s, f});
    out.partial_sum += weight * (f - strategy.k());
    weight *= lambda;
    player.observe(x, s);
    p = strategy.respond(p, s);
  }
  out.final_p = p;
  out.predicted_residual = weight * (strategy.p0() - p) * strategy.gap();
  return out;
}

std::size_t truncation_horizon(double lambda, double gap) {
  constexpr std::size_t kCap = 1000000;
  const double scale = std::max(1.0, gap);
  if (lambda <= 0.0) return 1;
  if (lambda >= 1.0) return kCap;
  std::size_t t = static_cast<std::size_t>(
      std::max(0.0, std::floor(std::log(1e-6 / scale) / std::log(lambda))));
  while (t > 0 && std::pow(lambda, static_cast<double>(t - 1)) * scale < 1e-6) --t;
  while (std::pow(lambda, static_cast<double>(t)) * scale >= 1e-6 && t < kCap) ++t;
  return std::min(t, kCap);
}

MonteCarloResult monte_carlo_payoffs(const StageGame& game,
                                     const ObjectiveMatrix& phi,
                                     const TwoPointStrategy& strategy,
                                     const OpponentModel& opponent,
                                     const SimOptions& options) {
  if (options.trials < 1) throw InvalidInput("trials must be at least 1");
  if (!(options.lambda >= 0.0 && options.lambda < 1.0)) {
    throw InvalidInput("Monte Carlo needs lambda in [0,1)");
  }
  check_strategy(game, phi, strategy);
  validate_opponent(opponent, game.rows(), game.cols());
  const std::size_t horizon =
      options.horizon > 0 ? options.horizon
                          : truncation_horizon(options.lambda, strategy.gap());
  std::vector<double> px(options.trials), py(options.trials), pf(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    Stream rng(options.seed, i);
    const auto r = run_trial(game, phi, strategy, opponent, options, horizon, rng);
    px[i] = r.pi_x;
    py[i] = r.pi_y;
    pf[i] = r.phi;
  });
  MonteCarloResult out;
  out.trials = options.trials;
  out.horizon = options.geometric ? 0 : horizon;
  const auto sx = summarize(px);
  const auto sy = summarize(py);
  const auto sf = summarize(pf);
  out.mean = {sy.mean, sx.mean};
  out.se = {sy.se, sx.se};
  out.phi_mean = sf.mean;
  out.phi_se = sf.se;
  return out;
}

CesaroResult cesaro_check(const TwoPointStrategy& strategy,
                          const ObjectiveMatrix& phi,
                          const OpponentModel& opponent, std::size_t horizon,
                          std::uint64_t seed) {
  if (strategy.mode() != Mode::kUndiscounted) {
    throw InvalidInput("Cesaro check needs an undiscounted strategy");
  }
  validate_opponent(opponent, phi.rows(), phi.cols());
  Stream rng(seed, 0);
  Player player(phi, opponent);
  double p = strategy.p0();
  double sum = 0.0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    const MixedAction tau = strategy.mixed(p);
    const std::size_t s = player.next(t, tau, rng);
    const std::size_t x = player.needs_realized_x() ? rng.sample(tau) : 0;
    sum += eval_mixed(phi, tau, s) - strategy.k();
    player.observe(x, s);
    p = strategy.respond(p, s);
  }
  const double n = static_cast<double>(horizon + 1);
  return {sum / n, strategy.gap() / n};
}

std::vector<RegionPoint> payoff_region(const StageGame& game,
                                       const ObjectiveMatrix& phi,
                                       const TwoPointStrategy& strategy,
                                       std::size_t n_opponents,
                                       const SimOptions& options) {
  if (n_opponents < 1) throw InvalidInput("need at least one opponent");
  check_strategy(game, phi, strategy);
  std::vector<RegionPoint> out(n_opponents);
  parallel_for(n_opponents, options.threads, [&](std::size_t i) {
    Stream rng(options.seed, i);
    const OpponentModel opponent = random_memory_one(game.rows(), game.cols(), rng);
    SimOptions inner = options;
    inner.threads = 1;
    inner.seed = mix_seed(options.seed, i + 0x5bd1e995ULL);
    const auto r = monte_carlo_payoffs(game, phi, strategy, opponent, inner);
    out[i] = {r.mean.pi_y, r.mean.pi_x, r.se.pi_y, r.se.pi_x};
  });
  return out;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace autocrat
