#ifndef AUTOCRAT_SIM_HPP_
#define AUTOCRAT_SIM_HPP_

#include <cstdint>
#include <random>
#include <variant>

#include "autocrat/core.hpp"
#include "autocrat/synth.hpp"

namespace autocrat {

// Per-trial random stream: the engine seed is a hash of (master, index), so
// trial k draws the same numbers whatever order trials run in.
class Stream {
 public:
  Stream(std::uint64_t master, std::uint64_t index);
  double uniform();  // [0,1)
  std::size_t sample(const MixedAction& tau);
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

struct Exogenous {
  std::vector<std::size_t> actions;  // repeated cyclically
};
struct MemoryOne {
  MixedAction initial;
  std::vector<std::vector<MixedAction>> response;  // [s_x][s_y]
};
struct UniformRandom {};
struct AdversarialMax {};
struct AdversarialMin {};

using OpponentModel =
    std::variant<Exogenous, MemoryOne, UniformRandom, AdversarialMax,
                 AdversarialMin>;

void validate_opponent(const OpponentModel& opponent, std::size_t m,
                       std::size_t n);

// Initial action and every response row drawn uniformly from the simplex.
MemoryOne random_memory_one(std::size_t m, std::size_t n, Stream& rng);

// Ties go to the lowest index.
std::size_t adversarial_step(AdversarialMax, const ObjectiveMatrix& phi,
                             const MixedAction& tau);
std::size_t adversarial_step(AdversarialMin, const ObjectiveMatrix& phi,
                             const MixedAction& tau);

struct Round {
  double p = 0.0;
  std::size_t s_y = 0;
  double phi = 0.0;  // phi(tau_t, s_t)
};

struct Trace {
  std::vector<Round> rounds;
  double lambda = 0.0;
  std::size_t horizon = 0;
};

struct ExactSum {
  double partial_sum = 0.0;         // sum_{t<T} lambda^t (phi_t - K)
  double predicted_residual = 0.0;  // lambda^T (p0 - p_T)(psi+ - psi-)
  double final_p = 0.0;
  Trace trace;
};

// Mixed-action chain for X; a random opponent draws from rng(seed, 0).
ExactSum exact_discounted_sum(const TwoPointStrategy& strategy,
                              const ObjectiveMatrix& phi,
                              const OpponentModel& opponent, std::size_t horizon,
                              std::uint64_t seed = 0);

// Smallest T with lambda^T * max(1, gap) < 1e-6, capped at 1e6.
std::size_t truncation_horizon(double lambda, double gap);

enum class Backend { kExact, kSampled };

struct SimOptions {
  double lambda = 0.9;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  Backend backend = Backend::kExact;
  bool geometric = false;
  bool analytic_tail = true;
  std::size_t horizon = 0;  // 0: truncation_horizon
  unsigned threads = 0;     // 0: hardware concurrency
};

struct PayoffPair {
  double pi_y = 0.0;
  double pi_x = 0.0;
};

struct MonteCarloResult {
  PayoffPair mean;
  PayoffPair se;
  double phi_mean = 0.0;  // normalized (1-lambda) sum of phi - K
  double phi_se = 0.0;
  std::size_t trials = 0;
  std::size_t horizon = 0;
};

MonteCarloResult monte_carlo_payoffs(const StageGame& game,
                                     const ObjectiveMatrix& phi,
                                     const TwoPointStrategy& strategy,
                                     const OpponentModel& opponent,
                                     const SimOptions& options);

struct CesaroResult {
  double average = 0.0;
  double bound = 0.0;  // gap / (T+1)
};

// (1/(T+1)) sum_{t<=T} (phi(tau_t, s_t) - K) for an undiscounted strategy.
CesaroResult cesaro_check(const TwoPointStrategy& strategy,
                          const ObjectiveMatrix& phi,
                          const OpponentModel& opponent, std::size_t horizon,
                          std::uint64_t seed = 0);

struct RegionPoint {
  double pi_y = 0.0;
  double pi_x = 0.0;
  double se_y = 0.0;
  double se_x = 0.0;
};

// Payoffs against n random memory-one opponents; options.trials runs each.
std::vector<RegionPoint> payoff_region(const StageGame& game,
                                       const ObjectiveMatrix& phi,
                                       const TwoPointStrategy& strategy,
                                       std::size_t n_opponents,
                                       const SimOptions& options);

// Pairwise summation, fixed order.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace autocrat

#endif  // AUTOCRAT_SIM_HPP_
