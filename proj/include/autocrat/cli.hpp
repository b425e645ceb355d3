#ifndef AUTOCRAT_CLI_HPP_
#define AUTOCRAT_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace autocrat::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kSolverError = 1;
constexpr int kInvalid = 2;
constexpr int kNotEnforceable = 3;

struct Config {
  std::string command;
  // Game source: builtin name with key=value params, or a JSON file.
  std::string game;
  std::vector<std::string> params;
  std::string game_file;
  // Objective: kappa/chi, alpha/beta/gamma, or a JSON file.
  std::optional<double> kappa, chi, alpha, beta, gamma;
  std::string objective_file;
  std::optional<double> lambda;
  double k = 0.0;
  bool undiscounted = false;
  bool reactive = false;
  std::string strategy_file;
  std::string opponent = "uniform";
  std::string backend = "exact";
  bool geometric = false;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
  std::size_t horizon = 0;
  std::size_t identity_horizon = 32;
  std::size_t opponents = 200;
  std::size_t grid = 201;
  std::optional<double> q;
  std::string trace_file;
  std::string output;
  std::string format;
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// AUTOCRAT_THREADS when set to a positive integer, else 0 (hardware).
unsigned threads_from_env();

}  // namespace autocrat::cli

#endif  // AUTOCRAT_CLI_HPP_
