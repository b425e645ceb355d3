#include "autocrat/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "autocrat/io.hpp"

namespace autocrat::cli {
namespace {

using io::format_number;
using io::Json;

StageGame load_game(const Config& c) {
  if (c.game.empty() == c.game_file.empty()) {
    throw InvalidInput("give exactly one of --game and --game-file");
  }
  if (!c.game_file.empty()) {
    if (!c.params.empty()) throw InvalidInput("--param only applies to builtin games");
    return io::game_from_json(io::read_file(c.game_file));
  }
  GameParams params;
  for (const auto& kv : c.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidInput("parameter must look like key=value: " + kv);
    }
    const std::string key = kv.substr(0, eq), text = kv.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw InvalidInput("parameter value is not a number: " + kv);
    }
    if (params.count(key)) throw InvalidInput("parameter given twice: " + key);
    params[key] = value;
  }
  return make_game(c.game, params);
}

ObjectiveMatrix load_objective(const Config& c, const StageGame& game) {
  const bool kc = c.kappa || c.chi;
  const bool abg = c.alpha || c.beta || c.gamma;
  const bool file = !c.objective_file.empty();
  if (kc + abg + file != 1) {
    throw InvalidInput(
        "give exactly one objective: --kappa/--chi, --alpha/--beta/--gamma, or "
        "--objective");
  }
  if (file) return io::resolve(io::objective_from_json(io::read_file(c.objective_file)), game);
  if (kc) {
    if (!c.kappa || !c.chi) throw InvalidInput("--kappa and --chi go together");
    return build_linear_phi(game, KappaChi{*c.kappa, *c.chi});
  }
  if (!c.alpha || !c.beta) throw InvalidInput("--alpha and --beta are required");
  return build_linear_phi(game, AlphaBetaGamma{*c.alpha, *c.beta, c.gamma.value_or(0.0)});
}

TwoPointStrategy synthesize(const Config& c, const ObjectiveMatrix& phi) {
  const ObjectiveMatrix centered = shifted(phi, c.k);
  const LambdaMinResult lm = lambda_min(centered);
  const auto& w = lm.optimizer;
  // A lambda accepted within tolerance below lambda_min is raised to it.
  const double lambda = std::max(c.lambda.value_or(lm.lambda_min), lm.lambda_min);
  if (c.lambda && !(*c.lambda >= 0.0 && *c.lambda <= 1.0)) {
    throw InvalidInput("lambda outside [0,1]");
  }
  if (c.lambda && !is_enforceable(centered, *c.lambda)) {
    throw NotEnforceable("lambda " + format_number(*c.lambda) +
                         " is below lambda_min " + format_number(lm.lambda_min) +
                         (lm.undiscounted_only ? " (undiscounted only)" : ""));
  }
  if (c.undiscounted || lambda >= 1.0) {
    return synthesize_undiscounted(phi, w.tau_plus, w.tau_minus, c.k);
  }
  if (c.reactive) {
    return synthesize_reactive(phi, lambda, w.tau_plus, w.tau_minus, c.k).chain;
  }
  return synthesize_two_point(phi, lambda, w.tau_plus, w.tau_minus, c.k);
}

TwoPointStrategy load_strategy(const Config& c, const StageGame& game,
                               const ObjectiveMatrix& phi) {
  if (c.strategy_file.empty()) return synthesize(c, phi);
  TwoPointStrategy s = io::strategy_from_json(io::read_file(c.strategy_file));
  if (s.tau_plus().size() != game.rows() || s.opponent_actions() != game.cols()) {
    throw InvalidInput("strategy shape does not match the stage game");
  }
  return s;
}

OpponentModel parse_opponent(const std::string& spec, const StageGame& game,
                             std::uint64_t seed) {
  if (spec == "uniform") return UniformRandom{};
  if (spec == "adversarial_max") return AdversarialMax{};
  if (spec == "adversarial_min") return AdversarialMin{};
  if (spec == "random_memory_one") {
    Stream rng(seed, 0x6d656d31ULL);
    return random_memory_one(game.rows(), game.cols(), rng);
  }
  const std::string prefix = "exogenous:";
  if (spec.rfind(prefix, 0) == 0) {
    Exogenous e;
    std::stringstream ss(spec.substr(prefix.size()));
    std::string label;
    while (std::getline(ss, label, ',')) {
      e.actions.push_back(game.actions_y().index_of(label));
    }
    if (e.actions.empty()) throw InvalidInput("exogenous sequence is empty");
    return e;
  }
  throw InvalidInput("unknown opponent: " + spec);
}

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::kExact;
  if (name == "sampled") return Backend::kSampled;
  throw InvalidInput("unknown backend: " + name);
}

const char* path_name(LambdaPath p) {
  switch (p) {
    case LambdaPath::kTrivial:
      return "trivial";
    case LambdaPath::kPure:
      return "pure";
    case LambdaPath::kLinearProgram:
      return "linear_program";
  }
  return "unknown";
}

Json interval_json(const std::optional<Interval>& i) {
  if (!i) return nullptr;
  return Json{{"lo", i->lo}, {"hi", i->hi}};
}

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// Rows of (metric, value) rendered as CSV or a flat JSON object.
using Summary = std::vector<std::pair<std::string, Json>>;

std::string render(const Summary& rows, const std::string& format) {
  if (format == "json") {
    Json j = Json::object();
    for (const auto& [k, v] : rows) j[k] = v;
    return io::dump(j);
  }
  std::string out = "metric,value\n";
  for (const auto& [k, v] : rows) {
    std::string cell = v.dump();
    if (v.is_number_float()) cell = format_number(v.get<double>());
    if (v.is_string()) cell = v.get<std::string>();
    out += k + "," + cell + "\n";
  }
  return out;
}

void check_format(const Config& c, std::initializer_list<const char*> allowed) {
  if (c.format.empty()) return;
  for (const char* f : allowed) {
    if (c.format == f) return;
  }
  throw InvalidInput("format '" + c.format + "' is not available for " + c.command);
}

std::string cmd_check(const Config& c) {
  check_format(c, {"json"});
  const StageGame game = load_game(c);
  return io::dump(io::to_json(analyze(shifted(load_objective(c, game), c.k))));
}

std::string cmd_lambda_min(const Config& c) {
  check_format(c, {"json"});
  const StageGame game = load_game(c);
  const ObjectiveMatrix phi = shifted(load_objective(c, game), c.k);
  Json j;
  const auto sep = separation_witnesses(phi);
  j["enforceable"] = sep.tau_plus && sep.tau_minus;
  if (sep.tau_plus && sep.tau_minus) {
    const LambdaMinResult lm = lambda_min(phi);
    j["lambda_min"] = lm.lambda_min;
    j["path"] = path_name(lm.path);
    j["undiscounted_only"] = lm.undiscounted_only;
    j["certified"] = lm.certified;
    j["needs_margin"] = lm.needs_margin;
    j["tau_plus"] = io::to_json(lm.optimizer.tau_plus);
    j["tau_minus"] = io::to_json(lm.optimizer.tau_minus);
  } else {
    j["lambda_min"] = nullptr;
  }
  j["pure_lambda_min"] = optional_json(lambda_min_pure(phi));
  j["additive_lambda_min"] = optional_json(additive_lambda_min(phi));
  return io::dump(j);
}

std::string cmd_synthesize(const Config& c) {
  check_format(c, {"json"});
  const StageGame game = load_game(c);
  return io::dump(io::to_json(synthesize(c, load_objective(c, game))));
}

std::string cmd_simulate(const Config& c, unsigned threads) {
  check_format(c, {"csv", "json"});
  const StageGame game = load_game(c);
  const ObjectiveMatrix phi = load_objective(c, game);
  const TwoPointStrategy strategy = load_strategy(c, game, phi);
  const OpponentModel opponent = parse_opponent(c.opponent, game, c.seed);
  Summary rows;
  if (strategy.mode() == Mode::kUndiscounted) {
    if (!c.trace_file.empty()) throw InvalidInput("--trace needs a discounted strategy");
    const std::size_t horizon = c.horizon > 0 ? c.horizon : 1000;
    const CesaroResult r = cesaro_check(strategy, phi, opponent, horizon, c.seed);
    rows = {{"mode", "undiscounted"},
            {"horizon", horizon},
            {"cesaro_average", r.average},
            {"cesaro_bound", r.bound}};
    return render(rows, c.format);
  }
  SimOptions options;
  options.lambda = strategy.lambda();
  options.trials = c.trials;
  options.seed = c.seed;
  options.backend = parse_backend(c.backend);
  options.geometric = c.geometric;
  options.horizon = c.horizon;
  options.threads = threads;
  const MonteCarloResult mc = monte_carlo_payoffs(game, phi, strategy, opponent, options);
  const ExactSum exact =
      exact_discounted_sum(strategy, phi, opponent, c.identity_horizon, c.seed);
  if (!c.trace_file.empty()) {
    std::ofstream f(c.trace_file);
    if (!f) throw InvalidInput("cannot write trace file: " + c.trace_file);
    io::write_trace_csv(f, exact.trace);
  }
  rows = {{"mode", "discounted"},
          {"lambda", strategy.lambda()},
          {"trials", mc.trials},
          {"horizon", mc.horizon},
          {"pi_y", mc.mean.pi_y},
          {"pi_x", mc.mean.pi_x},
          {"se_y", mc.se.pi_y},
          {"se_x", mc.se.pi_x},
          {"phi_mean", mc.phi_mean},
          {"phi_se", mc.phi_se},
          {"identity_horizon", c.identity_horizon},
          {"partial_sum", exact.partial_sum},
          {"predicted_residual", exact.predicted_residual},
          {"residual_error", std::abs(exact.partial_sum - exact.predicted_residual)}};
  return render(rows, c.format);
}

std::string cmd_region(const Config& c, unsigned threads) {
  check_format(c, {"csv"});
  const StageGame game = load_game(c);
  const ObjectiveMatrix phi = load_objective(c, game);
  const TwoPointStrategy strategy = load_strategy(c, game, phi);
  if (strategy.mode() != Mode::kDiscounted) {
    throw InvalidInput("payoff region needs a discounted strategy");
  }
  SimOptions options;
  options.lambda = strategy.lambda();
  options.trials = c.trials;
  options.seed = c.seed;
  options.backend = parse_backend(c.backend);
  options.geometric = c.geometric;
  options.horizon = c.horizon;
  options.threads = threads;
  std::ostringstream out;
  io::write_region_csv(out, payoff_region(game, phi, strategy, c.opponents, options));
  return out.str();
}

std::string cmd_heatmap(const Config& c, unsigned threads) {
  check_format(c, {"csv"});
  const StageGame game = load_game(c);
  HeatmapOptions options;
  options.grid = c.grid;
  options.threads = threads;
  std::ostringstream out;
  io::write_heatmap_csv(out, heatmap(game, options));
  return out.str();
}

std::string cmd_equalizer(const Config& c) {
  check_format(c, {"json"});
  const StageGame game = load_game(c);
  return io::dump(Json{{"self", interval_json(equalizer_interval(game, Target::kSelf))},
                       {"opponent",
                        interval_json(equalizer_interval(game, Target::kOpponent))}});
}

std::string cmd_trivial(const Config& c) {
  check_format(c, {"json"});
  const StageGame game = load_game(c);
  Json j;
  if (c.q) {
    if (game.rows() != 2 || game.cols() != 2) {
      throw InvalidInput("--q needs a 2x2 game");
    }
    const Matrix& u = game.u_x();
    const KappaChi kc = pd_trivial_params(u[0][0], u[0][1], u[1][0], u[1][1], *c.q);
    j["q"] = *c.q;
    j["kappa"] = kc.kappa;
    j["chi"] = kc.chi;
    return io::dump(j);
  }
  const auto trivial = find_trivial(shifted(load_objective(c, game), c.k));
  j["trivial_action"] = trivial ? io::to_json(*trivial) : Json(nullptr);
  return io::dump(j);
}

void add_game_options(CLI::App* sub, Config& c) {
  sub->add_option("--game", c.game, "builtin game name");
  sub->add_option("--param", c.params, "key=value pairs")->delimiter(',');
  sub->add_option("--game-file", c.game_file, "stage game JSON");
}

void add_objective_options(CLI::App* sub, Config& c) {
  sub->add_option("--kappa", c.kappa);
  sub->add_option("--chi", c.chi);
  sub->add_option("--alpha", c.alpha);
  sub->add_option("--beta", c.beta);
  sub->add_option("--gamma", c.gamma);
  sub->add_option("--objective", c.objective_file, "objective JSON");
  sub->add_option("--k", c.k, "target value K (default 0)");
}

void add_strategy_options(CLI::App* sub, Config& c) {
  sub->add_option("--lambda", c.lambda, "discount factor");
  sub->add_flag("--undiscounted", c.undiscounted);
  sub->add_flag("--reactive", c.reactive, "reactive form for additive objectives");
}

void add_sim_options(CLI::App* sub, Config& c) {
  sub->add_option("--strategy", c.strategy_file, "strategy JSON");
  sub->add_option("--backend", c.backend, "exact or sampled");
  sub->add_flag("--geometric", c.geometric, "sample geometric game lengths");
  sub->add_option("--seed", c.seed);
  sub->add_option("--trials", c.trials);
  sub->add_option("--horizon", c.horizon);
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw InvalidInput("cannot write output file: " + c.output);
  f << text;
}

void report_error(std::ostream& err, const std::string& code,
                  const std::string& message) {
  err << nlohmann::json{{"code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

unsigned threads_from_env() {
  const char* v = std::getenv("AUTOCRAT_THREADS");
  if (v == nullptr) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n <= 0) return 0;
  return static_cast<unsigned>(n);
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Config c;
  CLI::App app("Autocratic strategies for repeated games", "autocrat");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--output,-o", c.output, "write the main output to a file");
  app.add_option("--format", c.format, "json or csv where both are offered");

  auto* check = app.add_subcommand("check", "enforceability report (JSON)");
  auto* lmin = app.add_subcommand("lambda-min", "minimum discount factor (JSON)");
  auto* synth = app.add_subcommand("synthesize", "enforcing strategy (JSON)");
  auto* sim = app.add_subcommand("simulate", "simulation summary (CSV)");
  auto* region = app.add_subcommand("region", "payoff point cloud (CSV)");
  auto* heat = app.add_subcommand("heatmap", "lambda_min over (kappa, chi) (CSV)");
  auto* eq = app.add_subcommand("equalizer", "equalizer intervals (JSON)");
  auto* triv = app.add_subcommand("trivial", "trivial autocratic action (JSON)");

  for (auto* sub : {check, lmin, synth, sim, region, heat, eq, triv}) {
    add_game_options(sub, c);
  }
  for (auto* sub : {check, lmin, synth, sim, region, triv}) {
    add_objective_options(sub, c);
  }
  for (auto* sub : {synth, sim, region}) add_strategy_options(sub, c);
  add_sim_options(sim, c);
  add_sim_options(region, c);
  sim->add_option("--opponent", c.opponent,
                  "exogenous:A,B,...|uniform|adversarial_max|adversarial_min|"
                  "random_memory_one");
  sim->add_option("--trace", c.trace_file, "write the exact-chain trace CSV");
  sim->add_option("--identity-horizon", c.identity_horizon);
  region->add_option("--opponents", c.opponents, "number of random opponents");
  heat->add_option("--grid", c.grid, "points per axis");
  triv->add_option("--q", c.q, "cooperation probability (2x2 games)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    report_error(err, "invalid_input", e.what());
    return kInvalid;
  }

  c.command = app.get_subcommands().front()->get_name();
  const unsigned threads = threads_from_env();

  try {
    std::string text;
    if (c.command == "check") text = cmd_check(c);
    else if (c.command == "lambda-min") text = cmd_lambda_min(c);
    else if (c.command == "synthesize") text = cmd_synthesize(c);
    else if (c.command == "simulate") text = cmd_simulate(c, threads);
    else if (c.command == "region") text = cmd_region(c, threads);
    else if (c.command == "heatmap") text = cmd_heatmap(c, threads);
    else if (c.command == "equalizer") text = cmd_equalizer(c);
    else text = cmd_trivial(c);
    emit(c, text, out);
    return kOk;
  } catch (const NotEnforceable& e) {
    report_error(err, e.code(), e.what());
    return kNotEnforceable;
  } catch (const InvalidInput& e) {
    report_error(err, e.code(), e.what());
    return kInvalid;
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return kSolverError;
  }
}

}  // namespace autocrat::cli
