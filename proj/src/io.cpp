#include "autocrat/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace autocrat::io {
namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_number_float()) {
    out += format_number(j.get<double>());
  } else if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      write(out, value, indent + 2);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& v : j) flat = flat && is_scalar(v);
    out += "[";
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += flat ? ", " : ",";
      first = false;
      if (!flat) out += "\n" + pad;
      write(out, v, indent + 2);
    }
    if (!flat && !j.empty()) out += "\n" + close;
    out += "]";
  } else {
    out += j.dump();
  }
}

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number()) {
    throw InvalidInput(std::string("key '") + key + "' is not a number");
  }
  return j.at(key).get<double>();
}

std::vector<double> vector_of(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " is not an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidInput(std::string(what) + " has a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix matrix_of(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " is not an array");
  Matrix out;
  for (const auto& row : j) out.push_back(vector_of(row, what));
  return out;
}

std::vector<std::string> labels_of(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " is not an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InvalidInput(std::string(what) + " has a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

Json envelope(const Envelope& e) { return Json{{"min", e.min}, {"max", e.max}}; }

const char* csv_bool(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) throw InvalidInput("cannot format a non-finite number");
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string dump(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Json to_json(const MixedAction& tau) { return Json(tau.weights()); }

Json to_json(const StageGame& game) {
  return Json{{"actions_x", game.actions_x().labels()},
              {"actions_y", game.actions_y().labels()},
              {"u_x", game.u_x()},
              {"u_y", game.u_y()}};
}

Json to_json(const EnforceabilityReport& report) {
  Json j;
  j["enforceable"] = report.enforceable();
  j["lambda_min"] = report.lambda_min ? Json(*report.lambda_min) : Json(nullptr);
  j["undiscounted_only"] = report.undiscounted_only;
  j["trivial_action"] =
      report.trivial_action ? to_json(*report.trivial_action) : Json(nullptr);
  j["interval"] = report.interval
                      ? Json{{"lo", report.interval->lo}, {"hi", report.interval->hi}}
                      : Json(nullptr);
  if (report.optimizer) {
    j["tau_plus"] = to_json(report.optimizer->tau_plus);
    j["tau_minus"] = to_json(report.optimizer->tau_minus);
    j["envelopes"] = Json{{"plus", envelope(report.optimizer->plus)},
                          {"minus", envelope(report.optimizer->minus)}};
  } else {
    j["tau_plus"] = nullptr;
    j["tau_minus"] = nullptr;
    j["envelopes"] = nullptr;
  }
  j["pure_lambda_min"] =
      report.pure_lambda_min ? Json(*report.pure_lambda_min) : Json(nullptr);
  j["certified"] = report.certified;
  j["needs_margin"] = report.needs_margin;
  return j;
}

Json to_json(const TwoPointStrategy& s) {
  return Json{{"tau_plus", to_json(s.tau_plus())},
              {"tau_minus", to_json(s.tau_minus())},
              {"psi_plus", s.psi_plus()},
              {"psi_minus", s.psi_minus()},
              {"p0", s.p0()},
              {"lambda", s.lambda()},
              {"K", s.k()},
              {"mode", to_string(s.mode())},
              {"response_at_0", s.at_zero()},
              {"response_at_1", s.at_one()}};
}

StageGame game_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("stage game must be a JSON object");
  return StageGame(ActionSet(labels_of(field(j, "actions_x"), "actions_x")),
                   ActionSet(labels_of(field(j, "actions_y"), "actions_y")),
                   matrix_of(field(j, "u_x"), "u_x"),
                   matrix_of(field(j, "u_y"), "u_y"));
}

TwoPointStrategy strategy_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("strategy must be a JSON object");
  const Json& mode_json = field(j, "mode");
  if (!mode_json.is_string()) throw InvalidInput("mode is not a string");
  const std::string mode_name = mode_json.get<std::string>();
  Mode mode;
  if (mode_name == to_string(Mode::kDiscounted)) {
    mode = Mode::kDiscounted;
  } else if (mode_name == to_string(Mode::kUndiscounted)) {
    mode = Mode::kUndiscounted;
  } else {
    throw InvalidInput("unknown strategy mode: " + mode_name);
  }
  return TwoPointStrategy(MixedAction(vector_of(field(j, "tau_plus"), "tau_plus")),
                          MixedAction(vector_of(field(j, "tau_minus"), "tau_minus")),
                          number(j, "psi_plus"), number(j, "psi_minus"),
                          number(j, "p0"), number(j, "lambda"), number(j, "K"), mode,
                          vector_of(field(j, "response_at_0"), "response_at_0"),
                          vector_of(field(j, "response_at_1"), "response_at_1"));
}

ObjectiveSpec objective_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("objective must be a JSON object");
  const bool has_phi = j.contains("phi");
  const bool has_abg = j.contains("alpha") || j.contains("beta") || j.contains("gamma");
  const bool has_kc = j.contains("kappa") || j.contains("chi");
  if (has_phi + has_abg + has_kc != 1) {
    throw InvalidInput("objective needs exactly one of phi, alpha/beta/gamma, kappa/chi");
  }
  if (has_phi) return matrix_of(j.at("phi"), "phi");
  if (has_abg) {
    return LinearRelation(
        AlphaBetaGamma{number(j, "alpha"), number(j, "beta"), number(j, "gamma")});
  }
  return LinearRelation(KappaChi{number(j, "kappa"), number(j, "chi")});
}

ObjectiveMatrix resolve(const ObjectiveSpec& spec, const StageGame& game) {
  if (const auto* m = std::get_if<Matrix>(&spec)) {
    ObjectiveMatrix phi(*m);
    if (phi.rows() != game.rows() || phi.cols() != game.cols()) {
      throw InvalidInput("objective shape does not match the stage game");
    }
    return phi;
  }
  return build_linear_phi(game, std::get<LinearRelation>(spec));
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "t,p,s_y,phi\n";
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const Round& r = trace.rounds[t];
    out << t << ',' << format_number(r.p) << ',' << r.s_y << ','
        << format_number(r.phi) << '\n';
  }
}

void write_region_csv(std::ostream& out, const std::vector<RegionPoint>& points) {
  out << "pi_y,pi_x\n";
  for (const auto& p : points) {
    out << format_number(p.pi_y) << ',' << format_number(p.pi_x) << '\n';
  }
}

void write_heatmap_csv(std::ostream& out,
                       const std::vector<HeatmapRecord>& records) {
  out << "r,theta,kappa,chi,enforceable,lambda_min,mixed_optimizer\n";
  for (const auto& r : records) {
    out << format_number(r.r) << ',' << format_number(r.theta) << ','
        << format_number(r.kappa) << ',' << format_number(r.chi) << ','
        << csv_bool(r.enforceable) << ',' << format_number(r.lambda_min) << ','
        << csv_bool(r.mixed_optimizer) << '\n';
  }
}

}  // namespace autocrat::io
