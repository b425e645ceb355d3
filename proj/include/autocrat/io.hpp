#ifndef AUTOCRAT_IO_HPP_
#define AUTOCRAT_IO_HPP_

#include <iosfwd>
#include <string>
#include <variant>

#include <json.hpp>

#include "autocrat/core.hpp"
#include "autocrat/enforce.hpp"
#include "autocrat/games.hpp"
#include "autocrat/sim.hpp"
#include "autocrat/synth.hpp"

namespace autocrat::io {

using Json = nlohmann::ordered_json;

// 12 significant digits, '.' decimal, no locale; -0 prints as 0.
std::string format_number(double v);

// Serializes with format_number for every float. Scalar arrays stay on one
// line.
std::string dump(const Json& j);

Json parse(const std::string& text);
Json read_file(const std::string& path);

Json to_json(const MixedAction& tau);
Json to_json(const StageGame& game);
Json to_json(const EnforceabilityReport& report);
Json to_json(const TwoPointStrategy& strategy);

StageGame game_from_json(const Json& j);
TwoPointStrategy strategy_from_json(const Json& j);

// One of {"phi": ...}, {"alpha","beta","gamma"}, {"kappa","chi"}.
using ObjectiveSpec = std::variant<Matrix, LinearRelation>;

ObjectiveSpec objective_from_json(const Json& j);
ObjectiveMatrix resolve(const ObjectiveSpec& spec, const StageGame& game);

void write_trace_csv(std::ostream& out, const Trace& trace);
void write_region_csv(std::ostream& out, const std::vector<RegionPoint>& points);
void write_heatmap_csv(std::ostream& out,
                       const std::vector<HeatmapRecord>& records);

}  // namespace autocrat::io

#endif  // AUTOCRAT_IO_HPP_
