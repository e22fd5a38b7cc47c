#ifndef HAWKES_CONFIG_HPP
#define HAWKES_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/cluster.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/queue_sim.hpp"

namespace hawkes {

/// Malformed configuration input (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json kernel_to_json(const ResponseKernel& kernel);
ResponseKernel kernel_from_json(const nlohmann::json& record);

nlohmann::json slowdown_to_json(const SlowdownSpec& spec);
SlowdownSpec slowdown_from_json(const nlohmann::json& record);

nlohmann::json interaction_to_json(const InteractionParams& params);
InteractionParams interaction_from_json(const nlohmann::json& record);

nlohmann::json queue_config_to_json(const QueueConfig& config);
/// Accepts either an inline "quad" record of four kernels or a "preset" name.
QueueConfig queue_config_from_json(const nlohmann::json& record);

/// Applies one flat `dotted.path=value` override onto a parsed record. Values
/// parse as JSON scalars when possible, else as strings.
void apply_override(nlohmann::json& record, const std::string& assignment);

nlohmann::json load_json_file(const std::string& path);

/// Rectangular plot-ready table; all numbers rendered at 12 significant
/// digits with '.' decimal separator.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer_comments;  // emitted as trailing "# ..." lines

  void add_row(const std::vector<std::string>& row);
};

std::string format_number(double value);
std::string csv_to_string(const CsvTable& table);
void emit_csv(const CsvTable& table, const std::string& path);

/// Telephone-wire export: one row per contribution (epoch, side, parent, mark).
CsvTable cluster_to_csv(const ClusterRecord& record);

}  // namespace hawkes

#endif
