#include "hawkes/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hawkes {

namespace {

double require_number(const nlohmann::json& record, const std::string& key) {
  if (!record.contains(key) || !record[key].is_number()) {
    throw ConfigError("config: missing or non-numeric field '" + key + "'");
  }
  return record[key].get<double>();
}

std::string require_kind(const nlohmann::json& record, const std::string& expected) {
  if (!record.is_object() || !record.contains("kind") ||
      !record["kind"].is_string()) {
    throw ConfigError("config: record missing string field 'kind'");
  }
  const std::string kind = record["kind"].get<std::string>();
  if (kind != expected) {
    throw ConfigError("config: expected kind '" + expected + "', got '" + kind +
                      "'");
  }
  return kind;
}

}  // namespace

nlohmann::json kernel_to_json(const ResponseKernel& kernel) {
  return {{"kind", "exponential"},
          {"alpha", kernel.alpha()},
          {"beta", kernel.beta()}};
}

ResponseKernel kernel_from_json(const nlohmann::json& record) {
  require_kind(record, "exponential");
  try {
    return ResponseKernel::exponential(require_number(record, "alpha"),
                                       require_number(record, "beta"));
  } catch (const std::domain_error& ex) {
    throw ConfigError(ex.what());
  }
}

nlohmann::json slowdown_to_json(const SlowdownSpec& spec) {
  return {{"kind", "polynomial"}, {"sigma", spec.sigma()}};
}

SlowdownSpec slowdown_from_json(const nlohmann::json& record) {
  require_kind(record, "polynomial");
  try {
    return SlowdownSpec::polynomial(require_number(record, "sigma"));
  } catch (const std::domain_error& ex) {
    throw ConfigError(ex.what());
  }
}

nlohmann::json interaction_to_json(const InteractionParams& params) {
  return {{"g1", kernel_to_json(params.g1)},
          {"g2", kernel_to_json(params.g2)},
          {"eta", params.eta}};
}

InteractionParams interaction_from_json(const nlohmann::json& record) {
  if (!record.is_object() || !record.contains("g1") || !record.contains("g2")) {
    throw ConfigError("config: interaction record requires 'g1' and 'g2'");
  }
  InteractionParams params{kernel_from_json(record["g1"]),
                           kernel_from_json(record["g2"]),
                           record.value("eta", 1.0)};
  return params;
}

nlohmann::json queue_config_to_json(const QueueConfig& config) {
  nlohmann::json record{
      {"arrivalRate", config.arrival_rate},
      {"patienceRate", config.patience_rate},
      {"maxConcurrency", config.max_concurrency},
      {"closureTarget", config.closure_target},
      {"slowdown", slowdown_to_json(config.slowdown)},
      {"quad",
       {{"g11", kernel_to_json(config.quad.g11)},
        {"g12", kernel_to_json(config.quad.g12)},
        {"g21", kernel_to_json(config.quad.g21)},
        {"g22", kernel_to_json(config.quad.g22)}}},
      {"horizon", config.horizon},
      {"replications", config.replications},
      {"seed", config.seed}};
  return record;
}

QueueConfig queue_config_from_json(const nlohmann::json& record) {
  if (!record.is_object()) {
    throw ConfigError("config: queue configuration must be an object");
  }
  QueueConfig config;
  config.arrival_rate = record.value("arrivalRate", config.arrival_rate);
  config.patience_rate = record.value("patienceRate", config.patience_rate);
  config.max_concurrency = record.value("maxConcurrency", config.max_concurrency);
  config.closure_target = record.value("closureTarget", config.closure_target);
  if (record.contains("slowdown")) {
    config.slowdown = slowdown_from_json(record["slowdown"]);
  }
  if (record.contains("preset")) {
    if (!record["preset"].is_string()) {
      throw ConfigError("config: 'preset' must be a string");
    }
    const std::string name = record["preset"].get<std::string>();
    const auto preset = preset_from_name(name);
    if (!preset) {
      throw ConfigError("config: unknown preset '" + name + "'");
    }
    config.quad = preset_params(*preset);
  } else if (record.contains("quad")) {
    const auto& quad = record["quad"];
    for (const char* key : {"g11", "g12", "g21", "g22"}) {
      if (!quad.contains(key)) {
        throw ConfigError(std::string("config: quad record requires '") + key +
                          "'");
      }
    }
    config.quad = QuadParams{kernel_from_json(quad["g11"]),
                             kernel_from_json(quad["g12"]),
                             kernel_from_json(quad["g21"]),
                             kernel_from_json(quad["g22"])};
  } else {
    throw ConfigError("config: queue configuration requires 'quad' or 'preset'");
  }
  config.horizon = record.value("horizon", config.horizon);
  config.replications = record.value("replications", config.replications);
  config.seed = record.value("seed", config.seed);
  if (record.contains("fixedDurationStub")) {
    config.fixed_duration_stub = require_number(record, "fixedDurationStub");
  }
  return config;
}

void apply_override(nlohmann::json& record, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("config: override must look like path.to.key=value, got '" +
                      assignment + "'");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  nlohmann::json* node = &record;
  std::size_t begin = 0;
  while (true) {
    const auto dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot - begin);
    if (key.empty()) {
      throw ConfigError("config: empty key segment in override '" + assignment +
                        "'");
    }
    if (dot == std::string::npos) {
      nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
      (*node)[key] = value.is_discarded() ? nlohmann::json(raw) : value;
      return;
    }
    node = &(*node)[key];
    begin = dot + 1;
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  nlohmann::json record = nlohmann::json::parse(in, nullptr, false);
  if (record.is_discarded()) {
    throw ConfigError("config: '" + path + "' is not valid structured text");
  }
  return record;
}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (!header.empty() && row.size() != header.size()) {
    throw std::logic_error("cli: csv rows must match the header width");
  }
  rows.push_back(row);
}

std::string format_number(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
}

}  // namespace

std::string csv_to_string(const CsvTable& table) {
  std::string out;
  write_line(out, table.header);
  for (const auto& row : table.rows) write_line(out, row);
  for (const auto& comment : table.footer_comments) {
    out += "# " + comment + '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cli: cannot open '" + path + "' for writing");
  }
  out << csv_to_string(table);
  if (!out) {
    throw std::runtime_error("cli: write failed for '" + path + "'");
  }
}

CsvTable cluster_to_csv(const ClusterRecord& record) {
  CsvTable table;
  table.header = {"epoch", "side", "parent", "mark"};
  for (std::size_t i = 0; i < record.epochs.size(); ++i) {
    table.add_row({format_number(record.epochs[i]),
                   std::to_string(static_cast<int>(record.sides[i])),
                   std::to_string(record.parents[i]),
                   format_number(record.marks[i])});
  }
  return table;
}

}  // namespace hawkes
