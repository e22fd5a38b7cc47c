// Command-line front end: configuration ingestion, presets, verification
// suites, and plot-ready CSV emission.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawkes/cluster.hpp"
#include "hawkes/combinatorics.hpp"
#include "hawkes/config.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/performance.hpp"
#include "hawkes/queue_sim.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

namespace {

using hawkes::CsvTable;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_config) {
  auto* config = cmd->add_option("--config", opts.config_path,
                                 "Structured text configuration file");
  if (needs_config) config->required();
  cmd->add_option("--out", opts.out_dir, "Output directory (must be writable)");
  cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)");
  cmd->add_option("--workers", opts.workers,
                  "Worker count; results are worker-count independent")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--set", opts.overrides,
                  "Flat key=value overrides applied after the config parse");
}

json load_config(const CommonOptions& opts) {
  json record = opts.config_path.empty() ? json::object()
                                         : hawkes::load_json_file(opts.config_path);
  for (const auto& assignment : opts.overrides) {
    hawkes::apply_override(record, assignment);
  }
  if (opts.seed) record["seed"] = *opts.seed;
  return record;
}

std::string out_path(const CommonOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

json report_to_json(const std::string& name, const hawkes::TestReport& report) {
  return {{"name", name},
          {"statistic", report.statistic},
          {"pValue", report.p_value},
          {"sampleSizes", {report.sample_sizes.first, report.sample_sizes.second}},
          {"level", report.level},
          {"verdict", report.verdict ? "pass" : "fail"}};
}

hawkes::InteractionParams interaction_from_config(const json& record) {
  if (!record.contains("interaction")) {
    throw hawkes::ConfigError("config: missing 'interaction' record");
  }
  return hawkes::interaction_from_json(record["interaction"]);
}

// ---------------------------------------------------------------------------
// cluster: telephone-wire export plus a replication summary.

int cmd_cluster(const CommonOptions& opts) {
  const json record = load_config(opts);
  hawkes::InteractionParams params = interaction_from_config(record);
  params.require_stable();
  const std::string sampler = record.value("sampler", std::string("parking"));
  const long replications = record.value("replications", 1000L);
  const std::uint64_t seed = record.value("seed", 0ULL);
  if (sampler != "parking" && sampler != "thinning") {
    throw hawkes::ConfigError("config: sampler must be 'parking' or 'thinning'");
  }
  auto draw = [&](hawkes::RngStream& rng) {
    return sampler == "parking" ? hawkes::simulate_cluster_parking(params, rng)
                                : hawkes::simulate_cluster_thinning(params, rng);
  };

  hawkes::RngStream wire_rng(seed, static_cast<std::uint64_t>(replications));
  const hawkes::ClusterRecord wire = draw(wire_rng);
  hawkes::emit_csv(hawkes::cluster_to_csv(wire), out_path(opts, "cluster.csv"));

  std::vector<double> durations;
  std::vector<double> sizes;
  durations.reserve(static_cast<std::size_t>(replications));
  sizes.reserve(static_cast<std::size_t>(replications));
  for (long r = 0; r < replications; ++r) {
    hawkes::RngStream rng(seed, static_cast<std::uint64_t>(r));
    const hawkes::ClusterRecord c = draw(rng);
    durations.push_back(c.duration());
    sizes.push_back(static_cast<double>(c.size()));
  }
  const hawkes::MeanCi dur = hawkes::mean_ci(durations);
  const hawkes::MeanCi size = hawkes::mean_ci(sizes);
  json summary{{"sampler", sampler},
               {"replications", replications},
               {"seed", seed},
               {"interaction", hawkes::interaction_to_json(params)},
               {"duration", {{"mean", dur.mean}, {"ciHalfWidth", dur.half_width}}},
               {"size", {{"mean", size.mean}, {"ciHalfWidth", size.half_width}}},
               {"expectedSize", 1.0 / (1.0 - params.rho())}};
  std::ofstream out(out_path(opts, "summary.json"), std::ios::binary);
  out << summary.dump(2) << '\n';
  std::cout << "cluster: wrote cluster.csv and summary.json (mean duration "
            << hawkes::format_number(dur.mean) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep-k: Monte Carlo throughput against concurrency with analytic bounds.

CsvTable curve_to_csv(const hawkes::ThroughputCurve& curve,
                      const std::string& x_name) {
  CsvTable table;
  table.header = {x_name,      "estimate",   "ciLow", "ciHigh",
                  "guaranteed", "idealized"};
  for (const auto& pt : curve.points) {
    if (pt.error) {
      table.footer_comments.push_back(
          x_name + "=" + hawkes::format_number(pt.x) + " error: " + *pt.error);
      continue;
    }
    table.add_row({hawkes::format_number(pt.x),
                   hawkes::format_number(pt.estimate),
                   hawkes::format_number(pt.estimate - pt.ci_half_width),
                   hawkes::format_number(pt.estimate + pt.ci_half_width),
                   hawkes::format_number(pt.guaranteed),
                   hawkes::format_number(pt.idealized)});
  }
  table.footer_comments.push_back(
      "shape=" + hawkes::shape_name(hawkes::classify_shape(curve)));
  return table;
}

std::vector<double> grid_from_config(const json& record, const std::string& key) {
  std::vector<double> grid;
  if (record.contains(key)) {
    for (const auto& v : record[key]) grid.push_back(v.get<double>());
  }
  return grid;
}

int cmd_sweep_k(const CommonOptions& opts, std::optional<double> sigma_flag) {
  const json record = load_config(opts);
  hawkes::InteractionParams params = interaction_from_config(record);
  params.require_stable();
  double sigma = record.contains("slowdown")
                     ? hawkes::slowdown_from_json(record["slowdown"]).sigma()
                     : 1.0;
  if (sigma_flag) sigma = *sigma_flag;
  const hawkes::SlowdownSpec h = hawkes::SlowdownSpec::polynomial(sigma);
  const long replications = record.value("replications", 10000L);
  const std::uint64_t seed = record.value("seed", 0ULL);

  const hawkes::AsyncMeans means =
      hawkes::estimate_async_means(params, replications, seed, 1u << 20);
  std::vector<double> grid = grid_from_config(record, "kGrid");
  if (grid.empty()) {
    // Default: 12 geometric points centered on the peak bracket when one
    // exists, else spanning [1/4, 16].
    double lo = 0.25, hi = 16.0;
    if (h.strictly_convex()) {
      const auto opt = hawkes::solve_kstar(means, h);
      lo = 0.25 * opt.k_star;
      hi = 4.0 * opt.k_star;
    }
    for (int i = 0; i < 12; ++i) {
      grid.push_back(lo * std::pow(hi / lo, i / 11.0));
    }
  }
  const hawkes::ThroughputCurve curve =
      hawkes::sweep_concurrency(params, h, means, grid, replications, seed);
  CsvTable table = curve_to_csv(curve, "K");
  if (h.strictly_convex()) {
    const auto opt = hawkes::solve_kstar(means, h);
    table.footer_comments.push_back("kStar=" + hawkes::format_number(opt.k_star) +
                                    " bracket=[" +
                                    hawkes::format_number(opt.k_lower) + "," +
                                    hawkes::format_number(opt.k_upper) + "]");
  }
  hawkes::emit_csv(table, out_path(opts, "sweep_k.csv"));
  std::cout << "sweep-k: wrote sweep_k.csv ("
            << table.footer_comments.front() << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep-rho: optimized throughput across the interdependence spectrum.

int cmd_sweep_rho(const CommonOptions& opts) {
  const json record = load_config(opts);
  hawkes::InteractionParams params = interaction_from_config(record);
  const double rho_total = record.value("rhoTotal", params.rho());
  double sigma = 2.0;
  if (record.contains("slowdown")) {
    sigma = hawkes::slowdown_from_json(record["slowdown"]).sigma();
  }
  const hawkes::SlowdownSpec h = hawkes::SlowdownSpec::polynomial(sigma);
  const long replications = record.value("replications", 10000L);
  const std::uint64_t seed = record.value("seed", 0ULL);
  std::vector<double> grid = grid_from_config(record, "rho1Grid");
  if (grid.empty()) {
    for (double f : {0.1, 0.25, 0.5, 0.75, 0.9}) grid.push_back(f * rho_total);
  }
  const hawkes::ThroughputCurve curve = hawkes::sweep_interdependence(
      params, h, rho_total, grid, replications, seed);
  const CsvTable table = curve_to_csv(curve, "rho1");
  hawkes::emit_csv(table, out_path(opts, "sweep_rho.csv"));
  std::cout << "sweep-rho: wrote sweep_rho.csv ("
            << table.footer_comments.front() << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// queue: per-(sigma, kappa) metrics table.

int cmd_queue(const CommonOptions& opts, bool log_events) {
  const json record = load_config(opts);
  const hawkes::QueueConfig base = hawkes::queue_config_from_json(record);
  std::vector<double> sigma_grid = grid_from_config(record, "sigmaGrid");
  if (sigma_grid.empty()) sigma_grid.push_back(base.slowdown.sigma());
  std::vector<int> kappa_grid;
  if (record.contains("kappaGrid")) {
    for (const auto& v : record["kappaGrid"]) kappa_grid.push_back(v.get<int>());
  } else {
    kappa_grid.push_back(base.max_concurrency);
  }

  std::ofstream log_stream;
  if (log_events) {
    log_stream.open(out_path(opts, "events.log"), std::ios::binary);
  }
  hawkes::KappaTable table;
  if (log_events && sigma_grid.size() == 1 && kappa_grid.size() == 1) {
    hawkes::KappaCell cell;
    cell.sigma = sigma_grid.front();
    cell.kappa = kappa_grid.front();
    hawkes::QueueConfig cfg = base;
    cfg.slowdown = hawkes::SlowdownSpec::polynomial(cell.sigma);
    cfg.max_concurrency = cell.kappa;
    cell.metrics = hawkes::simulate_queue(cfg, &log_stream);
    table.cells.push_back(cell);
  } else {
    table = hawkes::sweep_kappa(base, kappa_grid, sigma_grid);
  }

  CsvTable csv;
  csv.header = {"sigma",       "kappa",      "throughput", "throughputCi",
                "abandonRate", "abandonCi",  "occupancy"};
  for (const auto& cell : table.cells) {
    if (cell.error) {
      csv.footer_comments.push_back("sigma=" + hawkes::format_number(cell.sigma) +
                                    " kappa=" + std::to_string(cell.kappa) +
                                    " error: " + *cell.error);
      continue;
    }
    csv.add_row({hawkes::format_number(cell.sigma), std::to_string(cell.kappa),
                 hawkes::format_number(cell.metrics.throughput),
                 hawkes::format_number(cell.metrics.throughput_ci),
                 hawkes::format_number(cell.metrics.abandonment_rate),
                 hawkes::format_number(cell.metrics.abandonment_ci),
                 hawkes::format_number(cell.metrics.mean_occupancy)});
  }
  for (double sigma : sigma_grid) {
    const auto argmax = table.throughput_argmax(sigma);
    const auto argmin = table.abandonment_argmin(sigma);
    if (argmax && argmin) {
      csv.footer_comments.push_back(
          "sigma=" + hawkes::format_number(sigma) +
          " throughputArgmaxKappa=" + std::to_string(*argmax) +
          " abandonArgminKappa=" + std::to_string(*argmin));
    }
  }
  csv.footer_comments.push_back(hawkes::preset_metadata_note());
  hawkes::emit_csv(csv, out_path(opts, "queue.csv"));
  std::cout << "queue: wrote queue.csv (" << table.cells.size() << " cells)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify: quick statistical self-checks, one suite per module family.

using SuiteResult = std::vector<std::pair<std::string, hawkes::TestReport>>;

SuiteResult suite_combinatorics(std::uint64_t seed) {
  SuiteResult out;
  const long n = 100000;

  {
    hawkes::RngStream rng(seed, 0);
    const hawkes::BorelLaw law{0.5};
    std::vector<long> counts(60, 0);
    for (long i = 0; i < n; ++i) {
      const long size = hawkes::sample_borel(law, rng);
      counts[std::min<long>(size, 60) - 1] += 1;
    }
    std::vector<double> probs(60, 0.0);
    double head = 0.0;
    for (int k = 1; k <= 59; ++k) {
      probs[k - 1] = hawkes::borel_pmf(law, k);
      head += probs[k - 1];
    }
    probs[59] = 1.0 - head;
    out.emplace_back("borelSizeLaw", hawkes::chi_square_gof(counts, probs));
  }

  {
    // All 16 parking functions of length 3 should be equally likely.
    std::map<std::vector<int>, int> index;
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= 3; ++b) {
        for (int c = 1; c <= 3; ++c) {
          const std::vector<int> pf{a, b, c};
          if (hawkes::is_parking_function(pf)) {
            index.emplace(pf, static_cast<int>(index.size()));
          }
        }
      }
    }
    hawkes::RngStream rng(seed, 1);
    std::vector<long> counts(index.size(), 0);
    for (long i = 0; i < n; ++i) {
      counts[static_cast<std::size_t>(
          index.at(hawkes::sample_uniform_parking_function(3, rng)))] += 1;
    }
    const std::vector<double> probs(index.size(), 1.0 / double(index.size()));
    out.emplace_back("parkingUniform", hawkes::chi_square_gof(counts, probs));
  }

  {
    // Two-point weighted path frequencies against the closed-form weights.
    const std::vector<double> marks{2.0, 1.0};
    const std::vector<double> probs = hawkes::weighted_dyck_distribution(2, marks);
    const auto& paths = hawkes::enumerate_dyck_paths(2);
    std::map<hawkes::DyckPath, std::size_t> index;
    for (std::size_t i = 0; i < paths.size(); ++i) index[paths[i]] = i;
    hawkes::RngStream rng(seed, 2);
    std::vector<long> counts(paths.size(), 0);
    for (long i = 0; i < n; ++i) {
      counts[index.at(hawkes::sample_weighted_dyck_path(2, marks, rng))] += 1;
    }
    out.emplace_back("weightedDyckTwoPoint",
                     hawkes::chi_square_gof(counts, probs));
  }
  return out;
}

SuiteResult suite_cluster(std::uint64_t seed) {
  SuiteResult out;
  const hawkes::InteractionParams params{
      hawkes::ResponseKernel::exponential(0.6, 2.0),
      hawkes::ResponseKernel::exponential(0.4, 1.0), 2.0};
  const long n = 20000;
  std::vector<double> dur_thin, dur_park;
  std::vector<long> size_thin(40, 0), size_park(40, 0);
  for (long i = 0; i < n; ++i) {
    hawkes::RngStream rng_a(seed, static_cast<std::uint64_t>(i));
    hawkes::RngStream rng_b(seed, static_cast<std::uint64_t>(i) + (1ULL << 32));
    const auto a = hawkes::simulate_cluster_thinning(params, rng_a);
    const auto b = hawkes::simulate_cluster_parking(params, rng_b);
    dur_thin.push_back(a.duration());
    dur_park.push_back(b.duration());
    size_thin[std::min<long>(a.size(), 40) - 1] += 1;
    size_park[std::min<long>(b.size(), 40) - 1] += 1;
  }
  out.emplace_back("durationEquivalence",
                   hawkes::ks_two_sample(dur_thin, dur_park));
  std::vector<double> probs(40, 0.0);
  double head = 0.0;
  const hawkes::BorelLaw law{params.rho()};
  for (int k = 1; k <= 39; ++k) {
    probs[k - 1] = hawkes::borel_pmf(law, k);
    head += probs[k - 1];
  }
  probs[39] = 1.0 - head;
  out.emplace_back("thinningSizeLaw", hawkes::chi_square_gof(size_thin, probs));
  out.emplace_back("parkingSizeLaw", hawkes::chi_square_gof(size_park, probs));
  return out;
}

SuiteResult suite_stats(std::uint64_t seed) {
  SuiteResult out;
  {
    // Null calibration: identically distributed samples must pass at least
    // 95 of 100 trials at level 0.01.
    int passes = 0;
    for (int trial = 0; trial < 100; ++trial) {
      hawkes::RngStream rng(seed, static_cast<std::uint64_t>(trial));
      std::vector<double> a(500), b(500);
      for (auto& v : a) v = rng.exponential(1.0);
      for (auto& v : b) v = rng.exponential(1.0);
      if (hawkes::ks_two_sample(a, b).verdict) ++passes;
    }
    hawkes::TestReport report;
    report.statistic = passes;
    report.p_value = passes >= 95 ? 1.0 : 0.0;
    report.sample_sizes = {100, 500};
    report.verdict = passes >= 95;
    out.emplace_back("ksNullCalibration", report);
  }
  {
    hawkes::RngStream rng(seed, 1000);
    std::vector<double> a(10000), b(10000);
    for (auto& v : a) v = rng.exponential(1.0);
    for (auto& v : b) v = rng.exponential(3.0);
    hawkes::TestReport report = hawkes::ks_two_sample(a, b);
    report.verdict = report.p_value < 1e-6;  // separation must be detected
    out.emplace_back("ksSeparation", report);
  }
  return out;
}

SuiteResult suite_queue(std::uint64_t seed) {
  SuiteResult out;
  {
    // Saturated single-server stub: completions pace at one per stub duration.
    hawkes::QueueConfig cfg;
    cfg.arrival_rate = 50.0;
    cfg.patience_rate = 0.0;
    cfg.max_concurrency = 1;
    cfg.horizon = 400.0;
    cfg.replications = 16;
    cfg.seed = seed;
    cfg.fixed_duration_stub = 2.0;
    const hawkes::QueueMetrics metrics = hawkes::simulate_queue(cfg);
    hawkes::TestReport report;
    report.statistic = metrics.throughput;
    report.verdict = std::abs(metrics.throughput - 0.5) <
                     std::max(metrics.throughput_ci, 0.01);
    report.p_value = report.verdict ? 1.0 : 0.0;
    report.sample_sizes = {16, 0};
    out.emplace_back("stubSaturatedRate", report);
  }
  {
    // Full dynamics smoke run; the engine checks flow conservation exactly.
    hawkes::QueueConfig cfg;
    cfg.arrival_rate = 4.0;
    cfg.patience_rate = 0.5;
    cfg.max_concurrency = 2;
    cfg.horizon = 50.0;
    cfg.replications = 8;
    cfg.seed = seed;
    cfg.quad = hawkes::preset_params(hawkes::Preset::ModerateCo);
    const hawkes::QueueMetrics metrics = hawkes::simulate_queue(cfg);
    hawkes::TestReport report;
    report.statistic = metrics.throughput;
    report.verdict = metrics.throughput > 0.0;
    report.p_value = report.verdict ? 1.0 : 0.0;
    report.sample_sizes = {8, 0};
    out.emplace_back("flowConservation", report);
  }
  return out;
}

int cmd_verify(const CommonOptions& opts, const std::string& suite) {
  const std::uint64_t seed = opts.seed.value_or(0);
  SuiteResult results;
  if (suite == "combinatorics") results = suite_combinatorics(seed);
  else if (suite == "cluster") results = suite_cluster(seed);
  else if (suite == "stats") results = suite_stats(seed);
  else if (suite == "queue") results = suite_queue(seed);
  else {
    throw hawkes::ConfigError(
        "config: unknown suite '" + suite +
        "' (expected combinatorics, cluster, stats, or queue)");
  }
  json report = json::array();
  bool all_pass = true;
  for (const auto& [name, r] : results) {
    report.push_back(report_to_json(name, r));
    all_pass = all_pass && r.verdict;
    std::cout << "verify[" << suite << "] " << name << ": "
              << (r.verdict ? "pass" : "fail") << " (statistic "
              << hawkes::format_number(r.statistic) << ", p "
              << hawkes::format_number(r.p_value) << ")\n";
  }
  std::ofstream out(out_path(opts, "verify_" + suite + ".json"),
                    std::ios::binary);
  out << report.dump(2) << '\n';
  if (!all_pass) {
    std::cerr << "stats-verify: suite '" << suite
              << "' rejected a distributional invariant at level "
              << hawkes::kTestLevel << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// presets: print the quad-directional parameter bundles.

void print_preset(hawkes::Preset preset) {
  const hawkes::QuadParams quad = hawkes::preset_params(preset);
  std::cout << hawkes::preset_name(preset) << ":\n";
  for (int x = 1; x <= 2; ++x) {
    for (int y = 1; y <= 2; ++y) {
      const auto& g = quad.kernel(x, y);
      std::cout << "  g" << x << y << " = " << g.describe() << "\n";
    }
  }
  std::cout << "  spectralRadius = "
            << hawkes::format_number(hawkes::check_stability_quad(quad))
            << "\n  expectedSize = "
            << hawkes::format_number(hawkes::expected_size_quad(quad)) << "\n";
}

int cmd_presets(const std::string& name) {
  if (name.empty()) {
    for (auto preset : {hawkes::Preset::HighCo, hawkes::Preset::ModerateCo,
                        hawkes::Preset::ModerateSelf, hawkes::Preset::HighSelf}) {
      print_preset(preset);
    }
  } else {
    const auto preset = hawkes::preset_from_name(name);
    if (!preset) {
      throw hawkes::ConfigError("config: unknown preset '" + name + "'");
    }
    print_preset(*preset);
  }
  std::cout << "note: " << hawkes::preset_metadata_note() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided service-interaction simulator and optimizer"};
  app.require_subcommand(1);

  CommonOptions cluster_opts, sweep_k_opts, sweep_rho_opts, queue_opts,
      verify_opts;
  std::optional<double> sigma_flag;
  bool log_events = false;
  std::string suite = "combinatorics";
  std::string preset_name;

  auto* cluster = app.add_subcommand("cluster", "Sample interaction clusters");
  add_common(cluster, cluster_opts, true);

  auto* sweep_k = app.add_subcommand("sweep-k", "Throughput vs concurrency");
  add_common(sweep_k, sweep_k_opts, true);
  sweep_k->add_option("--sigma", sigma_flag, "Slowdown exponent override");

  auto* sweep_rho =
      app.add_subcommand("sweep-rho", "Optimized throughput vs interdependence");
  add_common(sweep_rho, sweep_rho_opts, true);

  auto* queue = app.add_subcommand("queue", "Service-system queue experiment");
  add_common(queue, queue_opts, true);
  queue->add_flag("--log-events", log_events,
                  "Write a per-event log (single-cell runs only)");

  auto* verify = app.add_subcommand("verify", "Statistical self-checks");
  add_common(verify, verify_opts, false);
  verify->add_option("--suite", suite,
                     "combinatorics | cluster | stats | queue");

  auto* presets = app.add_subcommand("presets", "Show parameter presets");
  presets->add_option("--name", preset_name, "Preset name (default: all)");

  try {
    app.parse(argc, argv);
    if (cluster->parsed()) return cmd_cluster(cluster_opts);
    if (sweep_k->parsed()) return cmd_sweep_k(sweep_k_opts, sigma_flag);
    if (sweep_rho->parsed()) return cmd_sweep_rho(sweep_rho_opts);
    if (queue->parsed()) return cmd_queue(queue_opts, log_events);
    if (verify->parsed()) return cmd_verify(verify_opts, suite);
    if (presets->parsed()) return cmd_presets(preset_name);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError&) {
    std::cerr << "cli: invalid command line (see --help)\n";
    return 2;
  } catch (const hawkes::ConfigError& ex) {
    std::cerr << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return 1;
  }
}
