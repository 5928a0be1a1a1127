// sgauge: run one verification study and write <study>.csv,
// <study>.summary.json and a table on stdout.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a checked
// threshold was missed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sgauge/sgauge.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sgauge;
using namespace sgauge::harness;

const std::vector<std::string> kStudies{"converge-action",   "converge-derivative", "converge-holonomy",
                                        "converge-transport", "origin-dependence",   "gauge-check",
                                        "noether-check",      "eval-action"};

constexpr double kGaugeTolerance = 1e-10;
constexpr double kNoetherTolerance = 1e-6;
constexpr double kNoetherReduction = 8.0;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string study;
  Group group = Group::SU2;
  std::string field = "trig";
  double amplitude = 1.0;
  std::vector<int> ns;
  std::uint64_t seed = 7;
  std::string out = ".";
  std::optional<double> assert_order;
  int directions = 32;
  bool coordinate_directions = true;
  int trials = 20;
};

std::vector<int> default_levels(const std::string& study) {
  if (study == "converge-derivative") return {2, 3, 4, 6};
  if (study == "gauge-check" || study == "eval-action") return {2};
  if (study == "noether-check") return {1};
  return {2, 3, 4, 6, 8};
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> ns;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid mesh level '" + item + "' in --ns");
    }
    if (used != item.size()) throw UsageError("invalid mesh level '" + item + "' in --ns");
    ns.push_back(v);
  }
  return ns;
}

void load_config_file(const std::string& path, Config& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "study") {
        const auto s = value.get<std::string>();
        if (s != cfg.study) throw UsageError("config study '" + s + "' does not match '" + cfg.study + "'");
      } else if (key == "group") {
        cfg.group = parse_group(value.get<std::string>());
      } else if (key == "field") {
        cfg.field = value.get<std::string>();
      } else if (key == "amplitude") {
        cfg.amplitude = value.get<double>();
      } else if (key == "ns") {
        cfg.ns = value.get<std::vector<int>>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else if (key == "assert_order") {
        cfg.assert_order = value.get<double>();
      } else if (key == "directions") {
        cfg.directions = value.get<int>();
      } else if (key == "coordinate_directions") {
        cfg.coordinate_directions = value.get<bool>();
      } else if (key == "trials") {
        cfg.trials = value.get<int>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  } catch (const sgauge::InvalidArgument& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Outcome {
  ConvergenceReport report;
  std::vector<std::string> failures;
};

Outcome run_study(const Config& cfg) {
  Outcome o;
  const auto spec = [&] { return builtin_field(cfg.field, cfg.group, cfg.amplitude); };
  const auto& s = cfg.study;
  if (s == "converge-action") {
    o.report = consistency_action_study(spec(), cfg.ns);
  } else if (s == "converge-derivative") {
    DerivativeStudyOptions opt;
    opt.directions = cfg.directions;
    opt.coordinate_directions = cfg.coordinate_directions;
    o.report = consistency_derivative_study(spec(), cfg.ns, cfg.seed, opt);
  } else if (s == "converge-holonomy") {
    o.report = holonomy_error_study(spec(), cfg.ns);
  } else if (s == "converge-transport") {
    o.report = transport_conjugation_study(spec(), cfg.ns);
  } else if (s == "origin-dependence") {
    o.report = origin_dependence_study(spec(), cfg.ns);
  } else if (s == "eval-action") {
    o.report = evaluate_actions(spec(), cfg.ns);
  } else if (s == "gauge-check") {
    GaugeCheckOptions opt;
    opt.trials = cfg.trials;
    o.report = gauge_invariance_study(cfg.group, cfg.ns, cfg.seed, opt);
    for (const auto& row : o.report.rows)
      if (!(row.error <= kGaugeTolerance))
        o.failures.push_back("n=" + std::to_string(row.n) + ": relative change " + format_number(row.error) +
                             " exceeds " + format_number(kGaugeTolerance));
  } else if (s == "noether-check") {
    o.report = noether_study(cfg.group, cfg.ns, cfg.seed);
    for (const auto& row : o.report.rows) {
      if (!(row.error <= kNoetherTolerance))
        o.failures.push_back("n=" + std::to_string(row.n) + ": residual " + format_number(row.error) + " exceeds " +
                             format_number(kNoetherTolerance));
      if (!(row.extra[3] >= kNoetherReduction))
        o.failures.push_back("n=" + std::to_string(row.n) + ": residual reduction " + format_number(row.extra[3]) +
                             " below " + format_number(kNoetherReduction));
    }
  }
  if (cfg.assert_order) {
    const auto& fit = o.report.fit;
    if (!fit)
      o.failures.push_back("no fitted order to compare with --assert-order");
    else if (!(fit->slope >= *cfg.assert_order))
      o.failures.push_back("fitted slope " + format_number(fit->slope) + " below " + format_number(*cfg.assert_order));
  }
  return o;
}

json summary(const Config& cfg, const Outcome& o) {
  const auto& r = o.report;
  json j;
  j["study"] = r.study;
  j["slope"] = r.fit ? number_or_null(r.fit->slope) : json(nullptr);
  j["residual"] = r.fit ? number_or_null(r.fit->residual) : json(nullptr);
  j["all_zero"] = r.fit ? r.fit->all_zero : false;
  j["group"] = std::string(group_name(r.group));
  j["field"] = r.field;
  j["ns"] = cfg.ns;
  j["seed"] = cfg.seed;
  double max_error = 0.0;
  for (const auto& row : r.rows) max_error = std::max(max_error, row.error);
  j["max_error"] = max_error;
  if (cfg.assert_order) j["assert_order"] = *cfg.assert_order;
  j["passed"] = o.failures.empty();
  j["failures"] = o.failures;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Run a verification study for the simplicial gauge discretization."};
  Config cfg;
  std::string config_path, group_flag, ns_flag;
  double assert_order = 0.0;
  std::string field_flag;
  app.add_option("study", cfg.study, "study id")->required()->check(CLI::IsMember(kStudies));
  auto* config_opt = app.add_option("--config", config_path, "JSON config with flat keys");
  auto* group_opt = app.add_option("--group", group_flag, "u1, su2 or su3");
  auto* ns_opt = app.add_option("--ns", ns_flag, "comma-separated mesh levels, e.g. 2,3,4,6,8");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "random seed");
  auto* out_opt = app.add_option("--out", cfg.out, "output directory");
  auto* order_opt = app.add_option("--assert-order", assert_order, "exit 2 if the fitted slope is below this");
  auto* field_opt = app.add_option("--field", field_flag, "built-in field: trig, constant, flat or linear");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::string out_flag = cfg.out;
  const std::uint64_t seed_flag = cfg.seed;
  try {
    cfg.ns = default_levels(cfg.study);
    if (*config_opt) load_config_file(config_path, cfg);
    if (*group_opt) cfg.group = parse_group(group_flag);
    if (*ns_opt) cfg.ns = parse_levels(ns_flag);
    if (*seed_opt) cfg.seed = seed_flag;
    if (*out_opt) cfg.out = out_flag;
    if (*order_opt) cfg.assert_order = assert_order;
    if (*field_opt) cfg.field = field_flag;
    check_levels(cfg.ns);
    builtin_field(cfg.field, cfg.group, cfg.amplitude);
  } catch (const UsageError& e) {
    std::cerr << "sgauge: " << e.what() << '\n';
    return 1;
  } catch (const sgauge::InvalidArgument& e) {
    std::cerr << "sgauge: " << e.what() << '\n';
    return 1;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec || !std::filesystem::is_directory(cfg.out)) {
    std::cerr << "sgauge: cannot use output directory '" << cfg.out << "'\n";
    return 1;
  }

  Outcome o;
  try {
    o = run_study(cfg);
  } catch (const sgauge::Error& e) {
    std::cerr << "sgauge: " << cfg.study << " failed: " << e.what() << '\n';
    return 1;
  }

  const auto& r = o.report;
  std::cout << r.study << "  group=" << group_name(r.group) << "  field=" << r.field << "  seed=" << cfg.seed << '\n'
            << to_table(r);
  if (r.fit) {
    if (r.fit->all_zero)
      std::cout << "all errors vanish\n";
    else
      std::cout << "slope " << format_number(r.fit->slope) << "  residual " << format_number(r.fit->residual) << '\n';
  }
  for (const auto& f : o.failures) std::cerr << "sgauge: FAILED " << f << '\n';

  try {
    const std::filesystem::path dir(cfg.out);
    write_file(dir / (r.study + ".csv"), to_csv(r));
    write_file(dir / (r.study + ".summary.json"), summary(cfg, o).dump() + "\n");
  } catch (const UsageError& e) {
    std::cerr << "sgauge: " << e.what() << '\n';
    return 1;
  }
  return o.failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
