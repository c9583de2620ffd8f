#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppqc/entanglement.hpp"
#include "ppqc/errors.hpp"
#include "ppqc/estimation.hpp"
#include "ppqc/protocols.hpp"
#include "ppqc/states.hpp"

namespace ppqc::cli {

using Value = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

// Floats carry 12 significant digits so sweeps diff cleanly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_value(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return x; }
  };
  return std::visit(Visitor{}, v);
}

// Rows of named columns; the column set is fixed per command.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row) {
    if (row.size() != columns.size())
      throw ConfigError("ResultTable: row width differs from the column set");
    rows.push_back(std::move(row));
  }

  // Comma separated, header row, LF endings, no quoting (values never
  // contain commas).
  std::string csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out += ',';
        out += format_value(row[c]);
      }
      out += '\n';
    }
    return out;
  }

  std::string json_text() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj;
      for (std::size_t c = 0; c < row.size(); ++c) {
        const Value& v = row[c];
        if (std::holds_alternative<std::int64_t>(v))
          obj[columns[c]] = std::get<std::int64_t>(v);
        else if (std::holds_alternative<std::uint64_t>(v))
          obj[columns[c]] = std::get<std::uint64_t>(v);
        else if (std::holds_alternative<double>(v))
          obj[columns[c]] = std::get<double>(v);
        else if (std::holds_alternative<bool>(v))
          obj[columns[c]] = std::get<bool>(v);
        else
          obj[columns[c]] = std::get<std::string>(v);
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

struct ExperimentConfig {
  std::string command;
  std::string protocol = "deutsch-jozsa";
  std::optional<int> n1;
  std::optional<int> n2;
  std::string oracle;                 // run
  std::vector<std::string> oracles;   // threshold
  std::vector<double> epsilons;
  std::vector<double> p_values;
  int steps = 101;
  int max_n = 16;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool json_output = false;
  std::string out_path;  // empty means stdout
};

// PPQC_THREADS caps sweep concurrency; grid results land in preallocated
// slots so the thread count never changes the output.
inline unsigned sweep_threads(std::size_t points) {
  unsigned limit = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PPQC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      limit = std::min<long>(limit, v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(limit, points));
}

template <typename Fn>
void sweep_for(std::size_t count, Fn&& fn) {
  const unsigned nthreads = sweep_threads(count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Oracle specs: "parity", "identity", "constant:<v>", "modexp:<a>:<N>", or a
// path to a truth-table file (recognized by containing '/' or '.').
inline OracleFunction make_oracle(const std::string& spec, int n1, int n2) {
  if (spec == "parity") return OracleFunction::parity(n1, n2);
  if (spec == "identity") {
    if (n2 < n1)
      throw ConfigError("oracle 'identity' needs an output register at least as wide as the input");
    return OracleFunction::identity_fn(n1, n2);
  }
  if (spec.rfind("constant:", 0) == 0) {
    const std::string arg = spec.substr(9);
    try {
      return OracleFunction::constant_fn(n1, n2, static_cast<std::uint32_t>(std::stoul(arg)));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad constant oracle value: '" + arg + "'");
    }
  }
  if (spec.rfind("modexp:", 0) == 0) {
    unsigned a = 0, n = 0;
    if (std::sscanf(spec.c_str(), "modexp:%u:%u", &a, &n) != 2)
      throw ConfigError("bad modexp oracle spec: '" + spec + "'");
    return OracleFunction::mod_power(a, n, n1, n2);
  }
  if (spec.find('/') != std::string::npos || spec.find('.') != std::string::npos)
    return OracleFunction::load(spec);
  throw ConfigError("unknown oracle name: '" + spec + "'");
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

// deutsch-jozsa / order-finding runs over a list of noise weights.
inline ResultTable cmd_run(const ExperimentConfig& config) {
  require(!config.epsilons.empty(), "run: at least one --epsilon is required");
  for (double e : config.epsilons)
    require(e >= 0.0 && e <= 1.0, "run: every epsilon must lie in [0, 1]");

  ResultTable table;
  table.columns = {"protocol", "n1", "n2", "epsilon", "success_probability",
                   "expected_repetitions"};

  if (config.protocol == "deutsch-jozsa") {
    require(config.n1.has_value(), "run: --n1 is required for deutsch-jozsa");
    const int n1 = *config.n1;
    require(n1 >= 1 && n1 + 1 <= kMaxQubits, "run: n1 out of range for the 12-qubit budget");
    require(!config.oracle.empty(), "run: --oracle is required");
    const OracleFunction f = make_oracle(config.oracle, n1, 1);
    for (double eps : config.epsilons) {
      const DeutschJozsaResult result = run_deutsch_jozsa(n1, f, eps);
      table.add_row({std::string("deutsch-jozsa"), std::int64_t{n1}, std::int64_t{1}, eps,
                     result.success_probability,
                     expected_repetitions(result.success_probability)});
    }
    return table;
  }
  if (config.protocol == "order-finding") {
    unsigned a = 0, n = 0;
    require(std::sscanf(config.oracle.c_str(), "modexp:%u:%u", &a, &n) == 2,
            "run: order-finding needs --oracle modexp:<a>:<N>");
    for (double eps : config.epsilons) {
      const OrderFindingResult result = run_order_finding(n, a, eps, config.seed);
      table.add_row({std::string("order-finding"), std::int64_t{result.n1},
                     std::int64_t{result.n2}, eps, result.per_sample_success,
                     expected_repetitions(result.per_sample_success)});
    }
    return table;
  }
  throw ConfigError("run: unknown protocol '" + config.protocol +
                    "' (expected deutsch-jozsa or order-finding)");
}

// Empirically bisected entanglement threshold against the closed form.
inline ResultTable cmd_threshold(const ExperimentConfig& config) {
  require(config.n1.has_value() && config.n2.has_value(), "threshold: --n1 and --n2 are required");
  const int n1 = *config.n1, n2 = *config.n2;
  require(n1 >= 1 && n2 >= 1 && n1 + n2 <= kMaxQubits,
          "threshold: registers must fit the 12-qubit budget");
  require(config.tol > 0.0, "threshold: --tol must be positive");
  std::vector<std::string> specs = config.oracles;
  if (specs.empty()) specs.push_back("parity");

  std::vector<OracleFunction> oracles;
  oracles.reserve(specs.size());
  for (const std::string& spec : specs) {
    OracleFunction f = make_oracle(spec, n1, n2);
    require(!f.constant(), "threshold: oracle '" + spec + "' is constant");
    oracles.push_back(std::move(f));
  }

  const double bound = separability_bound(n2);
  std::vector<double> empirical(oracles.size());
  sweep_for(oracles.size(), [&](std::size_t i) {
    empirical[i] = empirical_threshold(oracles[i], n1, n2, config.tol);
  });

  ResultTable table;
  table.columns = {"n1", "n2", "oracle", "empirical_threshold", "closed_form_bound",
                   "abs_difference"};
  for (std::size_t i = 0; i < oracles.size(); ++i)
    table.add_row({std::int64_t{n1}, std::int64_t{n2}, specs[i], empirical[i], bound,
                   std::abs(empirical[i] - bound)});
  return table;
}

inline ResultTable cmd_werner_scan(const ExperimentConfig& config) {
  require(config.steps >= 2, "werner-scan: --steps must be >= 2");
  ResultTable table;
  table.columns = {"delta", "min_pt_eigenvalue", "entangled"};
  for (int i = 0; i < config.steps; ++i) {
    const double delta = static_cast<double>(i) / static_cast<double>(config.steps - 1);
    const EntanglementVerdict verdict = ppt_check(werner(WernerParameters{delta}));
    table.add_row({delta, verdict.min_pt_eigenvalue, verdict.entangled});
  }
  return table;
}

inline ResultTable cmd_nmr_scaling(const ExperimentConfig& config) {
  require(config.max_n >= 1 && config.max_n <= 64, "nmr-scaling: --max-n must lie in [1, 64]");
  ResultTable table;
  table.columns = {"n", "epsilon", "sample_lower_bound"};
  for (const NmrScalingRow& row : nmr_scaling_table(config.max_n))
    table.add_row({std::int64_t{row.n}, row.epsilon, row.sample_lower_bound});
  return table;
}

inline ResultTable cmd_repetitions(const ExperimentConfig& config) {
  require(!config.p_values.empty(), "repetitions: at least one --p is required");
  for (double p : config.p_values)
    require(p > 0.0 && p <= 1.0, "repetitions: every p must lie in (0, 1]");
  require(config.trials >= 1, "repetitions: --trials must be >= 1");

  const auto trials = static_cast<std::uint64_t>(config.trials);
  std::vector<RepetitionEstimate> estimates(config.p_values.size());
  sweep_for(config.p_values.size(), [&](std::size_t i) {
    estimates[i] = monte_carlo_repetitions(config.p_values[i], trials, config.seed);
  });

  ResultTable table;
  table.columns = {"p", "trials", "seed", "expected", "monte_carlo_mean", "stderr"};
  for (const RepetitionEstimate& est : estimates) {
    const double p = est.success_probability;
    const double stderr_theory = std::sqrt((1.0 - p) / (p * p * static_cast<double>(trials)));
    table.add_row({p, std::uint64_t{est.trials}, std::uint64_t{est.seed},
                   est.expected_repetitions, est.monte_carlo_mean, stderr_theory});
  }
  return table;
}

inline ResultTable run_command(const ExperimentConfig& config) {
  if (config.command == "run") return cmd_run(config);
  if (config.command == "threshold") return cmd_threshold(config);
  if (config.command == "werner-scan") return cmd_werner_scan(config);
  if (config.command == "nmr-scaling") return cmd_nmr_scaling(config);
  if (config.command == "repetitions") return cmd_repetitions(config);
  throw ConfigError("unknown command: '" + config.command + "'");
}

inline std::string render(const ResultTable& table, const ExperimentConfig& config) {
  return config.json_output ? table.json_text() : table.csv();
}

// Output is rendered fully before the file is opened, so a failing run never
// leaves a partial file behind.
inline void write_output(const std::string& text, const ExperimentConfig& config,
                         std::ostream& out) {
  if (config.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw IoError("cannot open output file: " + config.out_path);
  file << text;
  if (!file) throw IoError("failed writing output file: " + config.out_path);
}

namespace detail {

inline void merge_json_config(const std::string& path, CLI::App* sub, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

  auto flag_given = [sub](const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + name);
    return opt != nullptr && opt->count() > 0;
  };
  auto as_double_list = [](const nlohmann::json& v, const char* key) {
    std::vector<double> out;
    if (v.is_number())
      out.push_back(v.get<double>());
    else if (v.is_array())
      for (const auto& e : v) out.push_back(e.get<double>());
    else
      throw ConfigError(std::string("config key '") + key + "' must be a number or array");
    return out;
  };

  for (const auto& [key, value] : doc.items()) {
    if (flag_given(key)) continue;  // command-line flags win
    try {
      if (key == "protocol") config.protocol = value.get<std::string>();
      else if (key == "n1") config.n1 = value.get<int>();
      else if (key == "n2") config.n2 = value.get<int>();
      else if (key == "oracle") {
        if (value.is_array()) {
          config.oracles.clear();
          for (const auto& e : value) config.oracles.push_back(e.get<std::string>());
          if (!config.oracles.empty()) config.oracle = config.oracles.front();
        } else {
          config.oracle = value.get<std::string>();
          config.oracles = {config.oracle};
        }
      } else if (key == "epsilon") config.epsilons = as_double_list(value, "epsilon");
      else if (key == "p") config.p_values = as_double_list(value, "p");
      else if (key == "steps") config.steps = value.get<int>();
      else if (key == "max-n") config.max_n = value.get<int>();
      else if (key == "trials") config.trials = value.get<std::int64_t>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "tol") config.tol = value.get<double>();
      else if (key == "json") config.json_output = value.get<bool>();
      else if (key == "out") config.out_path = value.get<std::string>();
      else throw ConfigError("config file has unknown key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"pseudo-pure-state quantum computation toolkit"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_path, "output file (default: stdout)");
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_flag("--json", config.json_output, "emit a JSON array instead of CSV");
    sub->add_option("--seed", config.seed, "64-bit seed for sampling commands");
    sub->add_option("--tol", config.tol, "numeric tolerance where applicable");
  };

  CLI::App* run = app.add_subcommand("run", "run a protocol over a list of noise weights");
  run->add_option("--protocol", config.protocol, "deutsch-jozsa or order-finding");
  run->add_option("--n1", config.n1, "input register size");
  run->add_option("--oracle", config.oracle,
                  "parity | identity | constant:<v> | modexp:<a>:<N> | truth-table file");
  run->add_option("--epsilon", config.epsilons, "noise weights, one row each");
  add_common(run);

  CLI::App* threshold =
      app.add_subcommand("threshold", "bisect the entanglement threshold of the projected state");
  threshold->add_option("--n1", config.n1, "input register size");
  threshold->add_option("--n2", config.n2, "output register size");
  threshold->add_option("--oracle", config.oracles, "oracle specs, one row each (default parity)");
  add_common(threshold);

  CLI::App* werner = app.add_subcommand("werner-scan", "PPT verdict across the Werner family");
  werner->add_option("--steps", config.steps, "grid points on [0, 1] (default 101)");
  add_common(werner);

  CLI::App* nmr = app.add_subcommand("nmr-scaling", "polarization and sample-size scaling table");
  nmr->add_option("--max-n", config.max_n, "largest qubit count (default 16)");
  add_common(nmr);

  CLI::App* reps = app.add_subcommand("repetitions", "Monte Carlo check of the 1/p law");
  reps->add_option("--p", config.p_values, "per-run success probabilities, one row each");
  reps->add_option("--trials", config.trials, "geometric trials per p (default 100000)");
  add_common(reps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    err << "error: ConfigError: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    config.command = active->get_name();
    if (!config_path.empty()) detail::merge_json_config(config_path, active, config);
    const ResultTable table = run_command(config);
    write_output(render(table, config), config, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ppqc::cli
