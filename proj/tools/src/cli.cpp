#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rowlearn/adapter.hpp"
#include "rowlearn/errors.hpp"
#include "rowlearn/inference.hpp"
#include "rowlearn/machine.hpp"
#include "rowlearn/run_config.hpp"
#include "rowlearn/session.hpp"

namespace rowlearn::cli {

namespace {

/// Adds --config plus one option per RunConfig key to a subcommand.
class ConfigOptions {
 public:
  void attach(CLI::App& app) {
    app.add_option("--config", config_file_, "Configuration file (flat key = value)")->check(CLI::ExistingFile);
    for (const auto& key : RunConfig::keys()) {
      auto& slot = values_[key];
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      app.add_option("--" + key + ",--" + dashed, slot, "default: " + RunConfig{}.get(key));
    }
    app_ = &app;
  }

  RunConfig build() const {
    RunConfig config;
    if (!config_file_.empty()) {
      std::ifstream in(config_file_);
      for (const auto& item : CLI::ConfigTOML().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty()) throw ConfigError("sections are not supported: " + item.fullname());
        config.set(item.name, CLI::detail::join(item.inputs, ","));
      }
    }
    for (const auto& [key, value] : values_)
      if (app_->count("--" + key) > 0) config.set(key, value);
    config.validate();
    return config;
  }

 private:
  std::string config_file_;
  std::map<std::string, std::string> values_;
  CLI::App* app_ = nullptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

RowhammerMachine load_machine(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text.compare(first, 7, "digraph") == 0) return import_dot(text);
  return parse_machine(text);
}

std::vector<AccessSymbol> parse_word(const std::string& text) {
  std::vector<AccessSymbol> word;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    while (!token.empty() && (token.back() == ',' || token.back() == ']')) token.pop_back();
    while (!token.empty() && token.front() == '[') token.erase(0, 1);
    if (!token.empty()) word.push_back(parse_symbol(token));
  }
  return word;
}

struct LearnArgs {
  std::string output = "rowhammer.machine";
  std::string dot;
  std::string stats;
  bool report = false;
};

int cmd_learn(const RunConfig& config, const LearnArgs& args, std::ostream& out, std::ostream& err) {
  const auto result = run_session(config);
  if (result.machine) {
    std::string text = serialize(*result.machine);
    if (result.budget_exhausted) text = "# partial: query budget exhausted\n" + text;
    write_file(args.output, text);
    if (!args.dot.empty()) write_file(args.dot, export_dot(*result.machine));
  }
  if (!args.stats.empty()) write_file(args.stats, result.stats.to_json() + "\n");
  out << "states " << result.stats.hypothesis_states << ", membership queries " << result.stats.membership_queries
      << ", system queries " << result.stats.sul_queries << ", " << result.stats.wall_time_ms << " ms\n";
  if (args.report && result.machine) out << infer_all(*result.machine).summary(*result.machine);
  if (result.budget_exhausted) {
    err << "query budget exhausted"
        << (result.machine ? "; partial machine written to " + args.output : "; no hypothesis to save") << '\n';
    return kBudget;
  }
  return kOk;
}

int cmd_infer(const std::string& path, const std::string& json_path, bool json_only, std::ostream& out) {
  const auto machine = load_machine(path);
  const auto report = infer_all(machine);
  const std::string json = report.to_json(machine);
  if (!json_path.empty()) write_file(json_path, json + "\n");
  if (json_only)
    out << json << '\n';
  else
    out << report.summary(machine);
  return kOk;
}

struct ExperimentArgs {
  std::string parameter;
  std::string values;
  std::size_t repetitions = 3;
  std::size_t jobs = 1;
  std::string output;
  std::string median;
};

int cmd_experiment(const RunConfig& base, const ExperimentArgs& args, std::ostream& out, std::ostream& err) {
  const SweepSpec spec{args.parameter, parse_value_list(args.values), args.repetitions};
  const auto runs = run_sweep(base, spec, args.jobs, [&](const SweepRun& r) {
    err << spec.parameter << "=" << r.value << " #" << r.repetition << ": " << r.status;
    if (r.report) err << ", " << r.report->states << " states";
    if (!r.error.empty()) err << " (" << r.error << ")";
    err << '\n';
  });
  const std::string csv = sweep_csv(runs);
  if (args.output.empty())
    out << csv;
  else
    write_file(args.output, csv);
  if (!args.median.empty()) write_file(args.median, sweep_median_csv(runs));
  return kOk;
}

int cmd_simulate(const RunConfig& config, const std::string& word_text, const std::string& trace_path,
                 std::ostream& out) {
  AdapterSession session(config.adapter_config());
  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw Error("cannot write " + trace_path);
    session.set_trace(&trace_file);
  } else {
    session.set_trace(&out);
  }
  std::string observations;
  for (const auto& sym : parse_word(word_text)) {
    const auto obs = session.step(sym);
    observations += (observations.empty() ? "" : " ") + std::string(to_string(obs));
  }
  out << observations << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn Rowhammer machines of a synthetic DRAM and infer its mitigations", "rowlearn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rowlearn 0.1.0");

  ConfigOptions learn_config, experiment_config, simulate_config;

  LearnArgs learn_args;
  auto* learn = app.add_subcommand("learn", "Learn a machine from the configured DRAM");
  learn_config.attach(*learn);
  learn->add_option("-o,--output", learn_args.output, "Machine file to write");
  learn->add_option("--dot", learn_args.dot, "Also write a Graphviz graph");
  learn->add_option("--stats", learn_args.stats, "Write learning statistics as JSON");
  learn->add_flag("--report", learn_args.report, "Print the inference summary");

  std::string machine_path, json_path;
  bool json_only = false;
  auto* infer = app.add_subcommand("infer", "Infer mitigation parameters from a machine file");
  infer->add_option("machine", machine_path, "Machine file (native format or DOT)")->required()->check(CLI::ExistingFile);
  infer->add_option("--json", json_path, "Write the report as JSON");
  infer->add_flag("--json-stdout", json_only, "Print JSON instead of the summary");

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Sweep one parameter and tabulate results");
  experiment_config.attach(*experiment);
  experiment->add_option("--sweep", exp_args.parameter, "Configuration key to vary")->required();
  experiment->add_option("--values", exp_args.values, "Values: 1,2,3 or 1..6 or 500..5000:500")->required();
  experiment->add_option("--repetitions", exp_args.repetitions, "Runs per value (seed + i)")->check(CLI::PositiveNumber);
  experiment->add_option("--jobs", exp_args.jobs, "Parallel sessions")->check(CLI::PositiveNumber);
  experiment->add_option("-o,--output", exp_args.output, "CSV file (default stdout)");
  experiment->add_option("--median", exp_args.median, "Also write per-value medians as CSV");

  std::string word_text, trace_path;
  auto* simulate = app.add_subcommand("simulate", "Replay one word and log every step");
  simulate_config.attach(*simulate);
  simulate->add_option("--word", word_text, "Symbols such as \"1300x0=>1 1300x2=>1\"")->required();
  simulate->add_option("--trace", trace_path, "Trace file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*learn) return cmd_learn(learn_config.build(), learn_args, out, err);
    if (*infer) return cmd_infer(machine_path, json_path, json_only, out);
    if (*experiment) return cmd_experiment(experiment_config.build(), exp_args, out, err);
    if (*simulate) return cmd_simulate(simulate_config.build(), word_text, trace_path, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace rowlearn::cli
