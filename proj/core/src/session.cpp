#include "rowlearn/session.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "rowlearn/adapter.hpp"

namespace rowlearn {

std::unique_ptr<EquivalenceOracle> make_equivalence_oracle(const RunConfig& config) {
  auto chain = std::make_unique<ChainOracle>();
  if (config.equivalence != EquivalenceStrategy::WpMethod)
    chain->add(std::make_unique<RandomWalkOracle>(config.rw_max_steps, config.rw_walks, config.seed));
  if (config.equivalence != EquivalenceStrategy::RandomWalk)
    chain->add(std::make_unique<WpMethodOracle>(config.wp_depth));
  return chain;
}

SessionResult run_session(const RunConfig& config) {
  config.validate();
  AdapterSession adapter(config.adapter_config());
  AdapterOracle oracle(adapter);
  auto eq = make_equivalence_oracle(config);
  SessionResult result;
  try {
    auto learned = learn(oracle, *eq, LearnOptions{config.query_budget});
    result.machine = RowhammerMachine::from_mealy(adapter.alphabet(), learned.hypothesis);
    result.stats = learned.stats;
  } catch (const BudgetExceeded& e) {
    result.budget_exhausted = true;
    result.stats = e.stats();
    if (e.partial()) result.machine = RowhammerMachine::from_mealy(adapter.alphabet(), *e.partial());
  }
  if (result.machine) result.stats.hypothesis_states = result.machine->num_states();
  return result;
}

namespace {

SweepRun execute(const RunConfig& base, const SweepSpec& spec, std::size_t value_index, std::size_t rep) {
  SweepRun run;
  run.parameter = spec.parameter;
  run.value = spec.values[value_index];
  run.repetition = rep;
  try {
    RunConfig config = base;
    config.set(spec.parameter, run.value);
    config.seed = base.seed + rep;
    run.seed = config.seed;
    auto result = run_session(config);
    run.stats = result.stats;
    run.status = result.budget_exhausted ? "budget" : "ok";
    if (result.machine) run.report = infer_all(*result.machine);
  } catch (const std::exception& e) {
    run.status = "error";
    run.error = e.what();
  }
  return run;
}

}  // namespace

std::vector<SweepRun> run_sweep(const RunConfig& base, const SweepSpec& spec, std::size_t jobs,
                                const std::function<void(const SweepRun&)>& progress) {
  spec.validate();
  const std::size_t total = spec.values.size() * spec.repetitions;
  std::vector<SweepRun> runs(total);
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      runs[i] = execute(base, spec, i / spec.repetitions, i % spec.repetitions);
      if (progress) {
        std::lock_guard lock(report_mutex);
        progress(runs[i]);
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, total);
  std::vector<std::thread> threads;
  for (std::size_t j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return runs;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void interval_cells(std::ostream& out, const std::optional<ThresholdInterval>& i) {
  if (i)
    out << i->lower << ',' << i->upper;
  else
    out << ',';
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRun>& runs) {
  std::ostringstream out;
  out << "parameter,value,repetition,seed,status,wall_time_ms,membership_queries,sul_queries,sul_symbols,"
         "equivalence_rounds,states,rowhammer_lower,rowhammer_upper,trr_lower,trr_upper,trr_size,ecc_threshold,error\n";
  for (const auto& r : runs) {
    out << r.parameter << ',' << r.value << ',' << r.repetition << ',' << r.seed << ',' << r.status << ',';
    out << r.stats.wall_time_ms << ',' << r.stats.membership_queries << ',' << r.stats.sul_queries << ','
        << r.stats.sul_symbols << ',' << r.stats.equivalence_rounds << ',';
    if (r.report) {
      out << r.report->states << ',';
      interval_cells(out, r.report->rowhammer.interval);
      out << ',';
      interval_cells(out, r.report->trr.interval);
      out << ',';
      if (r.report->trr_size.rows) out << *r.report->trr_size.rows;
      out << ',' << r.report->ecc.max_corrected_flips;
    } else {
      out << ",,,,,,";
    }
    out << ',' << csv_escape(r.error) << '\n';
  }
  return out.str();
}

std::string sweep_median_csv(const std::vector<SweepRun>& runs) {
  std::ostringstream out;
  out << "parameter,value,runs,wall_time_ms,membership_queries,sul_queries,states\n";
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    std::vector<double> time, mq, sul, states;
    for (; j < runs.size() && runs[j].value == runs[i].value && runs[j].parameter == runs[i].parameter; ++j) {
      if (runs[j].status != "ok" || !runs[j].report) continue;
      time.push_back(runs[j].stats.wall_time_ms);
      mq.push_back(static_cast<double>(runs[j].stats.membership_queries));
      sul.push_back(static_cast<double>(runs[j].stats.sul_queries));
      states.push_back(static_cast<double>(runs[j].report->states));
    }
    out << runs[i].parameter << ',' << runs[i].value << ',' << time.size();
    if (time.empty())
      out << ",,,,\n";
    else
      out << ',' << median(time) << ',' << median(mq) << ',' << median(sul) << ',' << median(states) << '\n';
    i = j;
  }
  return out.str();
}

}  // namespace rowlearn
