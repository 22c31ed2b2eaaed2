#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccr/llm.hpp"
#include "ccr/populations.hpp"
#include "ccr/rules.hpp"
#include "ccr/welfare.hpp"

namespace ccr {

struct SimConfig {
  std::size_t n_events = 300;
  std::uint32_t repetitions = 5;
  std::uint64_t seed = 0;
  /// Convergence rule: stop once this many consecutive events leave the
  /// document unchanged.  0 disables it.
  std::size_t quiet_events = 0;
  /// Abort a run after this many consecutive skipped iterations.
  std::size_t max_skips = 100;
  /// Worker threads for sweeps; runs themselves are sequential.
  std::size_t jobs = 1;
};

struct RunResult {
  std::string rule;
  std::uint32_t repetition = 0;
  std::uint64_t seed = 0;  // the derived per-run seed
  Instance instance;
  Trajectory trajectory;
  /// One point per applied event: satisfaction, stability, and document
  /// size of the prefix ending at that event.
  std::vector<MetricPoint> series;
  MetricPoint final_point;
  std::map<ParagraphId, double> positions;   // positional populations
  std::map<ParagraphId, std::string> texts;  // textual populations
  std::vector<AuditRecord> audit;            // chat-backed populations
  std::size_t skipped = 0;
  bool converged = false;
};

/// The agent's decision-time snapshot at the current prefix.
AgentView make_agent_view(AgentId agent, const EventLog& log, const IncrementalTally& inc,
                          const TrajectoryBuilder& builder,
                          const std::map<ParagraphId, double>& positions,
                          const std::map<ParagraphId, std::string>& texts);

/// One run: repeatedly pick an agent uniformly at random (or follow the
/// explicit schedule), hand it the current view, apply its action, and
/// update trajectory and metrics incrementally until n_events events are
/// applied or the convergence rule fires.  Skipped iterations consume no
/// event index.  Deterministic given the run seed for any non-networked
/// population.
RunResult run_simulation(const SimConfig& config, Population& population, const RuleSpec& rule,
                         std::uint64_t run_seed, std::uint32_t repetition = 0,
                         const std::vector<AgentId>* agent_schedule = nullptr);

/// seed x rule x repetition -> independent per-run stream.
std::uint64_t derive_run_seed(std::uint64_t seed, const std::string& rule_id,
                              std::uint32_t repetition);

struct SweepOutcome {
  std::vector<MetricPoint> run_points;  // final point of every completed run
  std::vector<MetricPoint> aggregated;  // per rule: means over completed runs,
                                        // repetition = number of completed runs
  std::vector<MetricPoint> front;       // Pareto front of the aggregated points
  std::vector<std::string> failures;    // "rule ... repetition k: reason"
};

/// Builds a fresh population for one run from its derived seed.
using PopulationFactory = std::function<std::unique_ptr<Population>(std::uint64_t run_seed)>;

/// rules x repetitions independent runs with derived seeds, optionally on
/// config.jobs threads.  Failed runs are recorded and the per-rule means are
/// taken over the completed ones.
SweepOutcome sweep(const SimConfig& config, const PopulationFactory& make_population,
                   const std::vector<RuleSpec>& rules);

}  // namespace ccr
