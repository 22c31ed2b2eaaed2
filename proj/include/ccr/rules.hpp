#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccr/stance.hpp"

namespace ccr {

// ---------------------------------------------------------------------------
// Static consensus scoring
// ---------------------------------------------------------------------------

enum class KernelKind { Aps, Raps, Rams };

/// Whose headcount the RAMS participation gate compares against.
enum class RamsGate { TotalAgents, ActiveAgents };

/// A static scoring function evaluated on a tally:
///   APS            p+ / (p+ + p-)
///   RAPS           p+rel / (p+rel + p-rel)
///   beta-RAMS      RAPS, but 0 unless p+ >= beta * |A|
/// All three return 0 for a paragraph whose stances were all withdrawn.
struct StaticKernel {
  KernelKind kind = KernelKind::Aps;
  double beta = 0.0;  // meaningful for Rams only
  RamsGate gate = RamsGate::TotalAgents;

  static StaticKernel aps() { return {KernelKind::Aps, 0.0, RamsGate::TotalAgents}; }
  static StaticKernel raps() { return {KernelKind::Raps, 0.0, RamsGate::TotalAgents}; }
  static StaticKernel rams(double beta, RamsGate gate = RamsGate::TotalAgents);

  std::string to_string() const;  // "APS", "RAPS", "RAMS:0.25"

  friend bool operator==(const StaticKernel&, const StaticKernel&) = default;
};

// ---------------------------------------------------------------------------
// Dynamizers
// ---------------------------------------------------------------------------

/// Observable or rule-relative quantities a dynamizer can key on.
enum class DynamicParam {
  NumEvents,
  NumAgents,
  NumParagraphs,
  SolutionSize,  // rule-relative
  NumUpdates,    // rule-relative
};

/// SolutionSize and NumUpdates depend on the rule's own trajectory; when one
/// of these drives a dynamizer, the value at event i is taken from the
/// trajectory over events 1..i-1 (0 at the first event), which breaks the
/// otherwise circular definition.
bool is_rule_relative(DynamicParam param);

std::string param_name(DynamicParam param);
DynamicParam param_from_name(const std::string& name);  // ConfigError

struct Dynamizer {
  enum class Kind { None, Harsh, Smooth };

  Kind kind = Kind::None;
  DynamicParam param = DynamicParam::NumEvents;
  std::uint32_t cutoff = 0;  // harsh t
  double alpha = 0.0;        // smooth, in [0,1]

  static Dynamizer none() { return {}; }
  static Dynamizer harsh(DynamicParam param, std::uint32_t t);
  static Dynamizer smooth(DynamicParam param, double alpha);

  friend bool operator==(const Dynamizer&, const Dynamizer&) = default;
};

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

enum class TieBreak { ExcludeOnTie, IncludeOnTie };

/// A fully configured consensus rule: kernel, optional dynamizer, inclusion
/// threshold and the vote-weight mode.  tie_break only affects rm_solution.
///
/// Textual form (used in CLI flags and results files):
///   kernel[:beta] | dynamizer[:param:t-or-alpha] | threshold | mode
/// e.g. "RAMS:0.25|SMOOTH:NUM_EVENTS:0.1|0.5|EVER_VOTED",
///      "RAPS||0.5|EVER_VOTED" (empty middle field = no dynamizer).
struct RuleSpec {
  StaticKernel kernel;
  Dynamizer dynamizer;
  double threshold = 0.5;
  WeightMode weight_mode = WeightMode::EverVoted;
  TieBreak tie_break = TieBreak::ExcludeOnTie;

  std::string to_string() const;
  static RuleSpec parse(const std::string& text);  // ConfigError on bad input

  friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

using Solution = std::set<ParagraphId>;

/// Solutions over every prefix of a log, plus the indices where consecutive
/// prefix solutions differ (an "update" at i means R*(i+1) != R*(i)).
struct Trajectory {
  std::vector<Solution> prefix_solutions;   // R*(1..|E|)
  std::vector<std::size_t> update_indices;  // 1-based, subset of [|E|-1]

  std::size_t events() const { return prefix_solutions.size(); }
  std::size_t update_count() const { return update_indices.size(); }
  const Solution& last() const;  // EmptyLog on empty trajectory
};

// ---------------------------------------------------------------------------
// Scoring operations
// ---------------------------------------------------------------------------

/// Kernel score of one paragraph over a whole instance.
/// Throws UnknownParagraph if the paragraph never appears in the log.
double static_score(const StaticKernel& kernel, ParagraphId paragraph,
                    const Instance& instance, WeightMode mode);

/// x * exp(-t * alpha * (1 - x)); requires x, alpha in [0,1] and t >= 0.
double f_exp(double x, double t, double alpha);

/// Value of a dynamic parameter over a log.  For SolutionSize/NumUpdates the
/// rule must be supplied (MissingRule otherwise): SolutionSize is the size of
/// the rule's solution on the log, NumUpdates the update count of its
/// trajectory.  The one-event lookback used inside dynamizers is applied by
/// the callers, not here.
std::uint64_t param_value(DynamicParam param, const EventLog& log,
                          const std::optional<RuleSpec>& rule = std::nullopt);

/// Shortest prefix whose param value reaches t (first length m, starting at
/// m = 0, with value >= t).  Returns the full log when the value never gets
/// there.  Rule-relative params follow the trajectory lookback convention.
EventLog harsh_prefix(const EventLog& log, DynamicParam param, std::uint32_t t,
                      const std::optional<RuleSpec>& rule = std::nullopt);

/// Dynamized score of one paragraph on the full log:
///   no dynamizer  static score on the log
///   harsh         static score on harsh_prefix (0 for paragraphs outside it)
///   smooth        f_exp(static score, param value, alpha)
double dynamic_score(const RuleSpec& rule, ParagraphId paragraph, const EventLog& log);
double dynamic_score(const RuleSpec& rule, ParagraphId paragraph, const Instance& instance);

/// { p in P(E) : dynamic_score >= threshold }.
Solution ccr_solution(const RuleSpec& rule, const Instance& instance);
inline Solution ccr_solution(const RuleSpec& rule, const EventLog& log) {
  return ccr_solution(rule, Instance::from_log(log));
}

/// Streaming trajectory evaluation: push events one at a time and read the
/// current solution.  `community` is the fixed agent headcount used by the
/// RAMS gate (a deliberation's community does not grow as a log is replayed).
class TrajectoryBuilder {
 public:
  TrajectoryBuilder(RuleSpec rule, std::size_t community);

  void push(const Event& event);
  const Solution& current() const;  // EmptyLog before the first push
  std::size_t events_seen() const { return result_.events(); }
  std::size_t update_count() const { return result_.update_count(); }
  const Trajectory& trajectory() const { return result_; }
  Trajectory take() { return std::move(result_); }

  /// Index m at which a harsh dynamizer froze, if it has.
  std::optional<std::size_t> frozen_at() const { return frozen_at_; }

 private:
  Solution evaluate_prefix();

  RuleSpec rule_;
  std::size_t community_;
  IncrementalTally inc_;
  Trajectory result_;
  bool frozen_ = false;
  Solution frozen_solution_;
  std::optional<std::size_t> frozen_at_;
};

/// Trajectory over all prefixes of `log`.  The RAMS community defaults to the
/// full log's agent set and stays fixed across prefixes; pass `community`
/// when the deliberating population is larger than the set of agents that
/// happened to act.
Trajectory ccr_trajectory(const RuleSpec& rule, const EventLog& log,
                          std::optional<std::size_t> community = std::nullopt);

/// Include p iff p+rel > p-rel; exact ties go per tie_break.
Solution rm_solution(const Instance& instance, WeightMode mode,
                     TieBreak tie_break = TieBreak::ExcludeOnTie);

/// Cuts the log strictly before the first abstention on `sentinel_paragraph`
/// (whole log if none) and returns every paragraph appearing in that prefix.
Solution sentinel_rule(const Instance& instance, ParagraphId sentinel_paragraph);

// ---------------------------------------------------------------------------
// Rule grids
// ---------------------------------------------------------------------------

/// Cartesian grid of rule configurations.  The default field values give the
/// 54-rule benchmark grid via paper_grid(); build_rule_grid() filters by the
/// include_* toggles.
struct RuleGridSpec {
  std::vector<StaticKernel> kernels;
  bool include_static = true;
  bool include_harsh = true;
  bool include_smooth = true;
  std::vector<DynamicParam> params = {DynamicParam::NumEvents};
  std::vector<std::uint32_t> harsh_cutoffs = {0, 50, 100, 150};
  std::vector<double> smooth_alphas = {0.1, 0.3, 0.5, 1.0};
  double threshold = 0.5;
  WeightMode weight_mode = WeightMode::EverVoted;
};

/// 6 kernels (APS, RAPS, beta-RAMS for beta in {.05,.1,.3,.5}) x
/// (static + 4 harsh cutoffs + 4 smooth alphas over NumEvents) = 54 rules.
RuleGridSpec paper_grid();

/// The same 6 kernels, dynamizers disabled.
RuleGridSpec static_grid();

/// Expands a grid spec; ConfigError when it describes no rules.
std::vector<RuleSpec> build_rule_grid(const RuleGridSpec& grid);

std::string weight_mode_name(WeightMode mode);
WeightMode weight_mode_from_name(const std::string& name);  // ConfigError

}  // namespace ccr
