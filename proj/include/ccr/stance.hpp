#pragma once

#include <map>
#include <set>

#include "ccr/events.hpp"

namespace ccr {

/// Sparse agent x paragraph matrix of current stances.  Only nonzero entries
/// are stored, so two logs that touch different paragraphs but end with the
/// same nonzero cells compare equal (an abstention erases the cell).
class StanceMatrix {
 public:
  Vote at(AgentId agent, ParagraphId paragraph) const;
  void set(AgentId agent, ParagraphId paragraph, Vote value);

  /// Nonzero rows, keyed by agent then paragraph.
  const std::map<AgentId, std::map<ParagraphId, Vote>>& rows() const { return rows_; }

  std::size_t nonzero_count() const;
  /// Agents with at least one nonzero stance.
  std::set<AgentId> active_agents() const;

  friend bool operator==(const StanceMatrix&, const StanceMatrix&) = default;

 private:
  std::map<AgentId, std::map<ParagraphId, Vote>> rows_;
};

/// How an agent's vote weight denominator N_a is counted.
enum class WeightMode {
  /// N_a = number of paragraphs the agent currently holds a nonzero stance on.
  CurrentStance,
  /// N_a = number of distinct paragraphs the agent ever cast a +1/-1 on,
  /// regardless of later abstentions.
  EverVoted,
};

/// Per-paragraph approval counts.  plus/minus count agents whose final stance
/// is +1/-1; plus_rel/minus_rel weight each such agent by 1/N_a.
struct ParagraphTally {
  int plus = 0;
  int minus = 0;
  double plus_rel = 0.0;
  double minus_rel = 0.0;

  friend bool operator==(const ParagraphTally&, const ParagraphTally&) = default;
};

struct Tally {
  /// One entry for every paragraph in P(E), zeros included.
  std::map<ParagraphId, ParagraphTally> paragraphs;
  /// N_a per agent under the chosen mode; agents with N_a = 0 are omitted.
  std::map<AgentId, int> denominators;

  const ParagraphTally& at(ParagraphId p) const;

  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Final stance per (agent, paragraph): the value of the agent's last event
/// on that paragraph.
StanceMatrix stance_of(const EventLog& log);
inline StanceMatrix stance_of(const Instance& instance) { return stance_of(instance.log()); }

/// N_a per agent for the given mode.  Agents whose count is zero are omitted.
std::map<AgentId, int> denominators_of(const EventLog& log, WeightMode mode);

/// Assembles a Tally from a stance matrix and precomputed denominators.
/// Summation visits agents in ascending id order; the incremental scheduler
/// rebuilds tallies through this same function, which is what makes one-step
/// updates bit-identical to a from-scratch recomputation.
Tally build_tally(const StanceMatrix& stance,
                  const std::map<AgentId, int>& denominators,
                  const std::set<ParagraphId>& universe);

Tally tally_of(const Instance& instance, WeightMode mode);
inline Tally tally_of(const EventLog& log, WeightMode mode) {
  return tally_of(Instance::from_log(log), mode);
}

/// E|p: the subsequence of events touching paragraph p, original seqs kept.
EventLog restrict(const EventLog& log, ParagraphId paragraph);
/// E|p,a: additionally filtered to a single agent.
EventLog restrict(const EventLog& log, ParagraphId paragraph, AgentId agent);

/// One abstention per (agent, paragraph) pair with a nonzero final stance,
/// ordered by agent then paragraph.  Appending it to the log zeroes every
/// stance.  Returned as a standalone list numbered from 1.
EventLog undo_list(const EventLog& log);

/// Agents with at least one nonzero stance in the instance's log.
std::size_t active_agent_count(const Instance& instance);

/// Stance matrix and weight denominators maintained one event at a time.
/// tally() routes through build_tally(), so a state reached incrementally
/// yields bit-identical tallies to a batch recomputation over the same log.
class IncrementalTally {
 public:
  explicit IncrementalTally(WeightMode mode) : mode_(mode) {}

  void apply(const Event& event);

  const StanceMatrix& stance() const { return stance_; }
  const std::set<ParagraphId>& paragraphs() const { return paragraphs_; }
  const std::set<AgentId>& agents() const { return agents_; }
  std::size_t events_seen() const { return events_seen_; }

  std::map<AgentId, int> denominators() const;
  Tally tally() const;

 private:
  WeightMode mode_;
  StanceMatrix stance_;
  std::map<AgentId, std::set<ParagraphId>> ever_voted_;
  std::set<ParagraphId> paragraphs_;
  std::set<AgentId> agents_;
  std::size_t events_seen_ = 0;
};

}  // namespace ccr
