#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccr/rules.hpp"

namespace ccr {

/// Per-agent and community satisfaction with a proposed document.
/// An agent is satisfied on p when its stance matches the document's side
/// (+1 for included, -1 for excluded); each match is worth 1/N_a.
struct SatisfactionReport {
  std::map<AgentId, double> per_agent;  // one entry per community agent
  double community = 0.0;               // sum over agents
  double normalized = 0.0;              // community / #active agents, 0 if none
};

SatisfactionReport satisfaction(const Instance& instance, const Solution& solution,
                                WeightMode mode);

/// All solutions attaining the maximum community satisfaction, by exhaustive
/// search over the 2^|P(E)| candidate documents.
/// Throws TooManyParagraphs beyond `max_paragraphs` (default 20).
std::vector<Solution> swm_oracle(const Instance& instance, WeightMode mode,
                                 std::size_t max_paragraphs = 20);

inline std::size_t count_updates(const Trajectory& trajectory) {
  return trajectory.update_count();
}

/// (|E| - U) / |E|.  Throws EmptyLog for an empty trajectory.
double stability_metric(const Trajectory& trajectory);

/// Which way a destabilizing extension should push a paragraph.
enum class FlipDirection {
  Auto,          // against its current relative-majority membership
  ForceExclude,  // p+ + 1 fresh downvotes
  ForceInclude,  // p- + 1 fresh upvotes
};

/// The relative-majority flip construction: enough fresh-agent votes to
/// reverse the paragraph's membership no matter how the existing weights
/// fall (each fresh agent votes once, so its weight is a full 1).
/// Throws UnknownParagraph when the paragraph is not in the log.
EventLog destabilizing_extension(const Instance& instance, ParagraphId paragraph,
                                 WeightMode mode = WeightMode::EverVoted,
                                 FlipDirection direction = FlipDirection::Auto);

/// One aggregated or per-run measurement of a rule.
struct MetricPoint {
  std::string rule;
  std::uint32_t repetition = 0;
  double events = 0.0;
  double satisfaction = 0.0;
  double stability = 0.0;
  double solution_size = 0.0;

  friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

/// Maximal points under componentwise (satisfaction, stability) dominance,
/// ordered by descending satisfaction, then descending stability, then rule.
std::vector<MetricPoint> pareto_front(const std::vector<MetricPoint>& points);

}  // namespace ccr
