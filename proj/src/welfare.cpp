#include "ccr/welfare.hpp"

#include <algorithm>
#include <string>

namespace ccr {

SatisfactionReport satisfaction(const Instance& instance, const Solution& solution,
                                WeightMode mode) {
  const EventLog& log = instance.log();
  const StanceMatrix stance = stance_of(log);
  const std::map<AgentId, int> denominators = denominators_of(log, mode);

  SatisfactionReport report;
  for (AgentId a : instance.agents()) report.per_agent[a] = 0.0;

  for (const auto& [agent, row] : stance.rows()) {
    const auto denom_it = denominators.find(agent);
    if (denom_it == denominators.end() || denom_it->second <= 0) continue;
    int matches = 0;
    for (const auto& [paragraph, value] : row) {
      const Vote side = solution.count(paragraph) ? Vote::Up : Vote::Down;
      if (value == side) ++matches;
    }
    report.per_agent[agent] = static_cast<double>(matches) / denom_it->second;
  }

  for (const auto& [agent, sat] : report.per_agent) report.community += sat;
  const std::size_t active = stance.active_agents().size();
  report.normalized = active == 0 ? 0.0 : report.community / static_cast<double>(active);
  return report;
}

std::vector<Solution> swm_oracle(const Instance& instance, WeightMode mode,
                                 std::size_t max_paragraphs) {
  const std::vector<ParagraphId> paragraphs(instance.log().paragraphs().begin(),
                                            instance.log().paragraphs().end());
  if (paragraphs.size() > max_paragraphs) {
    throw TooManyParagraphs("oracle limited to " + std::to_string(max_paragraphs) +
                            " paragraphs, got " + std::to_string(paragraphs.size()));
  }

  const std::uint64_t limit = std::uint64_t{1} << paragraphs.size();
  auto candidate_for = [&](std::uint64_t mask) {
    Solution candidate;
    for (std::size_t bit = 0; bit < paragraphs.size(); ++bit) {
      if (mask & (std::uint64_t{1} << bit)) candidate.insert(paragraphs[bit]);
    }
    return candidate;
  };

  double best_value = -1.0;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    best_value = std::max(
        best_value, satisfaction(instance, candidate_for(mask), mode).community);
  }
  // collect within a hair of the max so float noise cannot split exact ties
  std::vector<Solution> best;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    Solution candidate = candidate_for(mask);
    if (satisfaction(instance, candidate, mode).community >= best_value - 1e-9) {
      best.push_back(std::move(candidate));
    }
  }
  return best;
}

double stability_metric(const Trajectory& trajectory) {
  const std::size_t n = trajectory.events();
  if (n == 0) throw EmptyLog("stability of an empty trajectory is undefined");
  return static_cast<double>(n - trajectory.update_count()) / static_cast<double>(n);
}

EventLog destabilizing_extension(const Instance& instance, ParagraphId paragraph,
                                 WeightMode mode, FlipDirection direction) {
  const Tally tally = tally_of(instance, mode);
  const auto it = tally.paragraphs.find(paragraph);
  if (it == tally.paragraphs.end()) {
    throw UnknownParagraph("paragraph " + std::to_string(paragraph) + " is not in the log");
  }
  const ParagraphTally& t = it->second;

  if (direction == FlipDirection::Auto) {
    direction = t.plus_rel > t.minus_rel ? FlipDirection::ForceExclude
                                         : FlipDirection::ForceInclude;
  }
  // A fresh agent's single vote carries weight 1, while the opposing side's
  // relative weight is at most its headcount; headcount+1 fresh votes always
  // overturn the comparison.
  const int votes = (direction == FlipDirection::ForceExclude ? t.plus : t.minus) + 1;
  const Vote value = direction == FlipDirection::ForceExclude ? Vote::Down : Vote::Up;

  AgentId next_agent = instance.agents().empty() ? 1 : *instance.agents().rbegin() + 1;
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(votes));
  for (int i = 0; i < votes; ++i) {
    events.push_back(Event{static_cast<std::uint32_t>(i + 1), next_agent++, paragraph, value});
  }
  return EventLog(std::move(events));
}

std::vector<MetricPoint> pareto_front(const std::vector<MetricPoint>& points) {
  std::vector<MetricPoint> front;
  for (const MetricPoint& candidate : points) {
    bool dominated = false;
    for (const MetricPoint& other : points) {
      if (other.satisfaction >= candidate.satisfaction &&
          other.stability >= candidate.stability &&
          (other.satisfaction > candidate.satisfaction ||
           other.stability > candidate.stability)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(candidate);
  }
  std::sort(front.begin(), front.end(), [](const MetricPoint& a, const MetricPoint& b) {
    if (a.satisfaction != b.satisfaction) return a.satisfaction > b.satisfaction;
    if (a.stability != b.stability) return a.stability > b.stability;
    return a.rule < b.rule;
  });
  return front;
}

}  // namespace ccr
