#include "ccr/stance.hpp"

#include <string>

namespace ccr {

Vote StanceMatrix::at(AgentId agent, ParagraphId paragraph) const {
  auto row = rows_.find(agent);
  if (row == rows_.end()) return Vote::Abstain;
  auto cell = row->second.find(paragraph);
  return cell == row->second.end() ? Vote::Abstain : cell->second;
}

void StanceMatrix::set(AgentId agent, ParagraphId paragraph, Vote value) {
  if (value == Vote::Abstain) {
    auto row = rows_.find(agent);
    if (row == rows_.end()) return;
    row->second.erase(paragraph);
    if (row->second.empty()) rows_.erase(row);
    return;
  }
  rows_[agent][paragraph] = value;
}

std::size_t StanceMatrix::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& [agent, row] : rows_) n += row.size();
  return n;
}

std::set<AgentId> StanceMatrix::active_agents() const {
  std::set<AgentId> out;
  for (const auto& [agent, row] : rows_) out.insert(agent);
  return out;
}

const ParagraphTally& Tally::at(ParagraphId p) const {
  auto it = paragraphs.find(p);
  if (it == paragraphs.end()) {
    throw UnknownParagraph("no tally entry for paragraph " + std::to_string(p));
  }
  return it->second;
}

StanceMatrix stance_of(const EventLog& log) {
  StanceMatrix out;
  for (const Event& e : log) out.set(e.agent, e.paragraph, e.value);
  return out;
}

std::map<AgentId, int> denominators_of(const EventLog& log, WeightMode mode) {
  std::map<AgentId, int> out;
  if (mode == WeightMode::CurrentStance) {
    const StanceMatrix stance = stance_of(log);
    for (const auto& [agent, row] : stance.rows()) {
      out[agent] = static_cast<int>(row.size());
    }
    return out;
  }
  // EverVoted: distinct paragraphs the agent cast a nonzero vote on, ever.
  std::map<AgentId, std::set<ParagraphId>> touched;
  for (const Event& e : log) {
    if (e.value != Vote::Abstain) touched[e.agent].insert(e.paragraph);
  }
  for (const auto& [agent, paragraphs] : touched) {
    out[agent] = static_cast<int>(paragraphs.size());
  }
  return out;
}

Tally build_tally(const StanceMatrix& stance,
                  const std::map<AgentId, int>& denominators,
                  const std::set<ParagraphId>& universe) {
  Tally out;
  out.denominators = denominators;
  for (ParagraphId p : universe) out.paragraphs[p] = ParagraphTally{};
  // rows() iterates agents in ascending order, fixing the float summation order.
  for (const auto& [agent, row] : stance.rows()) {
    auto denom_it = denominators.find(agent);
    if (denom_it == denominators.end() || denom_it->second <= 0) {
      throw DomainError("agent " + std::to_string(agent) +
                        " holds a stance but has no weight denominator");
    }
    const double weight = 1.0 / static_cast<double>(denom_it->second);
    for (const auto& [paragraph, value] : row) {
      ParagraphTally& t = out.paragraphs[paragraph];
      if (value == Vote::Up) {
        t.plus += 1;
        t.plus_rel += weight;
      } else {
        t.minus += 1;
        t.minus_rel += weight;
      }
    }
  }
  return out;
}

Tally tally_of(const Instance& instance, WeightMode mode) {
  const EventLog& log = instance.log();
  return build_tally(stance_of(log), denominators_of(log, mode), log.paragraphs());
}

EventLog restrict(const EventLog& log, ParagraphId paragraph) {
  std::vector<Event> kept;
  for (const Event& e : log) {
    if (e.paragraph == paragraph) kept.push_back(e);
  }
  return EventLog(std::move(kept));
}

EventLog restrict(const EventLog& log, ParagraphId paragraph, AgentId agent) {
  std::vector<Event> kept;
  for (const Event& e : log) {
    if (e.paragraph == paragraph && e.agent == agent) kept.push_back(e);
  }
  return EventLog(std::move(kept));
}

EventLog undo_list(const EventLog& log) {
  std::vector<Event> out;
  const StanceMatrix stance = stance_of(log);
  for (const auto& [agent, row] : stance.rows()) {
    for (const auto& [paragraph, value] : row) {
      out.push_back(Event{static_cast<std::uint32_t>(out.size() + 1),
                          agent, paragraph, Vote::Abstain});
    }
  }
  return EventLog(std::move(out));
}

std::size_t active_agent_count(const Instance& instance) {
  return stance_of(instance.log()).active_agents().size();
}

void IncrementalTally::apply(const Event& event) {
  stance_.set(event.agent, event.paragraph, event.value);
  if (event.value != Vote::Abstain) ever_voted_[event.agent].insert(event.paragraph);
  paragraphs_.insert(event.paragraph);
  agents_.insert(event.agent);
  ++events_seen_;
}

std::map<AgentId, int> IncrementalTally::denominators() const {
  std::map<AgentId, int> out;
  if (mode_ == WeightMode::CurrentStance) {
    for (const auto& [agent, row] : stance_.rows()) {
      out[agent] = static_cast<int>(row.size());
    }
  } else {
    for (const auto& [agent, touched] : ever_voted_) {
      out[agent] = static_cast<int>(touched.size());
    }
  }
  return out;
}

Tally IncrementalTally::tally() const {
  return build_tally(stance_, denominators(), paragraphs_);
}

}  // namespace ccr
