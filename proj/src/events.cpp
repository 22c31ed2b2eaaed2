#include "ccr/events.hpp"

#include <string>
#include <utility>

namespace ccr {

Vote vote_from_int(int value) {
  switch (value) {
    case -1: return Vote::Down;
    case 0: return Vote::Abstain;
    case 1: return Vote::Up;
    default:
      throw DomainError("vote value must be -1, 0 or +1, got " + std::to_string(value));
  }
}

std::string vote_token(Vote v) {
  switch (v) {
    case Vote::Up: return "+1";
    case Vote::Abstain: return "0";
    case Vote::Down: return "-1";
  }
  throw DomainError("corrupt vote value");
}

Vote vote_from_token(const std::string& token) {
  if (token == "+1" || token == "1") return Vote::Up;
  if (token == "0") return Vote::Abstain;
  if (token == "-1") return Vote::Down;
  throw DomainError("unrecognized vote token '" + token + "'");
}

EventLog::EventLog(std::vector<Event> events) : events_(std::move(events)) {
  for (const Event& e : events_) {
    paragraphs_.insert(e.paragraph);
    agents_.insert(e.agent);
  }
}

void EventLog::append(AgentId agent, ParagraphId paragraph, Vote value) {
  if (!paragraphs_.count(paragraph) && value != Vote::Up) {
    throw NewParagraphNotApproval(
        "first event for paragraph " + std::to_string(paragraph) +
        " must be +1 (a proposal), got " + vote_token(value));
  }
  events_.push_back(Event{static_cast<std::uint32_t>(events_.size() + 1),
                          agent, paragraph, value});
  paragraphs_.insert(paragraph);
  agents_.insert(agent);
}

void EventLog::append_all(const EventLog& other) {
  for (const Event& e : other) append(e.agent, e.paragraph, e.value);
}

EventLog EventLog::appended(AgentId agent, ParagraphId paragraph, Vote value) const {
  EventLog out = *this;
  out.append(agent, paragraph, value);
  return out;
}

EventLog EventLog::prefix(std::size_t n) const {
  if (n > events_.size()) n = events_.size();
  EventLog out;
  for (std::size_t i = 0; i < n; ++i) {
    const Event& e = events_[i];
    out.append(e.agent, e.paragraph, e.value);
  }
  return out;
}

ParagraphId EventLog::max_paragraph() const {
  return paragraphs_.empty() ? 0 : *paragraphs_.rbegin();
}

EventLog operator+(EventLog lhs, const EventLog& rhs) {
  lhs.append_all(rhs);
  return lhs;
}

Instance::Instance(std::set<AgentId> agents, EventLog log)
    : agents_(std::move(agents)), log_(std::move(log)) {
  for (AgentId a : log_.agents()) {
    if (!agents_.count(a)) {
      throw UnknownAgent("event log mentions agent " + std::to_string(a) +
                         " outside the community");
    }
  }
}

Instance Instance::from_log(EventLog log) {
  Instance out;
  out.agents_ = log.agents();
  out.log_ = std::move(log);
  return out;
}

Instance Instance::extended(const EventLog& more) const {
  Instance out = *this;
  out.log_.append_all(more);
  for (AgentId a : more.agents()) out.agents_.insert(a);
  return out;
}

}  // namespace ccr
