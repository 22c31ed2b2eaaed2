#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ccr/types.hpp"

namespace ccr {

/// One deliberation step: an agent casts a value on a paragraph.
/// `seq` is the 1-based position within its log.
struct Event {
  std::uint32_t seq = 0;
  AgentId agent = 0;
  ParagraphId paragraph = 0;
  Vote value = Vote::Abstain;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Ordered list of events.  Growth goes through append(), which enforces the
/// one structural rule of the model: the first event touching a paragraph
/// must be an approval (a proposal doubles as the proposer's +1).
///
/// The verbatim constructor adopts an existing vector without revalidating,
/// because derived lists (paragraph projections, undo lists) intentionally
/// violate the growth rule while keeping their original sequence numbers.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<Event> events);

  /// Appends (agent, paragraph, value) with seq = size()+1.
  /// Throws NewParagraphNotApproval if `paragraph` is unseen and value != +1.
  /// An abstention on a known paragraph is always accepted, even from an
  /// agent that never voted on it (it simply never changes any stance).
  void append(AgentId agent, ParagraphId paragraph, Vote value);

  /// Appends every event of `other` in order, revalidating and renumbering.
  void append_all(const EventLog& other);

  /// Pure variant of append().
  EventLog appended(AgentId agent, ParagraphId paragraph, Vote value) const;

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  const std::vector<Event>& events() const { return events_; }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

  /// Events 1..n as a fresh log (n clamped to size()).  Prefixes of a valid
  /// log are valid, so the result supports further append().
  EventLog prefix(std::size_t n) const;

  /// P(E): every paragraph that appears in some event.
  const std::set<ParagraphId>& paragraphs() const { return paragraphs_; }
  /// A(E): every agent that appears in some event.
  const std::set<AgentId>& agents() const { return agents_; }

  ParagraphId max_paragraph() const;  // 0 when no paragraphs exist
  ParagraphId next_paragraph() const { return max_paragraph() + 1; }

  friend bool operator==(const EventLog&, const EventLog&) = default;

 private:
  std::vector<Event> events_;
  std::set<ParagraphId> paragraphs_;
  std::set<AgentId> agents_;
};

/// Concatenation; right-hand events are revalidated and renumbered.
EventLog operator+(EventLog lhs, const EventLog& rhs);

/// A deliberation instance: a fixed agent community plus its event log.
/// Agents may be listed without ever acting; every acting agent must be listed.
class Instance {
 public:
  Instance() = default;
  Instance(std::set<AgentId> agents, EventLog log);  // throws UnknownAgent

  /// Community taken to be exactly the agents that appear in the log.
  static Instance from_log(EventLog log);

  const std::set<AgentId>& agents() const { return agents_; }
  const EventLog& log() const { return log_; }

  /// New instance with `more` appended; agents unseen so far join the community.
  Instance extended(const EventLog& more) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::set<AgentId> agents_;
  EventLog log_;
};

}  // namespace ccr
