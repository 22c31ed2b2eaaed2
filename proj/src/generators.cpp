#include "ccr/generators.hpp"

#include <vector>

namespace ccr {

EventLog random_log(Rng& rng, const std::set<AgentId>& agents,
                    const RandomInstanceOptions& options) {
  if (agents.empty()) throw DomainError("random_log needs at least one agent");
  const std::vector<AgentId> pool(agents.begin(), agents.end());
  const std::size_t paragraph_budget = 1 + uniform_index(rng, options.max_paragraphs);
  const std::size_t n_events = 1 + uniform_index(rng, options.max_events);

  EventLog log;
  for (std::size_t i = 0; i < n_events; ++i) {
    const AgentId agent = pool[uniform_index(rng, pool.size())];
    const bool can_propose = log.paragraphs().size() < paragraph_budget;
    const bool must_propose = log.paragraphs().empty();
    if (must_propose || (can_propose && uniform01(rng) < options.propose_bias)) {
      log.append(agent, log.next_paragraph(), Vote::Up);
      continue;
    }
    const auto& paragraphs = log.paragraphs();
    auto it = paragraphs.begin();
    std::advance(it, uniform_index(rng, paragraphs.size()));
    Vote value;
    if (uniform01(rng) < options.abstain_share) {
      value = Vote::Abstain;
    } else {
      value = uniform01(rng) < 0.5 ? Vote::Up : Vote::Down;
    }
    log.append(agent, *it, value);
  }
  return log;
}

Instance random_instance(Rng& rng, const RandomInstanceOptions& options) {
  const std::size_t n = 1 + uniform_index(rng, options.max_agents);
  std::set<AgentId> agents;
  for (std::size_t a = 1; a <= n; ++a) agents.insert(static_cast<AgentId>(a));
  return Instance(agents, random_log(rng, agents, options));
}

}  // namespace ccr
