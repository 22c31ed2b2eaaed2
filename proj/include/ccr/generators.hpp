#pragma once

#include "ccr/events.hpp"
#include "ccr/rng.hpp"

namespace ccr {

/// Size bounds for randomly generated deliberations.  Defaults match the
/// scale the brute-force oracle can certify.
struct RandomInstanceOptions {
  std::size_t max_agents = 6;
  std::size_t max_paragraphs = 8;
  std::size_t max_events = 60;
  double propose_bias = 0.3;   // chance of a new paragraph while under budget
  double abstain_share = 0.2;  // chance a vote event is an abstention
};

/// Valid random log over the given agents: proposals carry +1, later votes
/// hit existing paragraphs, abstentions included.
EventLog random_log(Rng& rng, const std::set<AgentId>& agents,
                    const RandomInstanceOptions& options = {});

/// Random instance whose community is 1..n for a random n; some agents may
/// never act (the community is allowed to outnumber the participants).
Instance random_instance(Rng& rng, const RandomInstanceOptions& options = {});

}  // namespace ccr
