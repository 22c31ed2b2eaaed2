#include <cmath>
#include <set>

#include "doctest.h"

#include "ccr/events.hpp"
#include "ccr/rules.hpp"

using namespace ccr;

namespace {

EventLog worked_example_log() {
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(2, 1, Vote::Up);
  log.append(3, 1, Vote::Up);
  log.append(1, 2, Vote::Up);
  log.append(4, 1, Vote::Down);
  log.append(5, 1, Vote::Down);
  log.append(2, 3, Vote::Up);
  log.append(1, 3, Vote::Up);
  log.append(3, 3, Vote::Down);
  log.append(3, 4, Vote::Up);
  log.append(1, 4, Vote::Up);
  log.append(5, 4, Vote::Down);
  log.append(2, 4, Vote::Up);
  log.append(4, 4, Vote::Up);
  log.append(2, 4, Vote::Abstain);
  log.append(4, 3, Vote::Down);
  return log;
}

RuleSpec static_rule(StaticKernel kernel, double threshold = 0.5,
                     WeightMode mode = WeightMode::EverVoted) {
  RuleSpec rule;
  rule.kernel = kernel;
  rule.threshold = threshold;
  rule.weight_mode = mode;
  return rule;
}

}  // namespace

TEST_CASE("worked example: static kernel scores") {
  const Instance inst = Instance::from_log(worked_example_log());
  const WeightMode mode = WeightMode::EverVoted;

  SUBCASE("APS is the plain upvote fraction") {
    CHECK(static_score(StaticKernel::aps(), 1, inst, mode) == doctest::Approx(0.60));
    CHECK(static_score(StaticKernel::aps(), 2, inst, mode) == doctest::Approx(1.00));
    CHECK(static_score(StaticKernel::aps(), 3, inst, mode) == doctest::Approx(0.50));
    CHECK(static_score(StaticKernel::aps(), 4, inst, mode) == doctest::Approx(0.75));
  }

  SUBCASE("RAPS weights each agent by 1/N_a") {
    // exact fractions: 11/21, 1, 7/15, 11/17 (displayed .52 / 1.00 / .47 / .65)
    CHECK(static_score(StaticKernel::raps(), 1, inst, mode) ==
          doctest::Approx(11.0 / 21).epsilon(1e-12));
    CHECK(static_score(StaticKernel::raps(), 2, inst, mode) == doctest::Approx(1.0));
    CHECK(static_score(StaticKernel::raps(), 3, inst, mode) ==
          doctest::Approx(7.0 / 15).epsilon(1e-12));
    CHECK(static_score(StaticKernel::raps(), 4, inst, mode) ==
          doctest::Approx(11.0 / 17).epsilon(1e-12));
  }

  SUBCASE("RAMS gates RAPS on the upvote headcount") {
    const StaticKernel low = StaticKernel::rams(0.25);   // needs p+ >= 1.25
    const StaticKernel high = StaticKernel::rams(0.75);  // needs p+ >= 3.75
    CHECK(static_score(low, 1, inst, mode) == doctest::Approx(11.0 / 21).epsilon(1e-12));
    CHECK(static_score(low, 2, inst, mode) == 0.0);  // one upvote is not enough
    CHECK(static_score(low, 3, inst, mode) == doctest::Approx(7.0 / 15).epsilon(1e-12));
    CHECK(static_score(low, 4, inst, mode) == doctest::Approx(11.0 / 17).epsilon(1e-12));
    for (ParagraphId p : {1u, 2u, 3u, 4u}) CHECK(static_score(high, p, inst, mode) == 0.0);
  }

  SUBCASE("solutions at threshold 1/2") {
    CHECK(ccr_solution(static_rule(StaticKernel::aps()), inst) == Solution{1, 2, 3, 4});
    CHECK(ccr_solution(static_rule(StaticKernel::raps()), inst) == Solution{1, 2, 4});
    CHECK(ccr_solution(static_rule(StaticKernel::rams(0.25)), inst) == Solution{1, 4});
    CHECK(ccr_solution(static_rule(StaticKernel::rams(0.75)), inst) == Solution{});
  }

  SUBCASE("unknown paragraphs are rejected") {
    CHECK_THROWS_AS(static_score(StaticKernel::aps(), 9, inst, mode), UnknownParagraph);
  }
}

TEST_CASE("a fully withdrawn paragraph scores zero under every kernel") {
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(1, 1, Vote::Abstain);
  log.append(2, 2, Vote::Up);
  const Instance inst = Instance::from_log(log);
  for (const StaticKernel& kernel :
       {StaticKernel::aps(), StaticKernel::raps(), StaticKernel::rams(0.05)}) {
    CHECK(static_score(kernel, 1, inst, WeightMode::EverVoted) == 0.0);
    CHECK(static_score(kernel, 1, inst, WeightMode::CurrentStance) == 0.0);
  }
}

TEST_CASE("the RAMS gate tolerates floating-point boundary headcounts") {
  // 10 agents, 3 upvotes, beta = 0.3: 3 >= 0.3 * 10 must hold despite rounding
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(2, 1, Vote::Up);
  log.append(3, 1, Vote::Up);
  std::set<AgentId> community;
  for (AgentId a = 1; a <= 10; ++a) community.insert(a);
  const Instance inst(community, log);
  CHECK(static_score(StaticKernel::rams(0.3), 1, inst, WeightMode::EverVoted) ==
        doctest::Approx(1.0));
  CHECK(static_score(StaticKernel::rams(0.3, RamsGate::ActiveAgents), 1, inst,
                     WeightMode::EverVoted) == doctest::Approx(1.0));
}

TEST_CASE("exponential smoothing") {
  SUBCASE("worked value: x=0.60, t=16, alpha=0.1") {
    CHECK(f_exp(0.60, 16, 0.1) == doctest::Approx(0.316).epsilon(0.002));
    CHECK(f_exp(0.60, 16, 0.1) == doctest::Approx(0.60 * std::exp(-16 * 0.1 * 0.40)));
  }
  SUBCASE("identity cases") {
    CHECK(f_exp(1.0, 500, 1.0) == doctest::Approx(1.0));  // full consensus never decays
    CHECK(f_exp(0.0, 3, 0.5) == 0.0);
    CHECK(f_exp(0.7, 0, 0.9) == doctest::Approx(0.7));  // t = 0 leaves x untouched
    CHECK(f_exp(0.7, 12, 0.0) == doctest::Approx(0.7));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(f_exp(-0.1, 1, 0.5), DomainError);
    CHECK_THROWS_AS(f_exp(1.1, 1, 0.5), DomainError);
    CHECK_THROWS_AS(f_exp(0.5, -1, 0.5), DomainError);
    CHECK_THROWS_AS(f_exp(0.5, 1, 1.5), DomainError);
  }
}

TEST_CASE("dynamic parameters over a log") {
  const EventLog log = worked_example_log();
  CHECK(param_value(DynamicParam::NumEvents, log) == 16);
  CHECK(param_value(DynamicParam::NumAgents, log) == 5);
  CHECK(param_value(DynamicParam::NumParagraphs, log) == 4);

  const RuleSpec raps = static_rule(StaticKernel::raps());
  CHECK(param_value(DynamicParam::SolutionSize, log, raps) == 3);  // {p1,p2,p4}
  CHECK_THROWS_AS(param_value(DynamicParam::SolutionSize, log), MissingRule);
  CHECK_THROWS_AS(param_value(DynamicParam::NumUpdates, log), MissingRule);

  CHECK(param_from_name(param_name(DynamicParam::NumUpdates)) == DynamicParam::NumUpdates);
  CHECK_THROWS_AS(param_from_name("NUM_WAFFLES"), ConfigError);
  CHECK(is_rule_relative(DynamicParam::SolutionSize));
  CHECK(is_rule_relative(DynamicParam::NumUpdates));
  CHECK_FALSE(is_rule_relative(DynamicParam::NumEvents));
}

TEST_CASE("harsh prefixes") {
  const EventLog log = worked_example_log();
  SUBCASE("shortest prefix reaching the cutoff") {
    CHECK(harsh_prefix(log, DynamicParam::NumEvents, 7) == log.prefix(7));
    CHECK(harsh_prefix(log, DynamicParam::NumParagraphs, 3) == log.prefix(7));
    CHECK(harsh_prefix(log, DynamicParam::NumAgents, 5) == log.prefix(6));
  }
  SUBCASE("t = 0 freezes immediately on the empty prefix") {
    CHECK(harsh_prefix(log, DynamicParam::NumEvents, 0).empty());
  }
  SUBCASE("an unreachable cutoff keeps the whole log") {
    CHECK(harsh_prefix(log, DynamicParam::NumEvents, 500) == log);
  }
}

TEST_CASE("harsh rules freeze the solution") {
  // [APS, 0.7]: e1 (a1,p1,+1) -> {p1}; e2 (a2,p1,+1) -> {p1};
  // e3 (a3,p1,-1) -> APS = 2/3 < 0.7 -> {}
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(2, 1, Vote::Up);
  log.append(3, 1, Vote::Down);

  RuleSpec frozen = static_rule(StaticKernel::aps(), 0.7);
  frozen.dynamizer = Dynamizer::harsh(DynamicParam::NumEvents, 2);
  CHECK(ccr_solution(frozen, Instance::from_log(log)) == Solution{1});

  RuleSpec live = static_rule(StaticKernel::aps(), 0.7);
  CHECK(ccr_solution(live, Instance::from_log(log)) == Solution{});

  // paragraphs proposed after the freeze point score zero
  EventLog longer = log;
  longer.append(1, 2, Vote::Up);
  CHECK(dynamic_score(frozen, 2, longer) == 0.0);
  CHECK(ccr_solution(frozen, Instance::from_log(longer)) == Solution{1});
}

TEST_CASE("smooth rules decay the static score") {
  const EventLog log = worked_example_log();
  const Instance inst = Instance::from_log(log);
  RuleSpec rule = static_rule(StaticKernel::aps());
  rule.dynamizer = Dynamizer::smooth(DynamicParam::NumEvents, 0.1);
  // APS(p1) = 0.60 at |E| = 16 decays to 0.316 and drops out at x = 1/2
  CHECK(dynamic_score(rule, 1, inst) == doctest::Approx(0.316).epsilon(0.002));
  CHECK(ccr_solution(rule, inst).count(1) == 0);
  // a unanimous paragraph never decays
  CHECK(dynamic_score(rule, 2, inst) == doctest::Approx(1.0));
  CHECK(ccr_solution(rule, inst).count(2) == 1);
}

TEST_CASE("trajectory and updates") {
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(2, 1, Vote::Up);
  log.append(3, 1, Vote::Down);
  const RuleSpec rule = static_rule(StaticKernel::aps(), 0.7);

  const Trajectory t = ccr_trajectory(rule, log);
  REQUIRE(t.events() == 3);
  CHECK(t.prefix_solutions[0] == Solution{1});
  CHECK(t.prefix_solutions[1] == Solution{1});
  CHECK(t.prefix_solutions[2] == Solution{});
  CHECK(t.update_indices == std::vector<std::size_t>{2});  // R*(3) != R*(2)
  CHECK(t.update_count() == 1);
  CHECK(t.last() == Solution{});

  CHECK_THROWS_AS(Trajectory{}.last(), EmptyLog);
}

TEST_CASE("streaming evaluation matches batch trajectories") {
  const EventLog log = worked_example_log();
  for (const RuleSpec& rule : build_rule_grid(paper_grid())) {
    const Trajectory batch = ccr_trajectory(rule, log);
    TrajectoryBuilder builder(rule, log.agents().size());
    for (const Event& e : log) builder.push(e);
    CHECK(builder.trajectory().prefix_solutions == batch.prefix_solutions);
    CHECK(builder.trajectory().update_indices == batch.update_indices);
  }
}

TEST_CASE("harsh builder reports its freeze point") {
  RuleSpec rule = static_rule(StaticKernel::aps(), 0.7);
  rule.dynamizer = Dynamizer::harsh(DynamicParam::NumEvents, 2);
  TrajectoryBuilder builder(rule, 3);
  EventLog log;
  log.append(1, 1, Vote::Up);
  builder.push(log[0]);
  CHECK_FALSE(builder.frozen_at().has_value());
  log.append(2, 1, Vote::Up);
  builder.push(log[1]);
  log.append(3, 1, Vote::Down);
  builder.push(log[2]);
  REQUIRE(builder.frozen_at().has_value());
  CHECK(*builder.frozen_at() == 2);
  CHECK(builder.current() == Solution{1});
}

TEST_CASE("the RAMS community stays fixed while a log is replayed") {
  // 1 upvote among 10 agents: beta = 0.15 needs p+ >= 1.5 on every prefix
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(2, 1, Vote::Up);
  RuleSpec rule = static_rule(StaticKernel::rams(0.15));

  const Trajectory small = ccr_trajectory(rule, log);  // community = A(E) = 2 agents
  CHECK(small.prefix_solutions[0] == Solution{1});     // 1 >= 0.3

  const Trajectory wide = ccr_trajectory(rule, log, 10);  // needs 1.5 upvotes
  CHECK(wide.prefix_solutions[0] == Solution{});
  CHECK(wide.prefix_solutions[1] == Solution{1});
}

TEST_CASE("relative majority rule") {
  const Instance inst = Instance::from_log(worked_example_log());
  CHECK(rm_solution(inst, WeightMode::EverVoted) == Solution{1, 2, 4});

  SUBCASE("ties follow the tie-break setting") {
    EventLog tie;
    tie.append(1, 1, Vote::Up);
    tie.append(2, 1, Vote::Down);
    const Instance t = Instance::from_log(tie);
    CHECK(rm_solution(t, WeightMode::EverVoted, TieBreak::ExcludeOnTie) == Solution{});
    CHECK(rm_solution(t, WeightMode::EverVoted, TieBreak::IncludeOnTie) == Solution{1});
  }
}

TEST_CASE("the sentinel rule is versatile and freezes on the sentinel abstention") {
  // target {p1, p3}: propose them, then abstain on the sentinel paragraph
  EventLog log;
  log.append(1, 1, Vote::Up);
  log.append(1, 3, Vote::Up);  // ids need not be contiguous
  const ParagraphId sentinel = 4;
  log.append(1, sentinel, Vote::Up);
  log.append(1, sentinel, Vote::Abstain);
  log.append(2, 2, Vote::Up);
  log.append(2, 1, Vote::Down);
  log.append(2, 3, Vote::Down);
  const Instance inst = Instance::from_log(log);
  CHECK(sentinel_rule(inst, sentinel) == Solution{1, 3, sentinel});

  // without the abstention the whole log counts
  EventLog open;
  open.append(1, 1, Vote::Up);
  open.append(2, 2, Vote::Up);
  CHECK(sentinel_rule(Instance::from_log(open), 9) == Solution{1, 2});
}

TEST_CASE("rule strings round-trip") {
  const std::vector<RuleSpec> rules = build_rule_grid(paper_grid());
  std::set<std::string> seen;
  for (const RuleSpec& rule : rules) {
    const std::string text = rule.to_string();
    CHECK(RuleSpec::parse(text) == rule);
    CHECK(seen.insert(text).second);  // all 54 ids are distinct
  }

  CHECK(RuleSpec::parse("RAPS||0.5|EVER_VOTED") ==
        static_rule(StaticKernel::raps(), 0.5, WeightMode::EverVoted));
  RuleSpec smooth = static_rule(StaticKernel::rams(0.25), 0.5);
  smooth.dynamizer = Dynamizer::smooth(DynamicParam::NumEvents, 0.1);
  CHECK(RuleSpec::parse("RAMS:0.25|SMOOTH:NUM_EVENTS:0.1|0.5|EVER_VOTED") == smooth);
  CHECK(RuleSpec::parse(smooth.to_string()) == smooth);

  CHECK_THROWS_AS(RuleSpec::parse(""), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("APS|0.5"), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("APSX||0.5|EVER_VOTED"), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("APS||1.5|EVER_VOTED"), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("APS||0.5|SOMETIMES"), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("APS|GENTLE:NUM_EVENTS:1|0.5|EVER_VOTED"), ConfigError);
  CHECK_THROWS_AS(RuleSpec::parse("RAMS|SMOOTH:NUM_EVENTS:0.1|0.5|EVER_VOTED"), ConfigError);
}

TEST_CASE("benchmark grids") {
  CHECK(build_rule_grid(paper_grid()).size() == 54);
  CHECK(build_rule_grid(static_grid()).size() == 6);

  RuleGridSpec empty = paper_grid();
  empty.kernels.clear();
  CHECK_THROWS_AS(build_rule_grid(empty), ConfigError);

  RuleGridSpec harsh_only = paper_grid();
  harsh_only.include_static = false;
  harsh_only.include_smooth = false;
  CHECK(build_rule_grid(harsh_only).size() == 24);

  CHECK(weight_mode_from_name(weight_mode_name(WeightMode::CurrentStance)) ==
        WeightMode::CurrentStance);
  CHECK_THROWS_AS(weight_mode_from_name("WHATEVER"), ConfigError);
}
