#include "ccr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "ccr/format.hpp"
#include "ccr/generators.hpp"
#include "ccr/scheduler.hpp"
#include "ccr/welfare.hpp"

namespace ccr {

namespace {

std::string show_log(const EventLog& log) {
  std::string out = "<";
  for (const Event& e : log.events()) {
    if (out.size() > 1) out += ", ";
    out += "(" + std::to_string(e.agent) + "," + std::to_string(e.paragraph) + "," +
           (e.value == Vote::Up ? "+1" : e.value == Vote::Down ? "-1" : "0") + ")";
  }
  return out + ">";
}

std::string show_solution(const Solution& solution) {
  std::string out = "{";
  for (ParagraphId p : solution) {
    if (out.size() > 1) out += ",";
    out += std::to_string(p);
  }
  return out + "}";
}

std::string show_instance(const Instance& instance) {
  return "agents=" + std::to_string(instance.agents().size()) +
         " log=" + show_log(instance.log());
}

/// Greedy event-removal shrink: drop any single event whose removal keeps
/// the log valid and the failure alive, repeating to a fixed point.
EventLog shrink_log(const EventLog& log, const std::function<bool(const EventLog&)>& fails) {
  std::vector<Event> events = log.events();
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < events.size(); ++i) {
      std::vector<Event> fewer;
      fewer.reserve(events.size() - 1);
      for (std::size_t j = 0; j < events.size(); ++j)
        if (j != i) fewer.push_back(events[j]);
      EventLog candidate;
      try {
        for (const Event& e : fewer) candidate.append(e.agent, e.paragraph, e.value);
      } catch (const Error&) {
        continue;
      }
      if (!fails(candidate)) continue;
      events = std::move(fewer);
      progress = true;
      break;
    }
  }
  EventLog out;
  for (const Event& e : events) out.append(e.agent, e.paragraph, e.value);
  return out;
}

const char* mode_tag(WeightMode mode) {
  return mode == WeightMode::CurrentStance ? "CURRENT_STANCE" : "EVER_VOTED";
}

// --- suites ----------------------------------------------------------------

SuiteResult suite_swm_rm(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "welfare-swm-rm-equivalence";
  Rng rng(seed);
  RandomInstanceOptions opts;
  opts.max_paragraphs = 6;
  opts.max_events = 40;
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const Instance instance = random_instance(rng, opts);
    if (instance.log().size() == 0) continue;
    for (WeightMode mode : {WeightMode::CurrentStance, WeightMode::EverVoted}) {
      const Solution rm = rm_solution(instance, mode);
      const std::vector<Solution> best = swm_oracle(instance, mode);
      const double rm_value = satisfaction(instance, rm, mode).community;
      const double best_value = satisfaction(instance, best.front(), mode).community;
      if (rm_value >= best_value - 1e-9) continue;
      result.passed = false;
      auto fails = [&](const EventLog& log) {
        if (log.size() == 0) return false;
        const Instance smaller(instance.agents(), log);
        const double a = satisfaction(smaller, rm_solution(smaller, mode), mode).community;
        const double b =
            satisfaction(smaller, swm_oracle(smaller, mode).front(), mode).community;
        return a < b - 1e-9;
      };
      const EventLog small = shrink_log(instance.log(), fails);
      std::ostringstream os;
      os << mode_tag(mode) << " rm=" << show_solution(rm) << " value=" << rm_value
         << " < oracle=" << show_solution(best.front()) << " value=" << best_value
         << " on agents=" << instance.agents().size() << " log=" << show_log(small);
      result.counterexample = os.str();
      break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_destabilization(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "welfare-destabilization";
  Rng rng(seed);
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const Instance instance = random_instance(rng);
    if (instance.log().size() == 0) continue;
    for (WeightMode mode : {WeightMode::CurrentStance, WeightMode::EverVoted}) {
      const Solution included = rm_solution(instance, mode);
      for (ParagraphId p : instance.log().paragraphs()) {
        const bool in = included.count(p) != 0;
        const EventLog push = destabilizing_extension(
            instance, p, mode, in ? FlipDirection::ForceExclude : FlipDirection::ForceInclude);
        const Instance flipped = instance.extended(push);
        const bool in_after = rm_solution(flipped, mode).count(p) != 0;
        if (in_after != in) continue;
        result.passed = false;
        std::ostringstream os;
        os << mode_tag(mode) << " paragraph " << p << (in ? " stayed in" : " stayed out")
           << " after " << push.size() << " fresh votes; " << show_instance(instance);
        result.counterexample = os.str();
        break;
      }
      if (!result.passed) break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_undo(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "rules-vote-undo";
  Rng rng(seed);
  RandomInstanceOptions opts;
  opts.max_events = 30;
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    std::set<AgentId> agents;
    const std::size_t n = 2 + uniform_index(rng, 5);
    for (std::size_t a = 1; a <= n; ++a) agents.insert(static_cast<AgentId>(a));
    const EventLog first = random_log(rng, agents, opts);
    const EventLog second = random_log(rng, agents, opts);
    if (second.size() == 0) continue;
    const EventLog joined = first + undo_list(first) + second;

    if (!(stance_of(joined) == stance_of(second))) {
      result.passed = false;
      result.counterexample = "stances differ: first=" + show_log(first) +
                              " second=" + show_log(second);
      ++result.cases;
      break;
    }
    const Instance with_history(agents, joined);
    const Instance fresh(agents, second);
    for (RuleSpec rule : build_rule_grid(static_grid())) {
      rule.weight_mode = WeightMode::CurrentStance;
      const Solution a = ccr_solution(rule, with_history);
      const Solution b = ccr_solution(rule, fresh);
      if (a == b) continue;
      result.passed = false;
      std::ostringstream os;
      os << "kernel " << rule.kernel.to_string() << ": " << show_solution(a)
         << " != " << show_solution(b) << "; first=" << show_log(first)
         << " second=" << show_log(second);
      result.counterexample = os.str();
      break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_smoothing(std::size_t, std::uint64_t) {
  SuiteResult result;
  result.name = "smoothing-shape";
  const double step = 0.05;
  for (int xi = 0; xi <= 20 && result.passed; ++xi) {
    const double x = xi * step;
    for (int t = 0; t <= 200; t += 5) {
      for (int ai = 0; ai <= 20; ++ai) {
        const double alpha = ai * step;
        const double v = f_exp(x, t, alpha);
        ++result.cases;
        std::string broke;
        if (x > 0.0 && v <= 0.0) broke = "positivity";
        if (broke.empty() && f_exp(x, t + 5, alpha) > v + 1e-12) broke = "monotone in t";
        if (broke.empty() && ai < 20 && f_exp(x, t, alpha + step) > v + 1e-12)
          broke = "monotone in alpha";
        if (broke.empty() && xi < 20 && f_exp(x + step, t, alpha) < v - 1e-12)
          broke = "monotone in x";
        if (broke.empty()) continue;
        result.passed = false;
        std::ostringstream os;
        os << broke << " violated at x=" << x << " t=" << t << " alpha=" << alpha;
        result.counterexample = os.str();
        break;
      }
      if (!result.passed) break;
    }
  }
  return result;
}

SuiteResult suite_sentinel(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "rules-sentinel";
  Rng rng(seed);
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    // versatility: a log proposing exactly the target realizes it
    Solution target;
    const std::size_t want = 1 + uniform_index(rng, 6);
    while (target.size() < want)
      target.insert(static_cast<ParagraphId>(1 + uniform_index(rng, 8)));
    std::vector<Event> events;
    std::uint32_t seq = 1;
    for (ParagraphId p : target) events.push_back({seq++, 1, p, Vote::Up});
    const EventLog proposals{events};
    const ParagraphId sentinel = proposals.next_paragraph();
    const Solution realized = sentinel_rule(Instance::from_log(proposals), sentinel);
    ++result.cases;
    if (!(realized == target)) {
      result.passed = false;
      result.counterexample = "target " + show_solution(target) + " realized as " +
                              show_solution(realized) + " from " + show_log(proposals);
      break;
    }

    // stability: propose the sentinel, withdraw it, then any continuation
    const Instance base = random_instance(rng);
    EventLog log = base.log();
    const ParagraphId stop = log.next_paragraph();
    log.append(1, stop, Vote::Up);
    log.append(1, stop, Vote::Abstain);
    const Solution frozen = sentinel_rule(Instance::from_log(log), stop);
    std::set<AgentId> agents = base.agents();
    agents.insert(1);
    EventLog extended = log + random_log(rng, agents);
    const Solution later = sentinel_rule(Instance(agents, extended), stop);
    ++result.cases;
    if (!(later == frozen)) {
      result.passed = false;
      result.counterexample = "post-sentinel drift: " + show_solution(frozen) + " -> " +
                              show_solution(later) + "; " + show_log(extended);
      break;
    }
  }
  return result;
}

SuiteResult suite_rm_ties(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "rules-rm-tie-handling";
  Rng rng(seed);
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const Instance instance = random_instance(rng);
    if (instance.log().size() == 0) continue;
    for (WeightMode mode : {WeightMode::CurrentStance, WeightMode::EverVoted}) {
      const Solution strict = rm_solution(instance, mode, TieBreak::ExcludeOnTie);
      const Solution lenient = rm_solution(instance, mode, TieBreak::IncludeOnTie);
      RuleSpec raps;
      raps.kernel = StaticKernel::raps();
      raps.weight_mode = mode;
      const Solution at_half = ccr_solution(raps, instance);
      const Tally tally = tally_of(instance, mode);

      std::string broke;
      for (ParagraphId p : instance.log().paragraphs()) {
        const ParagraphTally& t = tally.at(p);
        const bool touched = t.plus_rel + t.minus_rel > 0.0;
        if (strict.count(p) != 0 && at_half.count(p) == 0) broke = "strict not within RAPS@0.5";
        if (touched && at_half.count(p) != 0 && lenient.count(p) == 0)
          broke = "RAPS@0.5 not within lenient";
        if (touched && strict.count(p) == 0 && lenient.count(p) != 0 &&
            std::abs(t.plus_rel - t.minus_rel) > 1e-9)
          broke = "tie break fired off a tie";
        if (!broke.empty()) {
          result.passed = false;
          result.counterexample = broke + " at paragraph " + std::to_string(p) + ", " +
                                  mode_tag(mode) + ", " + show_instance(instance);
          break;
        }
      }
      if (!result.passed) break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_static_invariance(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "rules-static-invariance";
  Rng rng(seed);
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const Instance instance = random_instance(rng);
    const EventLog& log = instance.log();
    if (log.size() == 0) continue;

    // restating a standing stance never moves any static solution
    const StanceMatrix stance = stance_of(log);
    EventLog restated = log;
    bool added = false;
    for (const auto& [agent, row] : stance.rows()) {
      if (row.empty()) continue;
      restated.append(agent, row.begin()->first, row.begin()->second);
      added = true;
      break;
    }

    // consistent relabeling of agents maps solutions unchanged
    EventLog relabeled;
    for (const Event& e : log.events()) relabeled.append(e.agent + 100, e.paragraph, e.value);
    std::set<AgentId> shifted;
    for (AgentId a : instance.agents()) shifted.insert(a + 100);

    for (RuleSpec rule : build_rule_grid(static_grid())) {
      for (WeightMode mode : {WeightMode::CurrentStance, WeightMode::EverVoted}) {
        rule.weight_mode = mode;
        const Solution base = ccr_solution(rule, instance);
        std::string broke;
        if (added && !(ccr_solution(rule, Instance(instance.agents(), restated)) == base))
          broke = "restated stance moved the solution";
        if (broke.empty() && !(ccr_solution(rule, Instance(shifted, relabeled)) == base))
          broke = "agent relabeling moved the solution";
        if (broke.empty()) continue;
        result.passed = false;
        result.counterexample = broke + " under " + rule.kernel.to_string() + "/" +
                                mode_tag(mode) + "; " + show_instance(instance);
        break;
      }
      if (!result.passed) break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_incremental(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "scheduler-incremental-batch";
  Rng rng(seed);
  const std::vector<RuleSpec> grid = build_rule_grid(paper_grid());
  RandomInstanceOptions opts;
  opts.max_events = 40;
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const Instance instance = random_instance(rng, opts);
    const EventLog& log = instance.log();
    if (log.size() == 0) continue;
    RuleSpec rule = grid[uniform_index(rng, grid.size())];
    rule.weight_mode =
        uniform01(rng) < 0.5 ? WeightMode::CurrentStance : WeightMode::EverVoted;

    TrajectoryBuilder builder(rule, instance.agents().size());
    for (const Event& e : log.events()) builder.push(e);
    const Trajectory streamed = builder.take();

    for (std::size_t m = 1; m <= log.size(); ++m) {
      const Solution scratch = ccr_solution(rule, Instance(instance.agents(), log.prefix(m)));
      if (streamed.prefix_solutions[m - 1] == scratch) continue;
      result.passed = false;
      std::ostringstream os;
      os << "rule " << rule.to_string() << " prefix " << m << ": streamed "
         << show_solution(streamed.prefix_solutions[m - 1]) << " != scratch "
         << show_solution(scratch) << "; " << show_instance(instance);
      result.counterexample = os.str();
      break;
    }
    ++result.cases;
  }
  return result;
}

SuiteResult suite_pareto(std::size_t cases, std::uint64_t seed) {
  SuiteResult result;
  result.name = "welfare-pareto-front";
  Rng rng(seed);
  for (std::size_t i = 0; i < cases && result.passed; ++i) {
    const std::size_t n = 1 + uniform_index(rng, 24);
    std::vector<MetricPoint> points(n);
    for (std::size_t k = 0; k < n; ++k) {
      points[k].rule = "r" + std::to_string(k);
      points[k].satisfaction = std::round(uniform01(rng) * 10.0) / 10.0;  // force ties
      points[k].stability = std::round(uniform01(rng) * 10.0) / 10.0;
    }
    const std::vector<MetricPoint> front = pareto_front(points);
    auto dominated = [&](const MetricPoint& p) {
      for (const MetricPoint& q : points) {
        if (q.satisfaction >= p.satisfaction && q.stability >= p.stability &&
            (q.satisfaction > p.satisfaction || q.stability > p.stability))
          return true;
      }
      return false;
    };
    std::string broke;
    for (const MetricPoint& p : front)
      if (dominated(p)) broke = "front contains dominated " + p.rule;
    std::size_t free_count = 0;
    for (const MetricPoint& p : points)
      if (!dominated(p)) ++free_count;
    if (broke.empty() && free_count != front.size()) broke = "front misses a maximal point";
    ++result.cases;
    if (broke.empty()) continue;
    result.passed = false;
    std::ostringstream os;
    os << broke << " among " << n << " points (front " << front.size() << ", maximal "
       << free_count << ")";
    result.counterexample = os.str();
  }
  return result;
}

SuiteResult suite_scheduler(std::size_t, std::uint64_t seed) {
  SuiteResult result;
  result.name = "scheduler-determinism-uniformity";
  SimConfig config;
  config.n_events = 4000;
  const RuleSpec rule = RuleSpec::parse("RAPS||0.5|EVER_VOTED");

  UnstructuredPopulation population(20);
  const RunResult first = run_simulation(config, population, rule, seed);
  UnstructuredPopulation again(20);
  const RunResult second = run_simulation(config, again, rule, seed);
  ++result.cases;
  if (!(first.instance.log() == second.instance.log())) {
    result.passed = false;
    result.counterexample = "same seed, different logs";
    return result;
  }

  std::map<AgentId, std::size_t> counts;
  for (const Event& e : first.instance.log().events()) ++counts[e.agent];
  const double expected = static_cast<double>(config.n_events) / 20.0;
  double chi2 = 0.0;
  for (AgentId a = 1; a <= 20; ++a) {
    const double diff = static_cast<double>(counts[a]) - expected;
    chi2 += diff * diff / expected;
  }
  ++result.cases;
  if (chi2 > 43.82) {  // chi-square 0.999 quantile, 19 dof
    result.passed = false;
    result.counterexample = "agent selection chi2 = " + format_double(chi2) + " over 4000 events";
  }
  return result;
}

}  // namespace

std::vector<SuiteResult> run_property_suites(const VerifyOptions& options) {
  using Suite = SuiteResult (*)(std::size_t, std::uint64_t);
  const std::pair<const char*, Suite> suites[] = {
      {"welfare-swm-rm-equivalence", suite_swm_rm},
      {"welfare-destabilization", suite_destabilization},
      {"welfare-pareto-front", suite_pareto},
      {"rules-vote-undo", suite_undo},
      {"rules-sentinel", suite_sentinel},
      {"rules-rm-tie-handling", suite_rm_ties},
      {"rules-static-invariance", suite_static_invariance},
      {"smoothing-shape", suite_smoothing},
      {"scheduler-incremental-batch", suite_incremental},
      {"scheduler-determinism-uniformity", suite_scheduler},
  };
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : suites) {
    if (!options.only.empty() && std::string(name).find(options.only) == std::string::npos)
      continue;
    results.push_back(fn(options.cases, options.seed));
  }
  return results;
}

int report_suites(const std::vector<SuiteResult>& results, std::ostream& out) {
  bool all = true;
  for (const SuiteResult& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << r.cases << " cases)\n";
    if (!r.passed) {
      out << "       counterexample: " << r.counterexample << "\n";
      all = false;
    }
  }
  if (results.empty()) {
    out << "no suites matched the filter\n";
    return 2;
  }
  return all ? 0 : 2;
}

}  // namespace ccr
