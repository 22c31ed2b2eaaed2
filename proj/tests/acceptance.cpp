// Acceptance harness: golden values, oracle equivalences, and directional
// reproductions of the benchmark behavior, one PASS/FAIL line each.  Exits
// nonzero if any criterion fails or runs over its time budget.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "ccr/datasets.hpp"
#include "ccr/io.hpp"
#include "ccr/llm.hpp"
#include "ccr/populations.hpp"
#include "ccr/rng.hpp"
#include "ccr/rules.hpp"
#include "ccr/scheduler.hpp"
#include "ccr/stance.hpp"
#include "ccr/welfare.hpp"

using namespace ccr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void run_criterion(const std::string& name, double budget_s,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("unexpected exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ok && elapsed > budget_s) {
    ok = false;
    std::ostringstream os;
    os << "over the " << budget_s << " s budget";
    detail = os.str();
  }
  std::ostringstream line;
  line << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << std::fixed << std::setprecision(1)
       << elapsed << " s)";
  if (!ok && !detail.empty()) line << ": " << detail;
  std::cout << line.str() << "\n" << std::flush;
  g_failures += !ok;
}

std::size_t worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::min<std::size_t>(16, std::max(1u, hw));
}

fs::path data_file(const std::string& name) {
  return fs::path(CCR_SOURCE_DIR) / "data" / name;
}

/// The 16-event log whose stance matrix and scores are pinned below.
EventLog recorded_log() {
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

struct RandomLogOptions {
  std::size_t max_paragraphs = 8;
  std::size_t max_events = 60;
};

EventLog random_log(Rng& rng, std::size_t n_agents, const RandomLogOptions& opts) {
  const std::size_t n_events = uniform_index(rng, opts.max_events + 1);
  EventLog log;
  for (std::size_t i = 0; i < n_events; ++i) {
    const AgentId agent = static_cast<AgentId>(1 + uniform_index(rng, n_agents));
    const auto& known = log.paragraphs();
    if (known.empty() || (known.size() < opts.max_paragraphs && uniform_index(rng, 4) == 0)) {
      log.append(agent, log.next_paragraph(), Vote::Up);
      continue;
    }
    auto it = known.begin();
    std::advance(it, uniform_index(rng, known.size()));
    const Vote value = std::array{Vote::Up, Vote::Down, Vote::Abstain}[uniform_index(rng, 3)];
    log.append(agent, *it, value);
  }
  return log;
}

Instance random_instance(Rng& rng, std::size_t max_agents = 6, RandomLogOptions opts = {}) {
  const std::size_t n = 1 + uniform_index(rng, max_agents);
  std::set<AgentId> agents;
  for (std::size_t a = 1; a <= n; ++a) agents.insert(static_cast<AgentId>(a));
  return Instance(agents, random_log(rng, n, opts));
}

std::string show(const Solution& solution) {
  std::ostringstream os;
  os << "{";
  for (auto it = solution.begin(); it != solution.end(); ++it) {
    if (it != solution.begin()) os << ",";
    os << *it;
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

bool static_scoring_goldens(std::string& why) {
  const EventLog log = recorded_log();

  StanceMatrix expect;
  expect.set(1, 1, Vote::Up);
  expect.set(1, 2, Vote::Up);
  expect.set(1, 3, Vote::Up);
  expect.set(1, 4, Vote::Up);
  expect.set(2, 1, Vote::Up);
  expect.set(2, 3, Vote::Up);
  expect.set(3, 1, Vote::Up);
  expect.set(3, 3, Vote::Down);
  expect.set(3, 4, Vote::Up);
  expect.set(4, 1, Vote::Down);
  expect.set(4, 3, Vote::Down);
  expect.set(4, 4, Vote::Up);
  expect.set(5, 1, Vote::Down);
  expect.set(5, 4, Vote::Down);
  if (!(stance_of(log) == expect)) {
    why = "stance matrix mismatch";
    return false;
  }

  const Instance instance = Instance::from_log(log);
  const std::map<std::string, std::array<double, 4>> scores = {
      {"APS", {0.60, 1.00, 0.50, 0.75}},
      {"RAPS", {0.52, 1.00, 0.47, 0.65}},
  };
  for (const auto& [kernel, expected] : scores) {
    const StaticKernel k = kernel == "APS" ? StaticKernel::aps() : StaticKernel::raps();
    for (ParagraphId p = 1; p <= 4; ++p) {
      const double got = static_score(k, p, instance, WeightMode::EverVoted);
      if (std::abs(got - expected[p - 1]) > 0.005) {
        std::ostringstream os;
        os << kernel << "(p" << p << ") = " << got << ", expected " << expected[p - 1];
        why = os.str();
        return false;
      }
    }
  }

  const std::vector<std::pair<StaticKernel, Solution>> documents = {
      {StaticKernel::aps(), {1, 2, 3, 4}},
      {StaticKernel::raps(), {1, 2, 4}},
      {StaticKernel::rams(0.25), {1, 4}},
      {StaticKernel::rams(0.75), {}},
  };
  for (const auto& [kernel, expected] : documents) {
    RuleSpec rule;
    rule.kernel = kernel;
    rule.threshold = 0.5;
    rule.weight_mode = WeightMode::EverVoted;
    const Solution got = ccr_solution(rule, instance);
    if (got != expected) {
      why = kernel.to_string() + "@0.5 gave " + show(got) + ", expected " + show(expected);
      return false;
    }
  }
  return true;
}

bool smoothing_golden(std::string& why) {
  const double value = f_exp(0.60, 16.0, 0.1);
  if (std::abs(value - 0.316) > 0.001) {
    why = "f_exp(0.60, 16, 0.1) = " + std::to_string(value);
    return false;
  }
  const RuleSpec rule = RuleSpec::parse("APS|SMOOTH:NUM_EVENTS:0.1|0.5|EVER_VOTED");
  const EventLog log = recorded_log();
  if (std::abs(dynamic_score(rule, 1, log) - value) > 1e-12) {
    why = "smoothed score of p1 disagrees with f_exp";
    return false;
  }
  if (ccr_solution(rule, log).count(1) != 0) {
    why = "p1 survived the smoothed threshold";
    return false;
  }
  return true;
}

bool rm_matches_oracle(std::string& why) {
  Rng rng(make_rng(0x5eed0001));
  for (std::size_t i = 0; i < 1000; ++i) {
    const Instance instance = random_instance(rng);
    for (WeightMode mode : {WeightMode::CurrentStance, WeightMode::EverVoted}) {
      const Solution rm = rm_solution(instance, mode);
      const std::vector<Solution> best = swm_oracle(instance, mode);
      const double got = satisfaction(instance, rm, mode).community;
      const double want = satisfaction(instance, best.front(), mode).community;
      if (std::abs(got - want) > 1e-9) {
        std::ostringstream os;
        os << "case " << i << ": rm welfare " << got << " < oracle " << want;
        why = os.str();
        return false;
      }
    }
  }
  return true;
}

bool flip_extensions_work(std::string& why) {
  Rng rng(make_rng(0x5eed0002));
  std::size_t done = 0;
  while (done < 200) {
    const Instance instance = random_instance(rng);
    if (instance.log().empty()) continue;
    ++done;
    for (WeightMode mode : {WeightMode::EverVoted, WeightMode::CurrentStance}) {
      const Tally tally = tally_of(instance, mode);
      for (ParagraphId p : rm_solution(instance, mode)) {
        const EventLog push = destabilizing_extension(instance, p, mode);
        if (push.size() != static_cast<std::size_t>(tally.at(p).plus) + 1) {
          why = "extension size is not p+ + 1";
          return false;
        }
        if (rm_solution(instance.extended(push), mode).count(p) != 0) {
          std::ostringstream os;
          os << "case " << done << ": paragraph " << p << " survived " << push.size()
             << " fresh downvotes";
          why = os.str();
          return false;
        }
      }
    }
  }
  return true;
}

bool undo_rebases_history(std::string& why) {
  Rng rng(make_rng(0x5eed0003));
  RandomLogOptions opts;
  opts.max_events = 30;
  std::size_t done = 0;
  while (done < 200) {
    const std::size_t n = 2 + uniform_index(rng, 5);
    std::set<AgentId> agents;
    for (std::size_t a = 1; a <= n; ++a) agents.insert(static_cast<AgentId>(a));
    const EventLog first = random_log(rng, n, opts);
    const EventLog second = random_log(rng, n, opts);
    if (second.empty()) continue;
    ++done;

    EventLog joined = first;
    const StanceMatrix first_stance = stance_of(first);
    for (const auto& [agent, row] : first_stance.rows()) {
      for (const auto& [paragraph, value] : row) {
        (void)value;
        joined.append(agent, paragraph, Vote::Abstain);
      }
    }
    joined.append_all(second);

    if (!(stance_of(joined) == stance_of(second))) {
      why = "stances differ after the undo splice (case " + std::to_string(done) + ")";
      return false;
    }
    const Instance with_history(agents, joined);
    const Instance fresh(agents, second);
    for (RuleSpec rule : build_rule_grid(static_grid())) {
      rule.weight_mode = WeightMode::CurrentStance;
      const Solution a = ccr_solution(rule, with_history);
      const Solution b = ccr_solution(rule, fresh);
      if (a != b) {
        why = rule.kernel.to_string() + " split: " + show(a) + " vs " + show(b);
        return false;
      }
    }
  }
  return true;
}

bool sentinel_versatile_and_stable(std::string& why) {
  Rng rng(make_rng(0x5eed0004));
  for (std::size_t i = 0; i < 100; ++i) {
    Solution target;
    const std::size_t want = 1 + uniform_index(rng, 6);
    while (target.size() < want) {
      target.insert(static_cast<ParagraphId>(1 + uniform_index(rng, 8)));
    }
    std::vector<Event> events;
    std::uint32_t seq = 1;
    for (ParagraphId p : target) events.push_back({seq++, 1, p, Vote::Up});
    const EventLog proposals{events};
    const ParagraphId sentinel = proposals.next_paragraph();
    const Solution realized = sentinel_rule(Instance::from_log(proposals), sentinel);
    if (realized != target) {
      why = "target " + show(target) + " realized as " + show(realized);
      return false;
    }

    // freeze, then throw up to 200 further events at the rule
    EventLog log = random_instance(rng).log();
    const ParagraphId stop = log.next_paragraph();
    log.append(1, stop, Vote::Up);
    log.append(1, stop, Vote::Abstain);
    const Solution frozen = sentinel_rule(Instance::from_log(log), stop);
    RandomLogOptions tail;
    tail.max_events = 200;
    const EventLog extended = log + random_log(rng, 6, tail);
    const Solution later = sentinel_rule(Instance::from_log(extended), stop);
    if (later != frozen) {
      why = "post-freeze drift: " + show(frozen) + " -> " + show(later);
      return false;
    }
  }
  return true;
}

bool smoothing_shape_grid(std::string& why) {
  const double step = 0.05;
  for (int xi = 0; xi <= 20; ++xi) {
    const double x = xi * step;
    for (int t = 0; t <= 200; ++t) {
      for (int ai = 0; ai <= 20; ++ai) {
        const double alpha = ai * step;
        const double v = f_exp(x, t, alpha);
        std::string broke;
        if (x > 0.0 && v <= 0.0) broke = "positivity";
        if (broke.empty() && t < 200 && f_exp(x, t + 1, alpha) > v + 1e-12)
          broke = "monotonicity in t";
        if (broke.empty() && ai < 20 && f_exp(x, t, alpha + step) > v + 1e-12)
          broke = "monotonicity in alpha";
        if (broke.empty() && xi < 20 && f_exp(x + step, t, alpha) < v - 1e-12)
          broke = "monotonicity in x";
        if (broke.empty()) continue;
        std::ostringstream os;
        os << broke << " broken at x=" << x << " t=" << t << " alpha=" << alpha;
        why = os.str();
        return false;
      }
    }
  }
  return true;
}

bool harsh_freezes_updates(std::string& why) {
  const std::vector<StaticKernel> kernels = paper_grid().kernels;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const StaticKernel& kernel : kernels) {
      for (std::uint32_t t : {0u, 50u, 100u, 150u}) {
        RuleSpec rule;
        rule.kernel = kernel;
        rule.dynamizer = Dynamizer::harsh(DynamicParam::NumEvents, t);
        UnstructuredPopulation population(20);
        SimConfig config;
        config.n_events = 300;
        const RunResult run = run_simulation(config, population, rule,
                                             derive_run_seed(seed, rule.to_string(), 0));
        for (std::size_t u : run.trajectory.update_indices) {
          if (u > t) {
            std::ostringstream os;
            os << rule.to_string() << " seed " << seed << ": update at event " << u
               << " after cutoff " << t;
            why = os.str();
            return false;
          }
        }
        const double floor = (300.0 - t) / 300.0;
        if (stability_metric(run.trajectory) < floor - 1e-12) {
          std::ostringstream os;
          os << rule.to_string() << " seed " << seed << ": stability "
             << stability_metric(run.trajectory) << " below " << floor;
          why = os.str();
          return false;
        }
      }
    }
  }
  return true;
}

double family_mean(const std::vector<MetricPoint>& points,
                   const std::map<std::string, Dynamizer::Kind>& families,
                   Dynamizer::Kind kind, double MetricPoint::*field) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const MetricPoint& point : points) {
    if (families.at(point.rule) != kind) continue;
    sum += point.*field;
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

bool family_orderings_hold(std::string& why) {
  const std::vector<RuleSpec> rules = build_rule_grid(paper_grid());
  std::map<std::string, Dynamizer::Kind> families;
  for (const RuleSpec& rule : rules) families[rule.to_string()] = rule.dynamizer.kind;

  int stability_ok = 0;
  int satisfaction_ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SimConfig config;
    config.n_events = 300;
    config.repetitions = 5;
    config.seed = seed;
    config.jobs = worker_count();
    const SweepOutcome outcome = sweep(
        config, [](std::uint64_t) { return std::make_unique<UnstructuredPopulation>(20); },
        rules);
    if (!outcome.failures.empty()) {
      why = "run failure: " + outcome.failures.front();
      return false;
    }
    const auto mean = [&](Dynamizer::Kind kind, double MetricPoint::*field) {
      return family_mean(outcome.aggregated, families, kind, field);
    };
    const double stab_static = mean(Dynamizer::Kind::None, &MetricPoint::stability);
    const double stab_harsh = mean(Dynamizer::Kind::Harsh, &MetricPoint::stability);
    const double stab_smooth = mean(Dynamizer::Kind::Smooth, &MetricPoint::stability);
    const double sat_static = mean(Dynamizer::Kind::None, &MetricPoint::satisfaction);
    const double sat_harsh = mean(Dynamizer::Kind::Harsh, &MetricPoint::satisfaction);
    const double sat_smooth = mean(Dynamizer::Kind::Smooth, &MetricPoint::satisfaction);
    stability_ok += stab_harsh > stab_smooth && stab_smooth > stab_static;
    satisfaction_ok += sat_static > sat_smooth && sat_smooth > sat_harsh;
  }
  if (stability_ok < 4 || satisfaction_ok < 4) {
    std::ostringstream os;
    os << "stability ordering held in " << stability_ok << "/5 seeds, satisfaction in "
       << satisfaction_ok << "/5";
    why = os.str();
    return false;
  }
  return true;
}

bool population_shape_effects(std::string& why) {
  const std::vector<RuleSpec> rules = build_rule_grid(paper_grid());
  std::set<std::string> static_rules;
  for (const RuleSpec& rule : build_rule_grid(static_grid())) {
    static_rules.insert(rule.to_string());
  }

  const std::vector<IdealPointDistribution> distributions = {
      IdealPointDistribution::uniform(),
      IdealPointDistribution::bimodal(),
      IdealPointDistribution::gaussian(),
  };

  int front_ok = 0;
  int size_ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::map<std::string, double> max_satisfaction;
    std::map<std::string, double> static_size;
    for (const IdealPointDistribution& distribution : distributions) {
      SimConfig config;
      config.n_events = 300;
      config.repetitions = 3;
      config.seed = seed;
      config.jobs = worker_count();
      const auto factory = [&distribution](std::uint64_t run_seed) -> std::unique_ptr<Population> {
        PopulationSpec spec;
        spec.n = 20;
        spec.distribution = distribution;
        spec.interval_width = 0.4;
        spec.seed = mix_seed(run_seed, fnv1a("population"));
        return std::make_unique<EuclideanPopulation>(sample_population(spec));
      };
      const SweepOutcome outcome = sweep(config, factory, rules);
      if (!outcome.failures.empty()) {
        why = "run failure: " + outcome.failures.front();
        return false;
      }
      double best = 0.0;
      for (const MetricPoint& point : outcome.front) {
        best = std::max(best, point.satisfaction);
      }
      max_satisfaction[distribution.name()] = best;
      double sum = 0.0;
      std::size_t count = 0;
      for (const MetricPoint& point : outcome.aggregated) {
        if (static_rules.count(point.rule) == 0) continue;
        sum += point.solution_size;
        ++count;
      }
      static_size[distribution.name()] = sum / static_cast<double>(count);
    }
    front_ok += max_satisfaction["two-peaks"] > max_satisfaction["normal"];
    size_ok += static_size["uniform"] > static_size["two-peaks"] &&
               static_size["two-peaks"] > static_size["normal"];
  }
  if (front_ok < 4 || size_ok < 4) {
    std::ostringstream os;
    os << "front ordering held in " << front_ok << "/5 seeds, size ordering in " << size_ok
       << "/5";
    why = os.str();
    return false;
  }
  return true;
}

bool scripted_replay(std::string& why) {
  const nlohmann::json transcript =
      nlohmann::json::parse(read_text_file(data_file("example5_transcript.json")));
  const RuleSpec rule = RuleSpec::parse(transcript.at("rule").get<std::string>());
  const std::size_t n_agents = transcript.at("agents").get<std::size_t>();
  std::vector<AgentId> schedule;
  std::vector<std::string> responses;
  for (const nlohmann::json& step : transcript.at("steps")) {
    schedule.push_back(step.at("agent").get<AgentId>());
    responses.push_back(step.at("response").get<std::string>());
  }

  Rng rng(make_rng(7));
  const std::vector<AgentProfile> profiles =
      sample_profiles(load_demographics(data_file("demographics_il_2022_sample.csv")), n_agents,
                      SentimentDistribution::uniform(), rng);
  ChatConfig chat;
  chat.max_retries = 0;
  chat.backoff_ms = 0;
  ChatClient client(chat, std::make_shared<ScriptedChatTransport>(responses));
  LlmOptions options;
  options.topic = transcript.at("topic").get<std::string>();
  options.max_reprompts = 0;
  LlmPopulation population(profiles, load_corpus(data_file("climate_corpus.json")),
                           std::move(client), options);

  SimConfig config;
  config.n_events = schedule.size();
  const RunResult run = run_simulation(config, population, rule, 1, 0, &schedule);

  const Solution expected = {1, 3};
  if (run.trajectory.last() != expected) {
    why = "final document " + show(run.trajectory.last()) + ", expected {1,3}";
    return false;
  }
  const Tally tally = tally_of(run.instance, WeightMode::EverVoted);
  if (tally.at(1).plus != 12 || tally.at(1).minus != 5 || tally.at(2).plus != 5 ||
      tally.at(2).minus != 4 || tally.at(3).plus != 3 || tally.at(3).minus != 0) {
    why = "replayed tallies drifted from the recorded ones";
    return false;
  }
  const double p2 = static_score(StaticKernel::aps(), 2, run.instance, WeightMode::EverVoted);
  if (std::abs(p2 - 5.0 / 9.0) > 1e-12) {
    why = "APS(p2) = " + std::to_string(p2) + ", expected 5/9";
    return false;
  }
  return true;
}

bool prompt_round_trip(std::string& why) {
  AgentProfile profile;
  profile.agent_id = 2;
  profile.sex = "female";
  profile.age_group = "30-34";
  profile.education_level = "ISCED 2011, level 3 - upper secondary education";
  profile.sentiment_score = 0.05;
  profile.profile_text =
      "You are a 30-34 years old female with ISCED 2011, level 3 - upper secondary education";

  const std::string system_text = render_system_prompt(profile, "Climate change policy");
  if (system_text.find("0.05 (active resistance)") == std::string::npos ||
      system_text.find("complete opposition to in-favor action") == std::string::npos) {
    why = "system prompt lost the sentiment position";
    return false;
  }

  AgentView view;
  view.next_id = 2;
  ParagraphInfo p1;
  p1.id = 1;
  p1.text =
      "Implement community gardens in urban areas to promote local food production and "
      "biodiversity.";
  view.paragraphs.push_back(p1);
  view.own = {{1, Vote::Down}};
  view.document = {1};
  view.tally.paragraphs[1] = ParagraphTally{12, 5, 0.0, 0.0};

  const std::vector<ProposalExample> shots = {
      {"Health", 0.5,
       "Consider both traditional health metrics and climate-related health impacts in program "
       "planning.",
       "Balances conventional and climate-related health considerations equally"},
      {"Building", 0.5,
       "Maintain current industry-standard energy codes for all new municipal buildings.",
       "Meets minimum requirements without exceeding them"},
      {"Land Use", 0.5,
       "Consider both compact and traditional development patterns equally in zoning decisions.",
       "Balances different development approaches without preference"},
  };
  const std::string prompt = render_decision_prompt(view, shots, default_action_hint(true));
  const std::string row =
      "{'paragraph_id': 1, 'text': 'Implement community gardens in urban areas to promote local "
      "food production and biodiversity.', 'votes_plus': 12, 'votes_minus': 5, 'own_vote': "
      "'-1', 'In document': 'yes'}";
  if (prompt.find(row) == std::string::npos) {
    why = "decision prompt lost the state row";
    return false;
  }

  const std::string canned =
      "DECISION: PROPOSE\n"
      "PARAGRAPH ID: 2\n"
      "ACTION DETAILS: Maintain current agricultural practices without promoting new "
      "sustainability initiatives\n"
      "VOTE: UPVOTE\n"
      "REASONING: This aligns with my position against new environmental actions and supports "
      "traditional practices.";
  const ParsedDecision parsed = parse_decision(canned);
  if (parsed.decision != ParsedDecision::Kind::Propose || parsed.paragraph_id != 2 ||
      parsed.vote != Vote::Up) {
    why = "parse lost the decision fields";
    return false;
  }
  if (parsed.action_text !=
      "Maintain current agricultural practices without promoting new sustainability "
      "initiatives") {
    why = "action details not byte-exact";
    return false;
  }
  if (parsed.reasoning !=
      "This aligns with my position against new environmental actions and supports traditional "
      "practices.") {
    why = "reasoning not byte-exact";
    return false;
  }

  const AgentAction action = validate_action(parsed, view.own, {1});
  if (action.kind != AgentAction::Kind::Propose || action.paragraph != 2 ||
      action.value != Vote::Up || action.text != parsed.action_text) {
    why = "validated action drifted from the parsed decision";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  run_criterion("static scoring goldens on the recorded log", 1.0, static_scoring_goldens);
  run_criterion("exponential smoothing golden value", 1.0, smoothing_golden);
  run_criterion("relative majority equals the exhaustive welfare oracle", 60.0,
                rm_matches_oracle);
  run_criterion("flip extensions dislodge included paragraphs", 30.0, flip_extensions_work);
  run_criterion("abstention undo rebases histories", 30.0, undo_rebases_history);
  run_criterion("sentinel rule is versatile and freezes", 10.0, sentinel_versatile_and_stable);
  run_criterion("smoothing monotonicity grid", 5.0, smoothing_shape_grid);
  run_criterion("harsh cutoffs stop document updates", 30.0, harsh_freezes_updates);
  run_criterion("rule family orderings on unstructured runs", 600.0, family_orderings_hold);
  run_criterion("population shape drives satisfaction and document size", 900.0,
                population_shape_effects);
  run_criterion("scripted gateway replay reaches the recorded document", 5.0, scripted_replay);
  run_criterion("prompt round trip recovers the recorded decision", 1.0, prompt_round_trip);

  std::cout << (12 - g_failures) << " of 12 criteria passed\n";
  return g_failures == 0 ? 0 : 1;
}
