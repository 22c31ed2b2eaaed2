#include "ccr/scheduler.hpp"

#include <atomic>
#include <optional>
#include <thread>
#include <utility>

namespace ccr {

namespace {

std::string annotate(const char* what, std::size_t iteration) {
  return std::string(what) + " (iteration " + std::to_string(iteration) + ")";
}

}  // namespace

AgentView make_agent_view(AgentId agent, const EventLog& log, const IncrementalTally& inc,
                          const TrajectoryBuilder& builder,
                          const std::map<ParagraphId, double>& positions,
                          const std::map<ParagraphId, std::string>& texts) {
  AgentView view;
  view.tally = inc.tally();
  const auto& rows = inc.stance().rows();
  if (auto it = rows.find(agent); it != rows.end()) view.own = it->second;
  if (log.size() > 0) view.document = builder.current();
  view.paragraphs.reserve(inc.paragraphs().size());
  for (ParagraphId p : inc.paragraphs()) {
    ParagraphInfo info;
    info.id = p;
    if (auto it = positions.find(p); it != positions.end()) info.position = it->second;
    if (auto it = texts.find(p); it != texts.end()) info.text = it->second;
    view.paragraphs.push_back(std::move(info));
  }
  view.next_id = log.next_paragraph();
  return view;
}

RunResult run_simulation(const SimConfig& config, Population& population, const RuleSpec& rule,
                         std::uint64_t run_seed, std::uint32_t repetition,
                         const std::vector<AgentId>* agent_schedule) {
  if (config.n_events == 0) throw ConfigError("n_events must be at least 1");
  if (population.size() == 0) throw ConfigError("population is empty");
  if (agent_schedule != nullptr && agent_schedule->size() < config.n_events)
    throw ConfigError("agent schedule has " + std::to_string(agent_schedule->size()) +
                      " entries, need " + std::to_string(config.n_events));

  RunResult result;
  result.rule = rule.to_string();
  result.repetition = repetition;
  result.seed = run_seed;

  Rng rng(run_seed);
  EventLog log;
  IncrementalTally inc(rule.weight_mode);
  TrajectoryBuilder builder(rule, population.size());
  std::set<AgentId> community;
  for (std::size_t a = 1; a <= population.size(); ++a)
    community.insert(static_cast<AgentId>(a));

  std::size_t iteration = 0;
  std::size_t consecutive_skips = 0;
  std::size_t quiet = 0;
  while (log.size() < config.n_events) {
    ++iteration;
    const AgentId agent =
        agent_schedule != nullptr
            ? (*agent_schedule)[log.size()]
            : static_cast<AgentId>(1 + uniform_index(rng, population.size()));
    const AgentView view = make_agent_view(agent, log, inc, builder, result.positions,
                                           result.texts);

    AgentAction action;
    try {
      action = population.decide(agent, view, rng);
    } catch (const SkippedIteration&) {
      ++result.skipped;
      if (++consecutive_skips > config.max_skips)
        throw TransportError(annotate("run aborted: skipped-iteration cap reached", iteration));
      continue;
    } catch (const AuthError& err) {
      throw AuthError(annotate(err.what(), iteration));
    } catch (const RateLimited& err) {
      throw RateLimited(annotate(err.what(), iteration));
    } catch (const TransportError& err) {
      throw TransportError(annotate(err.what(), iteration));
    }
    consecutive_skips = 0;

    const std::size_t updates_before = builder.update_count();
    if (action.kind == AgentAction::Kind::Propose) {
      const ParagraphId id = log.next_paragraph();
      log.append(agent, id, Vote::Up);
      if (population.positional()) result.positions[id] = action.position;
      if (population.textual()) result.texts[id] = action.text;
    } else {
      log.append(agent, action.paragraph, action.value);
    }
    const Event& event = log.events().back();
    inc.apply(event);
    builder.push(event);

    MetricPoint point;
    point.rule = result.rule;
    point.repetition = repetition;
    point.events = static_cast<double>(log.size());
    point.satisfaction =
        satisfaction(Instance(community, log), builder.current(), rule.weight_mode).normalized;
    point.stability = static_cast<double>(log.size() - builder.update_count()) /
                      static_cast<double>(log.size());
    point.solution_size = static_cast<double>(builder.current().size());
    result.series.push_back(std::move(point));

    quiet = builder.update_count() == updates_before ? quiet + 1 : 0;
    if (config.quiet_events > 0 && quiet >= config.quiet_events) {
      result.converged = true;
      break;
    }
  }

  result.final_point = result.series.back();
  result.instance = Instance(std::move(community), std::move(log));
  result.trajectory = builder.take();
  if (auto* llm = dynamic_cast<LlmPopulation*>(&population)) result.audit = llm->take_audit();
  return result;
}

std::uint64_t derive_run_seed(std::uint64_t seed, const std::string& rule_id,
                              std::uint32_t repetition) {
  return mix_seed(mix_seed(seed, fnv1a(rule_id)), repetition);
}

SweepOutcome sweep(const SimConfig& config, const PopulationFactory& make_population,
                   const std::vector<RuleSpec>& rules) {
  if (rules.empty()) throw ConfigError("sweep needs at least one rule");
  if (config.repetitions == 0) throw ConfigError("repetitions must be at least 1");

  struct Task {
    std::size_t rule_index;
    std::uint32_t repetition;
  };
  std::vector<Task> tasks;
  tasks.reserve(rules.size() * config.repetitions);
  for (std::size_t r = 0; r < rules.size(); ++r)
    for (std::uint32_t k = 0; k < config.repetitions; ++k) tasks.push_back({r, k});

  std::vector<std::optional<MetricPoint>> finals(tasks.size());
  std::vector<std::string> failures(tasks.size());

  auto execute = [&](std::size_t slot) {
    const Task& task = tasks[slot];
    const RuleSpec& rule = rules[task.rule_index];
    const std::uint64_t run_seed = derive_run_seed(config.seed, rule.to_string(), task.repetition);
    try {
      std::unique_ptr<Population> population = make_population(run_seed);
      if (!population) throw ConfigError("population factory returned null");
      const RunResult run =
          run_simulation(config, *population, rule, run_seed, task.repetition);
      finals[slot] = run.final_point;
    } catch (const std::exception& err) {
      failures[slot] = "rule " + rule.to_string() + " repetition " +
                       std::to_string(task.repetition) + ": " + err.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, tasks.size()));
  if (jobs == 1) {
    for (std::size_t slot = 0; slot < tasks.size(); ++slot) execute(slot);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j)
      workers.emplace_back([&] {
        for (std::size_t slot = next.fetch_add(1); slot < tasks.size();
             slot = next.fetch_add(1))
          execute(slot);
      });
    for (std::thread& worker : workers) worker.join();
  }

  SweepOutcome outcome;
  for (std::size_t slot = 0; slot < tasks.size(); ++slot) {
    if (finals[slot])
      outcome.run_points.push_back(*finals[slot]);
    else
      outcome.failures.push_back(failures[slot]);
  }

  for (std::size_t r = 0; r < rules.size(); ++r) {
    MetricPoint mean;
    mean.rule = rules[r].to_string();
    std::uint32_t completed = 0;
    for (std::uint32_t k = 0; k < config.repetitions; ++k) {
      const auto& point = finals[r * config.repetitions + k];
      if (!point) continue;
      ++completed;
      mean.events += point->events;
      mean.satisfaction += point->satisfaction;
      mean.stability += point->stability;
      mean.solution_size += point->solution_size;
    }
    if (completed == 0) continue;
    mean.repetition = completed;
    mean.events /= completed;
    mean.satisfaction /= completed;
    mean.stability /= completed;
    mean.solution_size /= completed;
    outcome.aggregated.push_back(std::move(mean));
  }

  outcome.front = pareto_front(outcome.aggregated);
  return outcome;
}

}  // namespace ccr
