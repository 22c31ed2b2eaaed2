#include "ccr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccr/datasets.hpp"
#include "ccr/format.hpp"
#include "ccr/io.hpp"
#include "ccr/scheduler.hpp"
#include "ccr/verify.hpp"

namespace fs = std::filesystem;

namespace ccr {

namespace {

struct PopulationOptions {
  std::string kind = "unstructured";  // unstructured | euclidean[:<dist>] | llm
  std::size_t agents = 20;
  double interval_width = 0.4;
  double r_min = 0.2;
  // llm
  std::string demographics = "data/demographics_il_2022_sample.csv";
  std::string corpus = "data/climate_corpus.json";
  std::string topic = "Climate change policy";
  std::string sentiment = "uniform";
  bool mock = false;
  int max_reprompts = 2;
  ChatConfig chat;
};

struct SimulateOptions {
  std::string rule = "RAPS||0.5|EVER_VOTED";
  std::size_t events = 300;
  std::uint64_t seed = 0;
  std::uint32_t repetition = 0;
  std::size_t quiet_events = 0;
  std::size_t max_skips = 100;
  std::string out;
  std::string script;  // scripted LLM transcript (json)
  PopulationOptions pop;
};

struct SweepOptions {
  std::vector<std::string> rules;  // explicit rule strings
  std::string grid = "paper";     // paper | static | none
  std::size_t events = 300;
  std::uint32_t repetitions = 5;
  std::uint64_t seed = 0;
  std::size_t quiet_events = 0;
  std::size_t max_skips = 100;
  std::size_t jobs = 1;
  std::string out = "sweep-out";
  PopulationOptions pop;
};

struct ParetoOptions {
  std::vector<std::string> inputs;
  std::string out;
};

struct VerifyCmdOptions {
  std::size_t cases = 200;
  std::uint64_t seed = 2026;
  std::string only;
};

struct ReplayOptions {
  std::string log_path;
  std::string rule = "RAPS||0.5|EVER_VOTED";
  std::size_t agents = 0;  // community size override, 0 = agents in the log
  std::uint32_t repetition = 0;
  std::string out;
};

struct Transcript {
  std::string topic;
  std::string rule;
  std::size_t agents = 0;
  std::vector<AgentId> schedule;
  std::vector<std::string> responses;
};

Transcript load_transcript(const fs::path& path) {
  const nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw SchemaError("transcript " + path.string() + " is not a JSON object");
  Transcript t;
  t.topic = j.value("topic", std::string{});
  t.rule = j.value("rule", std::string{});
  t.agents = j.value("agents", std::size_t{0});
  if (!j.contains("steps") || !j["steps"].is_array() || j["steps"].empty())
    throw SchemaError("transcript needs a nonempty steps array");
  for (const auto& step : j["steps"]) {
    if (!step.is_object() || !step.contains("agent") || !step.contains("response"))
      throw SchemaError("each transcript step needs agent and response");
    t.schedule.push_back(step["agent"].get<AgentId>());
    t.responses.push_back(step["response"].get<std::string>());
  }
  return t;
}

IdealPointDistribution parse_distribution(const std::string& name) {
  if (name == "uniform") return IdealPointDistribution::uniform();
  if (name == "normal") return IdealPointDistribution::gaussian();
  if (name == "two-peaks") return IdealPointDistribution::bimodal();
  throw UsageError("unknown ideal-point distribution \"" + name +
                   "\" (uniform, normal, two-peaks)");
}

SentimentDistribution parse_sentiment(const std::string& text) {
  if (text == "uniform") return SentimentDistribution::uniform();
  if (text.rfind("normal", 0) == 0) {
    double mu = 0.5;
    double sigma = 0.2;
    if (text.size() > 6) {
      const std::size_t first = text.find(':');
      const std::size_t second = text.find(':', first + 1);
      if (first == std::string::npos || second == std::string::npos)
        throw UsageError("expected normal:<mu>:<sigma>, got \"" + text + "\"");
      mu = parse_double(text.substr(first + 1, second - first - 1));
      sigma = parse_double(text.substr(second + 1));
    }
    return SentimentDistribution::gaussian(mu, sigma);
  }
  throw UsageError("unknown sentiment distribution \"" + text + "\"");
}

std::unique_ptr<Population> make_population(const PopulationOptions& opts,
                                            std::uint64_t run_seed,
                                            const std::vector<std::string>* scripted) {
  const std::uint64_t pop_seed = mix_seed(run_seed, fnv1a("population"));
  if (opts.kind == "unstructured")
    return std::make_unique<UnstructuredPopulation>(opts.agents);
  if (opts.kind.rfind("euclidean", 0) == 0) {
    std::string dist = "uniform";
    if (const std::size_t colon = opts.kind.find(':'); colon != std::string::npos)
      dist = opts.kind.substr(colon + 1);
    PopulationSpec spec;
    spec.n = opts.agents;
    spec.distribution = parse_distribution(dist);
    spec.interval_width = opts.interval_width;
    spec.seed = pop_seed;
    return std::make_unique<EuclideanPopulation>(sample_population(spec), opts.r_min);
  }
  if (opts.kind == "llm") {
    const std::vector<DemographicCell> cells = load_demographics(opts.demographics);
    CorpusFile corpus = load_corpus(opts.corpus);
    Rng rng(pop_seed);
    std::vector<AgentProfile> profiles =
        sample_profiles(cells, opts.agents, parse_sentiment(opts.sentiment), rng);
    ChatClient client = [&] {
      if (scripted != nullptr)
        return ChatClient(opts.chat, std::make_shared<ScriptedChatTransport>(*scripted));
      if (opts.mock) return ChatClient(opts.chat, std::make_shared<MockChatTransport>());
      return ChatClient(opts.chat);
    }();
    LlmOptions llm;
    llm.topic = opts.topic;
    llm.max_reprompts = opts.max_reprompts;
    return std::make_unique<LlmPopulation>(std::move(profiles), std::move(corpus),
                                           std::move(client), llm);
  }
  throw UsageError("unknown population \"" + opts.kind +
                   "\" (unstructured, euclidean[:<dist>], llm)");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  body(out);
  if (!out) throw ConfigError("failed while writing " + path.string());
}

std::string show_solution(const Solution& solution) {
  std::string out = "{";
  for (ParagraphId p : solution) {
    if (out.size() > 1) out += ", ";
    out += std::to_string(p);
  }
  return out + "}";
}

void write_run_artifacts(const fs::path& dir, const RunResult& run, const RuleSpec& rule,
                         const Population& population) {
  ensure_dir(dir);
  write_file(dir / "events.log", [&](std::ostream& o) { write_event_log(o, run.instance.log()); });
  write_file(dir / "metrics.csv", [&](std::ostream& o) { write_points_csv(o, run.series); });
  write_file(dir / "summary.csv",
             [&](std::ostream& o) { write_points_csv(o, {run.final_point}); });

  write_file(dir / "document.csv", [&](std::ostream& o) {
    o << "paragraph,included,score,position,text\n";
    const Solution& document = run.trajectory.last();
    for (ParagraphId p : run.instance.log().paragraphs()) {
      const auto pos = run.positions.find(p);
      const auto txt = run.texts.find(p);
      o << p << "," << (document.count(p) != 0 ? 1 : 0) << ","
        << format_double(dynamic_score(rule, p, run.instance)) << ","
        << (pos != run.positions.end() ? format_double(pos->second) : std::string{}) << ","
        << csv_field(txt != run.texts.end() ? txt->second : std::string{}) << "\n";
    }
  });

  if (const auto* euclidean = dynamic_cast<const EuclideanPopulation*>(&population))
    write_file(dir / "population.csv", [&](std::ostream& o) { euclidean->write_csv(o); });
  if (const auto* llm = dynamic_cast<const LlmPopulation*>(&population)) {
    write_file(dir / "profiles.csv", [&](std::ostream& o) {
      o << "agent,sex,age_group,education,sentiment_score\n";
      for (const AgentProfile& p : llm->profiles())
        o << p.agent_id << "," << csv_field(p.sex) << "," << csv_field(p.age_group) << ","
          << csv_field(p.education_level) << "," << format_double(p.sentiment_score) << "\n";
    });
    write_file(dir / "audit.ndjson", [&](std::ostream& o) {
      for (const AuditRecord& record : run.audit) o << record.to_json() << "\n";
    });
  }
}

void print_run_summary(const RunResult& run) {
  std::cout << "rule: " << run.rule << "\n"
            << "seed: " << run.seed << "\n"
            << "events: " << run.instance.log().size();
  if (run.skipped > 0) std::cout << " (skipped iterations: " << run.skipped << ")";
  if (run.converged) std::cout << " (converged early)";
  std::cout << "\n"
            << "document: " << show_solution(run.trajectory.last()) << "\n"
            << "satisfaction: " << format_double(run.final_point.satisfaction) << "\n"
            << "stability: " << format_double(run.final_point.stability) << "\n"
            << "solution size: " << format_double(run.final_point.solution_size) << "\n";
}

int cmd_simulate(const SimulateOptions& options, bool rule_given) {
  SimulateOptions o = options;
  std::optional<Transcript> transcript;
  if (!o.script.empty()) {
    transcript = load_transcript(o.script);
    o.pop.kind = "llm";
    if (!rule_given && !transcript->rule.empty()) o.rule = transcript->rule;
    if (transcript->agents > 0) o.pop.agents = transcript->agents;
    if (!transcript->topic.empty()) o.pop.topic = transcript->topic;
    o.events = transcript->responses.size();
  }

  const RuleSpec rule = RuleSpec::parse(o.rule);
  SimConfig config;
  config.n_events = o.events;
  config.seed = o.seed;
  config.quiet_events = o.quiet_events;
  config.max_skips = o.max_skips;

  const std::uint64_t run_seed = derive_run_seed(o.seed, rule.to_string(), o.repetition);
  std::unique_ptr<Population> population =
      make_population(o.pop, run_seed, transcript ? &transcript->responses : nullptr);
  const RunResult run = run_simulation(config, *population, rule, run_seed, o.repetition,
                                       transcript ? &transcript->schedule : nullptr);

  if (!o.out.empty()) {
    write_run_artifacts(o.out, run, rule, *population);
    std::cout << "artifacts: " << o.out << "\n";
  }
  print_run_summary(run);
  return 0;
}

std::vector<RuleSpec> resolve_rules(const SweepOptions& o) {
  std::vector<RuleSpec> rules;
  if (o.grid == "paper") {
    rules = build_rule_grid(paper_grid());
  } else if (o.grid == "static") {
    rules = build_rule_grid(static_grid());
  } else if (o.grid != "none") {
    throw UsageError("unknown grid \"" + o.grid + "\" (paper, static, none)");
  }
  for (const std::string& text : o.rules) rules.push_back(RuleSpec::parse(text));
  if (rules.empty()) throw UsageError("no rules selected: pass --grid or --rule");
  return rules;
}

int cmd_sweep(const SweepOptions& o) {
  const std::vector<RuleSpec> rules = resolve_rules(o);
  SimConfig config;
  config.n_events = o.events;
  config.repetitions = o.repetitions;
  config.seed = o.seed;
  config.quiet_events = o.quiet_events;
  config.max_skips = o.max_skips;
  config.jobs = o.jobs;

  const SweepOutcome outcome = sweep(
      config, [&](std::uint64_t run_seed) { return make_population(o.pop, run_seed, nullptr); },
      rules);

  ensure_dir(o.out);
  write_file(fs::path(o.out) / "runs.csv",
             [&](std::ostream& out) { write_points_csv(out, outcome.run_points); });
  write_file(fs::path(o.out) / "aggregated.csv",
             [&](std::ostream& out) { write_points_csv(out, outcome.aggregated); });
  write_file(fs::path(o.out) / "pareto.csv",
             [&](std::ostream& out) { write_pareto_csv(out, outcome.aggregated); });

  for (const std::string& failure : outcome.failures)
    std::cerr << "warning: failed run: " << failure << "\n";
  std::cout << "rules: " << rules.size() << "\n"
            << "completed runs: " << outcome.run_points.size() << " of "
            << rules.size() * o.repetitions << "\n"
            << "pareto front: " << outcome.front.size() << " rules\n"
            << "artifacts: " << o.out << "\n";
  if (outcome.run_points.empty()) throw TransportError("every run failed");
  return 0;
}

int cmd_pareto(const ParetoOptions& o) {
  std::vector<MetricPoint> merged;
  for (const std::string& input : o.inputs) {
    const std::vector<MetricPoint> points = load_points_csv(input);
    merged.insert(merged.end(), points.begin(), points.end());
  }
  if (o.out.empty()) {
    write_pareto_csv(std::cout, merged);
  } else {
    write_file(o.out, [&](std::ostream& out) { write_pareto_csv(out, merged); });
    std::cout << "pareto front written to " << o.out << "\n";
  }
  return 0;
}

int cmd_verify(const VerifyCmdOptions& o) {
  VerifyOptions options;
  options.cases = o.cases;
  options.seed = o.seed;
  options.only = o.only;
  return report_suites(run_property_suites(options), std::cout);
}

int cmd_replay(const ReplayOptions& o) {
  const EventLog log = load_event_log(o.log_path);
  if (log.size() == 0) throw SchemaError("event log " + o.log_path + " is empty");
  const RuleSpec rule = RuleSpec::parse(o.rule);

  std::set<AgentId> community = log.agents();
  if (o.agents > 0)
    for (std::size_t a = 1; a <= o.agents; ++a) community.insert(static_cast<AgentId>(a));
  const Trajectory trajectory = ccr_trajectory(rule, log, community.size());

  std::vector<MetricPoint> series;
  series.reserve(log.size());
  std::size_t updates = 0;
  std::vector<std::size_t>::const_iterator next_update = trajectory.update_indices.begin();
  for (std::size_t m = 1; m <= log.size(); ++m) {
    while (next_update != trajectory.update_indices.end() && *next_update <= m - 1) {
      ++updates;
      ++next_update;
    }
    MetricPoint point;
    point.rule = rule.to_string();
    point.repetition = o.repetition;
    point.events = static_cast<double>(m);
    point.satisfaction = satisfaction(Instance(community, log.prefix(m)),
                                      trajectory.prefix_solutions[m - 1], rule.weight_mode)
                             .normalized;
    point.stability = static_cast<double>(m - updates) / static_cast<double>(m);
    point.solution_size = static_cast<double>(trajectory.prefix_solutions[m - 1].size());
    series.push_back(std::move(point));
  }

  if (!o.out.empty()) {
    ensure_dir(o.out);
    write_file(fs::path(o.out) / "metrics.csv",
               [&](std::ostream& out) { write_points_csv(out, series); });
    write_file(fs::path(o.out) / "summary.csv",
               [&](std::ostream& out) { write_points_csv(out, {series.back()}); });
    std::cout << "artifacts: " << o.out << "\n";
  }
  std::cout << "rule: " << rule.to_string() << "\n"
            << "events: " << log.size() << "\n"
            << "community: " << community.size() << " agents\n"
            << "document: " << show_solution(trajectory.last()) << "\n"
            << "satisfaction: " << format_double(series.back().satisfaction) << "\n"
            << "stability: " << format_double(series.back().stability) << "\n";
  return 0;
}

void add_population_options(CLI::App* cmd, PopulationOptions& pop) {
  cmd->add_option("--population", pop.kind,
                  "unstructured, euclidean:<uniform|normal|two-peaks>, or llm")
      ->capture_default_str();
  cmd->add_option("--agents", pop.agents, "community size")->capture_default_str();
  cmd->add_option("--interval-width", pop.interval_width, "euclidean approval interval width")
      ->capture_default_str();
  cmd->add_option("--r-min", pop.r_min, "euclidean agreeable-fraction threshold")
      ->capture_default_str();
  cmd->add_option("--demographics", pop.demographics, "demographics CSV for llm profiles")
      ->capture_default_str();
  cmd->add_option("--corpus", pop.corpus, "few-shot proposal corpus JSON")
      ->capture_default_str();
  cmd->add_option("--topic", pop.topic, "deliberation topic")->capture_default_str();
  cmd->add_option("--sentiment", pop.sentiment, "profile sentiment draw: uniform or normal[:mu:sigma]")
      ->capture_default_str();
  cmd->add_flag("--mock-llm", pop.mock, "deterministic offline chat gateway");
  cmd->add_option("--max-reprompts", pop.max_reprompts, "re-prompts before skipping an iteration")
      ->capture_default_str();
  cmd->add_option("--base-url", pop.chat.base_url, "chat endpoint base URL")
      ->capture_default_str();
  cmd->add_option("--model", pop.chat.model, "chat model name")->capture_default_str();
  cmd->add_option("--temperature", pop.chat.temperature, "chat sampling temperature")
      ->capture_default_str();
  cmd->add_option("--api-key-env", pop.chat.api_key_env, "environment variable with the API key")
      ->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"collaborative-constitution consensus rule simulator"};
  app.set_config("--config", "", "key=value file mirroring the flags; flags win");
  app.require_subcommand(0, 1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run one deliberation");
  CLI::Option* sim_rule = simulate->add_option("--rule", sim.rule, "rule string")
                              ->capture_default_str();
  simulate->add_option("--events", sim.events, "events to apply")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--repetition", sim.repetition, "repetition index for seed derivation")
      ->capture_default_str();
  simulate->add_option("--quiet-events", sim.quiet_events,
                       "stop after this many consecutive no-update events (0 = off)")
      ->capture_default_str();
  simulate->add_option("--max-skips", sim.max_skips, "consecutive skipped-iteration cap")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "artifact directory");
  simulate->add_option("--llm-script", sim.script, "scripted transcript JSON (forces llm)");
  add_population_options(simulate, sim.pop);

  SweepOptions swp;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "rules x repetitions benchmark");
  sweep_cmd->add_option("--grid", swp.grid, "rule grid: paper (54), static (6), none")
      ->capture_default_str();
  sweep_cmd->add_option("--rule", swp.rules, "extra rule strings (repeatable)");
  sweep_cmd->add_option("--events", swp.events, "events per run")->capture_default_str();
  sweep_cmd->add_option("--repetitions", swp.repetitions, "repetitions per rule")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", swp.seed, "master seed")->capture_default_str();
  sweep_cmd->add_option("--quiet-events", swp.quiet_events,
                        "stop after this many consecutive no-update events (0 = off)")
      ->capture_default_str();
  sweep_cmd->add_option("--max-skips", swp.max_skips, "consecutive skipped-iteration cap")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", swp.jobs, "parallel runs")->capture_default_str();
  sweep_cmd->add_option("--out", swp.out, "artifact directory")->capture_default_str();
  add_population_options(sweep_cmd, swp.pop);

  ParetoOptions par;
  CLI::App* pareto_cmd = app.add_subcommand("pareto", "merge points files, emit the front");
  pareto_cmd->add_option("--input", par.inputs, "metric CSV files")->required();
  pareto_cmd->add_option("--out", par.out, "output CSV (stdout when omitted)");

  VerifyCmdOptions ver;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the property suites");
  verify_cmd->add_option("--cases", ver.cases, "random cases per suite")->capture_default_str();
  verify_cmd->add_option("--seed", ver.seed, "suite seed")->capture_default_str();
  verify_cmd->add_option("--only", ver.only, "substring filter on suite names");

  ReplayOptions rep;
  CLI::App* replay_cmd = app.add_subcommand("replay", "recompute a persisted run");
  replay_cmd->add_option("--log", rep.log_path, "event log file")->required();
  replay_cmd->add_option("--rule", rep.rule, "rule string")->capture_default_str();
  replay_cmd->add_option("--agents", rep.agents,
                         "community size when it exceeds the agents in the log")
      ->capture_default_str();
  replay_cmd->add_option("--repetition", rep.repetition, "repetition tag for the CSV rows")
      ->capture_default_str();
  replay_cmd->add_option("--out", rep.out, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, sim_rule->count() > 0);
    if (sweep_cmd->parsed()) return cmd_sweep(swp);
    if (pareto_cmd->parsed()) return cmd_pareto(par);
    if (verify_cmd->parsed()) return cmd_verify(ver);
    if (replay_cmd->parsed()) return cmd_replay(rep);
    std::cerr << app.help();
    return 1;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const SchemaError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}

}  // namespace ccr
