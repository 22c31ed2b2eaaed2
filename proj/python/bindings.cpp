#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "ccr/io.hpp"
#include "ccr/populations.hpp"
#include "ccr/rng.hpp"
#include "ccr/rules.hpp"
#include "ccr/scheduler.hpp"
#include "ccr/stance.hpp"
#include "ccr/welfare.hpp"

namespace py = pybind11;
using namespace ccr;

namespace {

std::unique_ptr<Population> build_population(const std::string& kind, std::size_t agents,
                                             std::uint64_t run_seed) {
  if (kind == "unstructured") return std::make_unique<UnstructuredPopulation>(agents);
  if (kind.rfind("euclidean", 0) == 0) {
    PopulationSpec spec;
    spec.n = agents;
    spec.seed = mix_seed(run_seed, fnv1a("population"));
    if (kind.size() > 9) {
      const std::string name = kind.substr(10);
      if (kind[9] != ':' || name.empty()) throw ConfigError("malformed population '" + kind + "'");
      if (name == "uniform") {
        spec.distribution = IdealPointDistribution::uniform();
      } else if (name == "normal" || name == "gaussian") {
        spec.distribution = IdealPointDistribution::gaussian();
      } else if (name == "two-peaks" || name == "bimodal") {
        spec.distribution = IdealPointDistribution::bimodal();
      } else {
        throw ConfigError("unknown distribution '" + name + "'");
      }
    }
    return std::make_unique<EuclideanPopulation>(sample_population(spec));
  }
  throw ConfigError("unknown population '" + kind + "' (use unstructured or euclidean[:dist])");
}

py::dict report_dict(const SatisfactionReport& report) {
  py::dict out;
  out["per_agent"] = report.per_agent;
  out["community"] = report.community;
  out["normalized"] = report.normalized;
  return out;
}

py::dict point_dict(const MetricPoint& point) {
  py::dict out;
  out["rule"] = point.rule;
  out["repetition"] = point.repetition;
  out["events"] = point.events;
  out["satisfaction"] = point.satisfaction;
  out["stability"] = point.stability;
  out["solution_size"] = point.solution_size;
  return out;
}

Instance instance_over(const EventLog& log, std::optional<std::size_t> community) {
  if (!community) return Instance::from_log(log);
  std::set<AgentId> agents = log.agents();
  for (std::size_t a = 1; a <= *community; ++a) agents.insert(static_cast<AgentId>(a));
  return Instance(agents, log);
}

}  // namespace

PYBIND11_MODULE(_ccrsim, m) {
  m.doc() = "consensus-conditioned rules over append-only vote logs";

  py::register_exception<Error>(m, "CcrError", PyExc_RuntimeError);

  py::class_<EventLog>(m, "EventLog", "Ordered vote events; the first event on a paragraph "
                                      "must be an approval.")
      .def(py::init<>())
      .def(
          "append",
          [](EventLog& log, AgentId agent, ParagraphId paragraph, int value) {
            log.append(agent, paragraph, vote_from_int(value));
          },
          py::arg("agent"), py::arg("paragraph"), py::arg("value"))
      .def("__len__", &EventLog::size)
      .def("prefix", &EventLog::prefix, py::arg("n"))
      .def("paragraphs", [](const EventLog& log) { return log.paragraphs(); })
      .def("agents", [](const EventLog& log) { return log.agents(); })
      .def("events", [](const EventLog& log) {
        std::vector<std::tuple<AgentId, ParagraphId, int>> out;
        out.reserve(log.size());
        for (const Event& e : log) out.emplace_back(e.agent, e.paragraph, to_int(e.value));
        return out;
      });

  m.def(
      "load_event_log", [](const std::filesystem::path& path) { return load_event_log(path); },
      py::arg("path"));
  m.def(
      "save_event_log",
      [](const EventLog& log, const std::filesystem::path& path) { save_event_log(path, log); },
      py::arg("log"), py::arg("path"));

  m.def(
      "stance",
      [](const EventLog& log) {
        std::map<AgentId, std::map<ParagraphId, int>> out;
        const StanceMatrix stance = stance_of(log);
        for (const auto& [agent, row] : stance.rows()) {
          for (const auto& [paragraph, value] : row) out[agent][paragraph] = to_int(value);
        }
        return out;
      },
      py::arg("log"), "Nonzero final stances as {agent: {paragraph: value}}.");

  m.def(
      "tally",
      [](const EventLog& log, const std::string& mode) {
        py::dict out;
        const Tally tally = tally_of(log, weight_mode_from_name(mode));
        for (const auto& [paragraph, t] : tally.paragraphs) {
          py::dict row;
          row["plus"] = t.plus;
          row["minus"] = t.minus;
          row["plus_rel"] = t.plus_rel;
          row["minus_rel"] = t.minus_rel;
          out[py::cast(paragraph)] = row;
        }
        return out;
      },
      py::arg("log"), py::arg("mode") = "EVER_VOTED");

  m.def(
      "score",
      [](const std::string& rule, ParagraphId paragraph, const EventLog& log) {
        return dynamic_score(RuleSpec::parse(rule), paragraph, log);
      },
      py::arg("rule"), py::arg("paragraph"), py::arg("log"));

  m.def("f_exp", &f_exp, py::arg("x"), py::arg("t"), py::arg("alpha"));

  m.def(
      "solution",
      [](const std::string& rule, const EventLog& log) {
        return ccr_solution(RuleSpec::parse(rule), log);
      },
      py::arg("rule"), py::arg("log"), "Paragraphs whose dynamized score meets the threshold.");

  m.def(
      "rm_solution",
      [](const EventLog& log, const std::string& mode, bool include_ties) {
        return rm_solution(Instance::from_log(log), weight_mode_from_name(mode),
                           include_ties ? TieBreak::IncludeOnTie : TieBreak::ExcludeOnTie);
      },
      py::arg("log"), py::arg("mode") = "EVER_VOTED", py::arg("include_ties") = false);

  m.def(
      "trajectory",
      [](const std::string& rule, const EventLog& log, std::optional<std::size_t> community) {
        const Trajectory t = ccr_trajectory(RuleSpec::parse(rule), log, community);
        py::dict out;
        out["solutions"] = t.prefix_solutions;
        out["update_indices"] = t.update_indices;
        out["stability"] = log.empty() ? 1.0 : stability_metric(t);
        return out;
      },
      py::arg("rule"), py::arg("log"), py::arg("community") = std::nullopt,
      "Per-prefix solutions, 1-based update indices, and the update-based stability.");

  m.def(
      "satisfaction",
      [](const EventLog& log, const std::set<ParagraphId>& solution, const std::string& mode,
         std::optional<std::size_t> community) {
        return report_dict(
            satisfaction(instance_over(log, community), solution, weight_mode_from_name(mode)));
      },
      py::arg("log"), py::arg("solution"), py::arg("mode") = "EVER_VOTED",
      py::arg("community") = std::nullopt);

  m.def(
      "pareto_front",
      [](const std::vector<std::tuple<std::string, double, double>>& points) {
        std::vector<MetricPoint> metric;
        metric.reserve(points.size());
        for (const auto& [rule, sat, stab] : points) {
          MetricPoint p;
          p.rule = rule;
          p.satisfaction = sat;
          p.stability = stab;
          metric.push_back(std::move(p));
        }
        std::vector<std::string> out;
        for (const MetricPoint& p : pareto_front(metric)) out.push_back(p.rule);
        return out;
      },
      py::arg("points"),
      "Rules not dominated in (satisfaction, stability); points are (rule, sat, stab).");

  m.def(
      "simulate",
      [](const std::string& rule, std::size_t events, std::uint64_t seed, std::size_t agents,
         const std::string& population, std::uint32_t repetition, std::size_t quiet_events) {
        const RuleSpec spec = RuleSpec::parse(rule);
        const std::uint64_t run_seed = derive_run_seed(seed, spec.to_string(), repetition);
        const auto pop = build_population(population, agents, run_seed);
        SimConfig config;
        config.n_events = events;
        config.quiet_events = quiet_events;
        const RunResult run = run_simulation(config, *pop, spec, run_seed, repetition);

        py::dict out;
        out["rule"] = run.rule;
        out["seed"] = run.seed;
        py::list raw;
        for (const Event& e : run.instance.log()) {
          raw.append(py::make_tuple(e.agent, e.paragraph, to_int(e.value)));
        }
        out["events"] = raw;
        out["document"] = run.trajectory.last();
        out["converged"] = run.converged;
        out["skipped"] = run.skipped;
        out["final"] = point_dict(run.final_point);
        py::list series;
        for (const MetricPoint& point : run.series) series.append(point_dict(point));
        out["series"] = series;
        return out;
      },
      py::arg("rule") = "RAPS||0.5|EVER_VOTED", py::arg("events") = 300, py::arg("seed") = 0,
      py::arg("agents") = 20, py::arg("population") = "unstructured", py::arg("repetition") = 0,
      py::arg("quiet_events") = 0,
      "One seeded run with a built-in population; returns the log, document, and metrics.");

  m.def("rule_grid", []() {
    std::vector<std::string> out;
    for (const RuleSpec& rule : build_rule_grid(paper_grid())) out.push_back(rule.to_string());
    return out;
  });
}
