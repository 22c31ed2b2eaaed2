#include "ccr/rules.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ccr/format.hpp"

namespace ccr {

namespace {

double kernel_score(const StaticKernel& kernel, const ParagraphTally& t,
                    std::size_t community, std::size_t active) {
  double score = 0.0;
  switch (kernel.kind) {
    case KernelKind::Aps: {
      const int total = t.plus + t.minus;
      score = total == 0 ? 0.0 : static_cast<double>(t.plus) / total;
      break;
    }
    case KernelKind::Raps: {
      const double total = t.plus_rel + t.minus_rel;
      score = total == 0.0 ? 0.0 : t.plus_rel / total;
      break;
    }
    case KernelKind::Rams: {
      const double headcount =
          static_cast<double>(kernel.gate == RamsGate::TotalAgents ? community : active);
      // participation gate p+ >= beta*|A|, with slack for decimal betas
      if (static_cast<double>(t.plus) + 1e-9 < kernel.beta * headcount) return 0.0;
      const double total = t.plus_rel + t.minus_rel;
      score = total == 0.0 ? 0.0 : t.plus_rel / total;
      break;
    }
  }
  return std::clamp(score, 0.0, 1.0);
}

std::size_t active_count_if_needed(const StaticKernel& kernel, const StanceMatrix& stance) {
  if (kernel.kind == KernelKind::Rams && kernel.gate == RamsGate::ActiveAgents) {
    return stance.active_agents().size();
  }
  return 0;
}

EventLog slice_prefix(const EventLog& log, std::size_t n) {
  // verbatim slice: derived logs may not satisfy the append growth rule
  std::vector<Event> events(log.events().begin(), log.events().begin() + n);
  return EventLog(std::move(events));
}

/// Rule-relative parameter as seen from the step after `trajectory`: the
/// value over prefixes 1..n-1 of an n-event trajectory.
std::uint64_t lookback_value(const Trajectory& trajectory, DynamicParam param) {
  const std::size_t n = trajectory.events();
  if (param == DynamicParam::SolutionSize) {
    return n >= 2 ? trajectory.prefix_solutions[n - 2].size() : 0;
  }
  std::size_t updates = 0;
  for (std::size_t i : trajectory.update_indices) {
    if (i + 1 < n) ++updates;  // updates among the first n-1 prefixes
  }
  return updates;
}

}  // namespace

StaticKernel StaticKernel::rams(double beta, RamsGate gate) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("RAMS beta must lie in [0,1]");
  return {KernelKind::Rams, beta, gate};
}

std::string StaticKernel::to_string() const {
  switch (kind) {
    case KernelKind::Aps: return "APS";
    case KernelKind::Raps: return "RAPS";
    case KernelKind::Rams: return "RAMS:" + format_double(beta);
  }
  throw DomainError("corrupt kernel kind");
}

bool is_rule_relative(DynamicParam param) {
  return param == DynamicParam::SolutionSize || param == DynamicParam::NumUpdates;
}

std::string param_name(DynamicParam param) {
  switch (param) {
    case DynamicParam::NumEvents: return "NUM_EVENTS";
    case DynamicParam::NumAgents: return "NUM_AGENTS";
    case DynamicParam::NumParagraphs: return "NUM_PARAGRAPHS";
    case DynamicParam::SolutionSize: return "SOLUTION_SIZE";
    case DynamicParam::NumUpdates: return "NUM_UPDATES";
  }
  throw DomainError("corrupt dynamic param");
}

DynamicParam param_from_name(const std::string& name) {
  if (name == "NUM_EVENTS") return DynamicParam::NumEvents;
  if (name == "NUM_AGENTS") return DynamicParam::NumAgents;
  if (name == "NUM_PARAGRAPHS") return DynamicParam::NumParagraphs;
  if (name == "SOLUTION_SIZE") return DynamicParam::SolutionSize;
  if (name == "NUM_UPDATES") return DynamicParam::NumUpdates;
  throw ConfigError("unknown dynamic parameter '" + name + "'");
}

Dynamizer Dynamizer::harsh(DynamicParam param, std::uint32_t t) {
  Dynamizer d;
  d.kind = Kind::Harsh;
  d.param = param;
  d.cutoff = t;
  return d;
}

Dynamizer Dynamizer::smooth(DynamicParam param, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("smoothing alpha must lie in [0,1]");
  Dynamizer d;
  d.kind = Kind::Smooth;
  d.param = param;
  d.alpha = alpha;
  return d;
}

std::string weight_mode_name(WeightMode mode) {
  return mode == WeightMode::EverVoted ? "EVER_VOTED" : "CURRENT_STANCE";
}

WeightMode weight_mode_from_name(const std::string& name) {
  if (name == "EVER_VOTED") return WeightMode::EverVoted;
  if (name == "CURRENT_STANCE") return WeightMode::CurrentStance;
  throw ConfigError("unknown weight mode '" + name + "'");
}

std::string RuleSpec::to_string() const {
  std::string dyn;
  switch (dynamizer.kind) {
    case Dynamizer::Kind::None:
      break;
    case Dynamizer::Kind::Harsh:
      dyn = "HARSH:" + param_name(dynamizer.param) + ":" + std::to_string(dynamizer.cutoff);
      break;
    case Dynamizer::Kind::Smooth:
      dyn = "SMOOTH:" + param_name(dynamizer.param) + ":" + format_double(dynamizer.alpha);
      break;
  }
  return kernel.to_string() + "|" + dyn + "|" + format_double(threshold) + "|" +
         weight_mode_name(weight_mode);
}

RuleSpec RuleSpec::parse(const std::string& text) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = text.find('|', start);
    if (bar == std::string::npos) {
      fields.push_back(text.substr(start));
      break;
    }
    fields.push_back(text.substr(start, bar - start));
    start = bar + 1;
  }
  if (fields.size() != 4) {
    throw ConfigError("rule string '" + text + "' must have 4 |-separated fields");
  }

  auto split_colon = [](const std::string& field) {
    std::vector<std::string> parts;
    std::size_t from = 0;
    while (true) {
      const std::size_t colon = field.find(':', from);
      if (colon == std::string::npos) {
        parts.push_back(field.substr(from));
        return parts;
      }
      parts.push_back(field.substr(from, colon - from));
      from = colon + 1;
    }
  };

  try {
    RuleSpec rule;

    const auto kparts = split_colon(fields[0]);
    if (kparts[0] == "APS" && kparts.size() == 1) {
      rule.kernel = StaticKernel::aps();
    } else if (kparts[0] == "RAPS" && kparts.size() == 1) {
      rule.kernel = StaticKernel::raps();
    } else if (kparts[0] == "RAMS" && kparts.size() == 2) {
      rule.kernel = StaticKernel::rams(parse_double(kparts[1]));
    } else {
      throw ConfigError("unknown kernel '" + fields[0] + "'");
    }

    if (fields[1].empty() || fields[1] == "NONE") {
      rule.dynamizer = Dynamizer::none();
    } else {
      const auto dparts = split_colon(fields[1]);
      if (dparts.size() != 3) throw ConfigError("malformed dynamizer '" + fields[1] + "'");
      const DynamicParam param = param_from_name(dparts[1]);
      if (dparts[0] == "HARSH") {
        rule.dynamizer = Dynamizer::harsh(param, static_cast<std::uint32_t>(parse_uint(dparts[2])));
      } else if (dparts[0] == "SMOOTH") {
        rule.dynamizer = Dynamizer::smooth(param, parse_double(dparts[2]));
      } else {
        throw ConfigError("unknown dynamizer '" + dparts[0] + "'");
      }
    }

    rule.threshold = parse_double(fields[2]);
    if (!(rule.threshold >= 0.0 && rule.threshold <= 1.0)) {
      throw ConfigError("threshold must lie in [0,1], got " + fields[2]);
    }
    rule.weight_mode = weight_mode_from_name(fields[3]);
    return rule;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("bad rule string '" + text + "': " + e.what());
  }
}

const Solution& Trajectory::last() const {
  if (prefix_solutions.empty()) throw EmptyLog("trajectory over an empty log has no solution");
  return prefix_solutions.back();
}

double static_score(const StaticKernel& kernel, ParagraphId paragraph,
                    const Instance& instance, WeightMode mode) {
  if (!instance.log().paragraphs().count(paragraph)) {
    throw UnknownParagraph("paragraph " + std::to_string(paragraph) + " is not in the log");
  }
  const Tally tally = tally_of(instance, mode);
  const std::size_t active = active_count_if_needed(kernel, stance_of(instance.log()));
  return kernel_score(kernel, tally.at(paragraph), instance.agents().size(), active);
}

double f_exp(double x, double t, double alpha) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("f_exp: x must lie in [0,1]");
  if (!(t >= 0.0)) throw DomainError("f_exp: t must be nonnegative");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("f_exp: alpha must lie in [0,1]");
  return x * std::exp(-t * alpha * (1.0 - x));
}

std::uint64_t param_value(DynamicParam param, const EventLog& log,
                          const std::optional<RuleSpec>& rule) {
  switch (param) {
    case DynamicParam::NumEvents: return log.size();
    case DynamicParam::NumAgents: return log.agents().size();
    case DynamicParam::NumParagraphs: return log.paragraphs().size();
    case DynamicParam::SolutionSize:
      if (!rule) throw MissingRule("SOLUTION_SIZE requires the rule it is relative to");
      return ccr_solution(*rule, Instance::from_log(log)).size();
    case DynamicParam::NumUpdates:
      if (!rule) throw MissingRule("NUM_UPDATES requires the rule it is relative to");
      return ccr_trajectory(*rule, log).update_count();
  }
  throw DomainError("corrupt dynamic param");
}

TrajectoryBuilder::TrajectoryBuilder(RuleSpec rule, std::size_t community)
    : rule_(std::move(rule)), community_(community), inc_(rule_.weight_mode) {
  // A harsh cutoff of 0 is met by the empty prefix: nothing ever scores.
  if (rule_.dynamizer.kind == Dynamizer::Kind::Harsh && rule_.dynamizer.cutoff == 0) {
    frozen_ = true;
    frozen_at_ = 0;
  }
}

Solution TrajectoryBuilder::evaluate_prefix() {
  const Dynamizer& dyn = rule_.dynamizer;
  std::optional<double> smooth_t;
  if (dyn.kind == Dynamizer::Kind::Smooth) {
    if (is_rule_relative(dyn.param)) {
      smooth_t = static_cast<double>(dyn.param == DynamicParam::SolutionSize
                                         ? (result_.prefix_solutions.empty()
                                                ? 0
                                                : result_.prefix_solutions.back().size())
                                         : result_.update_count());
    } else {
      switch (dyn.param) {
        case DynamicParam::NumEvents: smooth_t = static_cast<double>(inc_.events_seen()); break;
        case DynamicParam::NumAgents: smooth_t = static_cast<double>(inc_.agents().size()); break;
        default: smooth_t = static_cast<double>(inc_.paragraphs().size()); break;
      }
    }
  }

  const Tally tally = inc_.tally();
  const std::size_t active = active_count_if_needed(rule_.kernel, inc_.stance());
  Solution out;
  for (const auto& [paragraph, t] : tally.paragraphs) {
    double score = kernel_score(rule_.kernel, t, community_, active);
    if (smooth_t) score = f_exp(score, *smooth_t, dyn.alpha);
    if (score >= rule_.threshold) out.insert(paragraph);
  }
  return out;
}

void TrajectoryBuilder::push(const Event& event) {
  const Dynamizer& dyn = rule_.dynamizer;
  Solution sol;
  if (frozen_) {
    sol = frozen_solution_;
  } else {
    // For a harsh rule the cutoff check on a rule-relative param happens
    // before this prefix's solution joins the trajectory (one-event lookback).
    bool freeze_now = false;
    if (dyn.kind == Dynamizer::Kind::Harsh && is_rule_relative(dyn.param)) {
      const std::uint64_t val = dyn.param == DynamicParam::SolutionSize
                                    ? (result_.prefix_solutions.empty()
                                           ? 0
                                           : result_.prefix_solutions.back().size())
                                    : result_.update_count();
      freeze_now = val >= dyn.cutoff;
    }

    inc_.apply(event);
    sol = evaluate_prefix();

    if (dyn.kind == Dynamizer::Kind::Harsh) {
      if (!freeze_now && !is_rule_relative(dyn.param)) {
        std::uint64_t val = 0;
        switch (dyn.param) {
          case DynamicParam::NumEvents: val = inc_.events_seen(); break;
          case DynamicParam::NumAgents: val = inc_.agents().size(); break;
          default: val = inc_.paragraphs().size(); break;
        }
        freeze_now = val >= dyn.cutoff;
      }
      if (freeze_now) {
        frozen_ = true;
        frozen_solution_ = sol;
        frozen_at_ = inc_.events_seen();
      }
    }
  }

  if (!result_.prefix_solutions.empty() && sol != result_.prefix_solutions.back()) {
    result_.update_indices.push_back(result_.prefix_solutions.size());
  }
  result_.prefix_solutions.push_back(std::move(sol));
}

const Solution& TrajectoryBuilder::current() const {
  if (result_.prefix_solutions.empty()) {
    throw EmptyLog("no events pushed yet");
  }
  return result_.prefix_solutions.back();
}

Trajectory ccr_trajectory(const RuleSpec& rule, const EventLog& log,
                          std::optional<std::size_t> community) {
  TrajectoryBuilder builder(rule, community.value_or(log.agents().size()));
  for (const Event& e : log) builder.push(e);
  return builder.take();
}

namespace {

std::map<ParagraphId, double> static_scores(const RuleSpec& rule, const Instance& instance) {
  const Tally tally = tally_of(instance, rule.weight_mode);
  const std::size_t active = active_count_if_needed(rule.kernel, stance_of(instance.log()));
  std::map<ParagraphId, double> out;
  for (const auto& [paragraph, t] : tally.paragraphs) {
    out[paragraph] = kernel_score(rule.kernel, t, instance.agents().size(), active);
  }
  return out;
}

std::size_t harsh_cutoff_index(const RuleSpec& rule, const EventLog& log,
                               std::size_t community) {
  TrajectoryBuilder builder(rule, community);
  for (const Event& e : log) {
    if (builder.frozen_at()) break;
    builder.push(e);
  }
  return builder.frozen_at().value_or(log.size());
}

/// Dynamized score of every paragraph of the instance's full log.
std::map<ParagraphId, double> final_scores(const RuleSpec& rule, const Instance& instance) {
  const EventLog& log = instance.log();
  const Dynamizer& dyn = rule.dynamizer;
  switch (dyn.kind) {
    case Dynamizer::Kind::None:
      return static_scores(rule, instance);

    case Dynamizer::Kind::Smooth: {
      double t = 0.0;
      if (is_rule_relative(dyn.param)) {
        t = static_cast<double>(
            lookback_value(ccr_trajectory(rule, log, instance.agents().size()), dyn.param));
      } else {
        t = static_cast<double>(param_value(dyn.param, log));
      }
      std::map<ParagraphId, double> out = static_scores(rule, instance);
      for (auto& [paragraph, score] : out) score = f_exp(score, t, dyn.alpha);
      return out;
    }

    case Dynamizer::Kind::Harsh: {
      const std::size_t j = harsh_cutoff_index(rule, log, instance.agents().size());
      const Instance frozen(instance.agents(), slice_prefix(log, j));
      std::map<ParagraphId, double> out;
      for (ParagraphId p : log.paragraphs()) out[p] = 0.0;
      for (const auto& [paragraph, score] : static_scores(rule, frozen)) {
        out[paragraph] = score;
      }
      return out;
    }
  }
  throw DomainError("corrupt dynamizer kind");
}

}  // namespace

EventLog harsh_prefix(const EventLog& log, DynamicParam param, std::uint32_t t,
                      const std::optional<RuleSpec>& rule) {
  if (is_rule_relative(param)) {
    if (!rule) throw MissingRule(param_name(param) + " requires the rule it is relative to");
    RuleSpec harshened = *rule;
    harshened.dynamizer = Dynamizer::harsh(param, t);
    return slice_prefix(log, harsh_cutoff_index(harshened, log, log.agents().size()));
  }
  std::set<AgentId> agents;
  std::set<ParagraphId> paragraphs;
  std::uint64_t val = 0;  // value at prefix length 0
  std::size_t m = 0;
  while (val < t && m < log.size()) {
    const Event& e = log[m];
    ++m;
    agents.insert(e.agent);
    paragraphs.insert(e.paragraph);
    switch (param) {
      case DynamicParam::NumEvents: val = m; break;
      case DynamicParam::NumAgents: val = agents.size(); break;
      default: val = paragraphs.size(); break;
    }
  }
  return slice_prefix(log, val >= t ? m : log.size());
}

double dynamic_score(const RuleSpec& rule, ParagraphId paragraph, const Instance& instance) {
  const auto scores = final_scores(rule, instance);
  const auto it = scores.find(paragraph);
  if (it == scores.end()) {
    throw UnknownParagraph("paragraph " + std::to_string(paragraph) + " is not in the log");
  }
  return it->second;
}

double dynamic_score(const RuleSpec& rule, ParagraphId paragraph, const EventLog& log) {
  return dynamic_score(rule, paragraph, Instance::from_log(log));
}

Solution ccr_solution(const RuleSpec& rule, const Instance& instance) {
  Solution out;
  for (const auto& [paragraph, score] : final_scores(rule, instance)) {
    if (score >= rule.threshold) out.insert(paragraph);
  }
  return out;
}

Solution rm_solution(const Instance& instance, WeightMode mode, TieBreak tie_break) {
  Solution out;
  const Tally tally = tally_of(instance, mode);
  for (const auto& [paragraph, t] : tally.paragraphs) {
    if (t.plus_rel > t.minus_rel ||
        (t.plus_rel == t.minus_rel && tie_break == TieBreak::IncludeOnTie)) {
      out.insert(paragraph);
    }
  }
  return out;
}

Solution sentinel_rule(const Instance& instance, ParagraphId sentinel_paragraph) {
  Solution out;
  for (const Event& e : instance.log()) {
    if (e.paragraph == sentinel_paragraph && e.value == Vote::Abstain) break;
    out.insert(e.paragraph);
  }
  return out;
}

RuleGridSpec paper_grid() {
  RuleGridSpec grid;
  grid.kernels = {StaticKernel::aps(), StaticKernel::raps(),
                  StaticKernel::rams(0.05), StaticKernel::rams(0.1),
                  StaticKernel::rams(0.3), StaticKernel::rams(0.5)};
  return grid;
}

RuleGridSpec static_grid() {
  RuleGridSpec grid = paper_grid();
  grid.include_harsh = false;
  grid.include_smooth = false;
  return grid;
}

std::vector<RuleSpec> build_rule_grid(const RuleGridSpec& grid) {
  if (grid.kernels.empty()) throw ConfigError("rule grid has no kernels");
  std::vector<RuleSpec> out;
  for (const StaticKernel& kernel : grid.kernels) {
    auto add = [&](const Dynamizer& dyn) {
      out.push_back(RuleSpec{kernel, dyn, grid.threshold, grid.weight_mode,
                             TieBreak::ExcludeOnTie});
    };
    if (grid.include_static) add(Dynamizer::none());
    if (grid.include_harsh) {
      for (DynamicParam param : grid.params) {
        for (std::uint32_t t : grid.harsh_cutoffs) add(Dynamizer::harsh(param, t));
      }
    }
    if (grid.include_smooth) {
      for (DynamicParam param : grid.params) {
        for (double alpha : grid.smooth_alphas) add(Dynamizer::smooth(param, alpha));
      }
    }
  }
  if (out.empty()) throw ConfigError("rule grid is empty");
  return out;
}

}  // namespace ccr
