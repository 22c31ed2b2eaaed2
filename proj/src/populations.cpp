#include "ccr/populations.hpp"

#include <algorithm>
#include <ostream>

#include "ccr/format.hpp"

namespace ccr {

const ParagraphInfo* AgentView::find(ParagraphId id) const {
  for (const ParagraphInfo& p : paragraphs) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Vote AgentView::own_vote(ParagraphId id) const {
  const auto it = own.find(id);
  return it == own.end() ? Vote::Abstain : it->second;
}

AgentAction AgentAction::propose(double position, std::string text) {
  AgentAction a;
  a.kind = Kind::Propose;
  a.position = position;
  a.text = std::move(text);
  return a;
}

AgentAction AgentAction::vote(ParagraphId paragraph, Vote value) {
  AgentAction a;
  a.kind = Kind::Vote;
  a.paragraph = paragraph;
  a.value = value;
  return a;
}

AgentAction unstructured_step(const AgentView& view, Rng& rng) {
  const std::size_t draw = uniform_index(rng, 3);  // 0 propose, 1 vote, 2 abstain

  if (draw == 1 && !view.paragraphs.empty()) {
    const ParagraphId target =
        view.paragraphs[uniform_index(rng, view.paragraphs.size())].id;
    const Vote value = uniform01(rng) < 0.5 ? Vote::Up : Vote::Down;
    return AgentAction::vote(target, value);
  }
  if (draw == 2 && !view.own.empty()) {
    auto it = view.own.begin();
    std::advance(it, uniform_index(rng, view.own.size()));
    return AgentAction::vote(it->first, Vote::Abstain);
  }
  // drawn action (or its fallback): propose is always feasible
  AgentAction a = AgentAction::propose();
  a.paragraph = view.next_id;
  return a;
}

AgentAction euclidean_step(const EuclideanAgent& agent, const AgentView& view, Rng& rng,
                           double r_min) {
  std::size_t inside = 0;
  for (const ParagraphInfo& p : view.paragraphs) {
    if (std::isnan(p.position)) {
      throw DomainError("euclidean_step needs paragraph positions in the view");
    }
    if (agent.contains(p.position)) ++inside;
  }
  const double r_a = view.paragraphs.empty()
                         ? 0.0
                         : static_cast<double>(inside) / view.paragraphs.size();

  // with nothing on the table, proposing is the only feasible action
  if (view.paragraphs.empty() || r_a < r_min) {
    AgentAction a = AgentAction::propose(uniform_real(rng, agent.left, agent.right));
    a.paragraph = view.next_id;
    return a;
  }

  const ParagraphInfo& pick = view.paragraphs[uniform_index(rng, view.paragraphs.size())];
  if (view.own_vote(pick.id) != Vote::Abstain) {
    return AgentAction::vote(pick.id, Vote::Abstain);
  }
  return AgentAction::vote(pick.id, agent.contains(pick.position) ? Vote::Up : Vote::Down);
}

IdealPointDistribution IdealPointDistribution::uniform() { return {}; }

IdealPointDistribution IdealPointDistribution::gaussian(double mu, double sigma) {
  IdealPointDistribution d;
  d.kind = Kind::Gaussian;
  d.mu = mu;
  d.sigma = sigma;
  return d;
}

IdealPointDistribution IdealPointDistribution::bimodal(double mu1, double mu2, double sigma) {
  IdealPointDistribution d;
  d.kind = Kind::Bimodal;
  d.mu = mu1;
  d.mu2 = mu2;
  d.sigma = sigma;
  return d;
}

std::string IdealPointDistribution::name() const {
  switch (kind) {
    case Kind::Uniform: return "uniform";
    case Kind::Gaussian: return "normal";
    case Kind::Bimodal: return "two-peaks";
  }
  throw DomainError("corrupt distribution kind");
}

std::vector<EuclideanAgent> sample_population(const PopulationSpec& spec) {
  if (spec.n < 1) throw ConfigError("population needs at least one agent");
  if (!(spec.interval_width > 0.0 && spec.interval_width <= 1.0)) {
    throw ConfigError("interval width must lie in (0,1]");
  }
  const IdealPointDistribution& d = spec.distribution;
  if (d.kind != IdealPointDistribution::Kind::Uniform && !(d.sigma > 0.0)) {
    throw ConfigError("distribution sigma must be positive");
  }

  Rng rng = make_rng(spec.seed);
  const double half = spec.interval_width / 2.0;
  std::vector<EuclideanAgent> agents;
  agents.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double center = 0.0;
    switch (d.kind) {
      case IdealPointDistribution::Kind::Uniform:
        center = uniform01(rng);
        break;
      case IdealPointDistribution::Kind::Gaussian:
        center = gaussian(rng, d.mu, d.sigma);
        break;
      case IdealPointDistribution::Kind::Bimodal: {
        const double peak = uniform01(rng) < 0.5 ? d.mu : d.mu2;
        center = gaussian(rng, peak, d.sigma);
        break;
      }
    }
    center = std::clamp(center, half, 1.0 - half);
    agents.push_back(EuclideanAgent{center - half, center + half});
  }
  return agents;
}

UnstructuredPopulation::UnstructuredPopulation(std::size_t n) : n_(n) {
  if (n < 1) throw ConfigError("population needs at least one agent");
}

AgentAction UnstructuredPopulation::decide(AgentId, const AgentView& view, Rng& rng) {
  return unstructured_step(view, rng);
}

EuclideanPopulation::EuclideanPopulation(std::vector<EuclideanAgent> agents, double r_min)
    : agents_(std::move(agents)), r_min_(r_min) {
  if (agents_.empty()) throw ConfigError("population needs at least one agent");
  for (const EuclideanAgent& a : agents_) {
    if (!(0.0 <= a.left && a.left <= a.right && a.right <= 1.0)) {
      throw ConfigError("agent interval must satisfy 0 <= left <= right <= 1");
    }
  }
}

AgentAction EuclideanPopulation::decide(AgentId agent, const AgentView& view, Rng& rng) {
  if (agent < 1 || agent > agents_.size()) {
    throw UnknownAgent("agent " + std::to_string(agent) + " is not in the population");
  }
  return euclidean_step(agents_[agent - 1], view, rng, r_min_);
}

void EuclideanPopulation::write_csv(std::ostream& out) const {
  out << "agent,left,right\n";
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    out << (i + 1) << ',' << format_double(agents_[i].left) << ','
        << format_double(agents_[i].right) << '\n';
  }
}

}  // namespace ccr
