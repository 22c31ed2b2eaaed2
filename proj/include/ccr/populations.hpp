#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "ccr/rng.hpp"
#include "ccr/rules.hpp"

namespace ccr {

/// One paragraph as an agent sees it at decision time.
struct ParagraphInfo {
  ParagraphId id = 0;
  double position = std::numeric_limits<double>::quiet_NaN();  // Euclidean runs
  std::string text;                                            // textual runs
};

/// Read-only snapshot handed to an agent: the tally, the agent's own nonzero
/// stances, the document under the active rule, and the known paragraphs.
struct AgentView {
  Tally tally;
  std::map<ParagraphId, Vote> own;
  Solution document;
  std::vector<ParagraphInfo> paragraphs;  // ascending id
  ParagraphId next_id = 1;

  const ParagraphInfo* find(ParagraphId id) const;
  Vote own_vote(ParagraphId id) const;
};

/// What an agent wants to do.  A proposal implicitly carries the proposer's
/// +1 and gets its id from the scheduler; position/text are its payload.
struct AgentAction {
  enum class Kind { Propose, Vote };

  Kind kind = Kind::Propose;
  ParagraphId paragraph = 0;
  Vote value = Vote::Up;
  double position = std::numeric_limits<double>::quiet_NaN();
  std::string text;

  static AgentAction propose(double position = std::numeric_limits<double>::quiet_NaN(),
                             std::string text = {});
  static AgentAction vote(ParagraphId paragraph, Vote value);
};

/// Uniform draw over propose / vote / abstain; an infeasible draw falls back
/// to the first feasible action in the order propose > vote > abstain.
AgentAction unstructured_step(const AgentView& view, Rng& rng);

/// An agent's approval interval on the [0,1] opinion axis.
struct EuclideanAgent {
  double left = 0.0;
  double right = 1.0;

  bool contains(double x) const { return x >= left && x <= right; }
};

/// Interval-agent policy: propose inside the own interval while the fraction
/// of agreeable paragraphs is below r_min, otherwise vote on a random
/// paragraph (withdraw if already voted, approve iff inside the interval).
AgentAction euclidean_step(const EuclideanAgent& agent, const AgentView& view, Rng& rng,
                           double r_min = 0.2);

struct IdealPointDistribution {
  enum class Kind { Uniform, Gaussian, Bimodal };

  Kind kind = Kind::Uniform;
  double mu = 0.5;
  double sigma = 0.15;
  double mu2 = 0.75;  // second bimodal peak; `mu` is the first

  static IdealPointDistribution uniform();
  static IdealPointDistribution gaussian(double mu = 0.5, double sigma = 0.15);
  static IdealPointDistribution bimodal(double mu1 = 0.25, double mu2 = 0.75,
                                        double sigma = 0.1);
  std::string name() const;  // "uniform", "normal", "two-peaks"
};

struct PopulationSpec {
  std::size_t n = 20;
  IdealPointDistribution distribution;
  double interval_width = 0.4;
  std::uint64_t seed = 0;
};

/// n intervals of the configured width, centers drawn from the distribution
/// and clipped so every interval stays inside [0,1].  ConfigError on invalid
/// parameters; deterministic given the seed.
std::vector<EuclideanAgent> sample_population(const PopulationSpec& spec);

/// A community of decision policies, indexed by agent id 1..size().
class Population {
 public:
  virtual ~Population() = default;

  virtual std::size_t size() const = 0;
  virtual AgentAction decide(AgentId agent, const AgentView& view, Rng& rng) = 0;

  /// Whether proposals carry positions / texts the scheduler must track.
  virtual bool positional() const { return false; }
  virtual bool textual() const { return false; }
};

class UnstructuredPopulation final : public Population {
 public:
  explicit UnstructuredPopulation(std::size_t n);

  std::size_t size() const override { return n_; }
  AgentAction decide(AgentId agent, const AgentView& view, Rng& rng) override;

 private:
  std::size_t n_;
};

class EuclideanPopulation final : public Population {
 public:
  explicit EuclideanPopulation(std::vector<EuclideanAgent> agents, double r_min = 0.2);

  std::size_t size() const override { return agents_.size(); }
  AgentAction decide(AgentId agent, const AgentView& view, Rng& rng) override;
  bool positional() const override { return true; }

  const std::vector<EuclideanAgent>& agents() const { return agents_; }
  /// CSV rows agent,left,right (the reproducibility artifact for a run).
  void write_csv(std::ostream& out) const;

 private:
  std::vector<EuclideanAgent> agents_;
  double r_min_;
};

}  // namespace ccr
