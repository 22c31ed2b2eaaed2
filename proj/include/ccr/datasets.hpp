#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ccr/profiles.hpp"
#include "ccr/rng.hpp"

namespace ccr {

/// One demographic stratum with its normalized population share.
struct DemographicCell {
  std::string sex;
  std::string age_group;
  std::string education_level;
  double weight = 0.0;
};

/// CSV schema: sex,age_group,education,count.  Zero-count rows are dropped
/// and the remaining counts normalized to proportions.
std::vector<DemographicCell> parse_demographics_csv(std::istream& in);
std::vector<DemographicCell> load_demographics(const std::filesystem::path& path);

/// How per-profile sentiment scores are drawn (the source data only fixes
/// the demographic margins, not the sentiment assignment).
struct SentimentDistribution {
  enum class Kind { Uniform, Gaussian };

  Kind kind = Kind::Uniform;
  double mu = 0.5;
  double sigma = 0.2;

  static SentimentDistribution uniform() { return {}; }
  static SentimentDistribution gaussian(double mu, double sigma);
};

/// n personas: demographics by weighted draw, sentiment from the configured
/// distribution, agent ids 1..n, profile_text prebuilt for prompt rendering.
std::vector<AgentProfile> sample_profiles(const std::vector<DemographicCell>& cells,
                                          std::size_t n,
                                          const SentimentDistribution& sentiment,
                                          Rng& rng);

/// The few-shot proposal corpus.
struct CorpusFile {
  std::vector<ProposalExample> entries;

  std::size_t category_count(SentimentCategory c) const;
  std::vector<ProposalExample> in_category(SentimentCategory c) const;
};

/// JSON array of {domain, sentiment_score, text, reasoning}.  Rejects
/// duplicate texts and demands >= 3 entries per sentiment category.
CorpusFile parse_corpus_json(const std::string& text);
CorpusFile load_corpus(const std::filesystem::path& path);
std::string corpus_to_json(const CorpusFile& corpus);

}  // namespace ccr
