#include "ccr/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ccr/format.hpp"
#include "ccr/io.hpp"

namespace ccr {

std::vector<DemographicCell> parse_demographics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty demographics file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "sex,age_group,education,count") {
    throw SchemaError("demographics header must be 'sex,age_group,education,count'");
  }

  std::vector<DemographicCell> cells;
  double total = 0.0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw SchemaError("demographics line " + std::to_string(line_no) +
                        ": expected 4 fields");
    }
    double count = 0.0;
    try {
      count = parse_double(fields[3]);
    } catch (const Error& e) {
      throw SchemaError("demographics line " + std::to_string(line_no) + ": " + e.what());
    }
    if (count < 0.0) {
      throw NegativeCount("demographics line " + std::to_string(line_no) +
                          ": negative population count");
    }
    if (count == 0.0) continue;
    cells.push_back(DemographicCell{fields[0], fields[1], fields[2], count});
    total += count;
  }
  if (cells.empty()) throw SchemaError("demographics file has no usable rows");
  for (DemographicCell& cell : cells) cell.weight /= total;
  return cells;
}

std::vector<DemographicCell> load_demographics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return parse_demographics_csv(in);
}

SentimentDistribution SentimentDistribution::gaussian(double mu, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("sentiment sigma must be positive");
  SentimentDistribution d;
  d.kind = Kind::Gaussian;
  d.mu = mu;
  d.sigma = sigma;
  return d;
}

std::vector<AgentProfile> sample_profiles(const std::vector<DemographicCell>& cells,
                                          std::size_t n,
                                          const SentimentDistribution& sentiment,
                                          Rng& rng) {
  if (cells.empty()) throw ConfigError("cannot sample profiles from an empty table");

  std::vector<AgentProfile> profiles;
  profiles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    const DemographicCell* chosen = &cells.back();
    for (const DemographicCell& cell : cells) {
      cumulative += cell.weight;
      if (u < cumulative) {
        chosen = &cell;
        break;
      }
    }

    double score = 0.0;
    switch (sentiment.kind) {
      case SentimentDistribution::Kind::Uniform:
        score = uniform01(rng);
        break;
      case SentimentDistribution::Kind::Gaussian:
        score = std::clamp(gaussian(rng, sentiment.mu, sentiment.sigma), 0.0, 1.0);
        break;
    }

    AgentProfile profile;
    profile.agent_id = static_cast<AgentId>(i + 1);
    profile.sex = chosen->sex;
    profile.age_group = chosen->age_group;
    profile.education_level = chosen->education_level;
    profile.sentiment_score = score;
    profile.profile_text = "You are a " + profile.age_group + " years old " + profile.sex +
                           " with " + profile.education_level;
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

std::size_t CorpusFile::category_count(SentimentCategory c) const {
  std::size_t count = 0;
  for (const ProposalExample& e : entries) {
    if (e.category() == c) ++count;
  }
  return count;
}

std::vector<ProposalExample> CorpusFile::in_category(SentimentCategory c) const {
  std::vector<ProposalExample> out;
  for (const ProposalExample& e : entries) {
    if (e.category() == c) out.push_back(e);
  }
  return out;
}

CorpusFile parse_corpus_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("corpus is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw SchemaError("corpus must be a JSON array");

  CorpusFile corpus;
  std::set<std::string> seen_texts;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "corpus entry " + std::to_string(i);
    if (!item.is_object() || !item.contains("domain") || !item.contains("sentiment_score") ||
        !item.contains("text") || !item.contains("reasoning")) {
      throw SchemaError(where + ": need domain, sentiment_score, text, reasoning");
    }
    if (!item["domain"].is_string() || !item["text"].is_string() ||
        !item["reasoning"].is_string() || !item["sentiment_score"].is_number()) {
      throw SchemaError(where + ": field of wrong type");
    }
    ProposalExample entry;
    entry.domain = item["domain"].get<std::string>();
    entry.sentiment_score = item["sentiment_score"].get<double>();
    entry.text = item["text"].get<std::string>();
    entry.reasoning = item["reasoning"].get<std::string>();
    if (entry.domain.empty() || entry.text.empty()) {
      throw SchemaError(where + ": empty domain or text");
    }
    entry.category();  // ScoreOutOfRange on a bad score
    if (!seen_texts.insert(entry.text).second) {
      throw SchemaError(where + ": duplicate proposal text");
    }
    corpus.entries.push_back(std::move(entry));
  }

  for (SentimentCategory c : kAllCategories) {
    if (corpus.category_count(c) < 3) {
      throw SchemaError("corpus needs at least 3 entries in category '" +
                        category_name(c) + "'");
    }
  }
  return corpus;
}

CorpusFile load_corpus(const std::filesystem::path& path) {
  return parse_corpus_json(read_text_file(path));
}

std::string corpus_to_json(const CorpusFile& corpus) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const ProposalExample& e : corpus.entries) {
    nlohmann::ordered_json item;
    item["domain"] = e.domain;
    item["sentiment_score"] = e.sentiment_score;
    item["text"] = e.text;
    item["reasoning"] = e.reasoning;
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

}  // namespace ccr
