#pragma once

#include <string>

#include "ccr/types.hpp"

namespace ccr {

/// Activism buckets partitioning the sentiment scale [0,1].
enum class SentimentCategory {
  ActiveResistance,      // [0.0, 0.2)
  MinimalAcknowledgment, // [0.2, 0.4)
  BalancedApproach,      // [0.4, 0.6)
  SupportiveMeasures,    // [0.6, 0.8)
  ProactiveAction,       // [0.8, 1.0]
};

/// Bucket of a score; throws ScoreOutOfRange outside [0,1].
SentimentCategory category_of(double score);

std::string category_name(SentimentCategory c);        // "Active Resistance"
std::string category_name_lower(SentimentCategory c);  // "active resistance"

/// Behavioral one-liner injected into the system prompt.
std::string category_orientation(SentimentCategory c);

/// Inclusive lower bound, exclusive upper bound (inclusive 1.0 for the top).
struct ScoreRange {
  double lo;
  double hi;
};
ScoreRange category_range(SentimentCategory c);

constexpr SentimentCategory kAllCategories[] = {
    SentimentCategory::ActiveResistance,      SentimentCategory::MinimalAcknowledgment,
    SentimentCategory::BalancedApproach,      SentimentCategory::SupportiveMeasures,
    SentimentCategory::ProactiveAction,
};

/// A deliberating persona: demographics plus a sentiment position.
struct AgentProfile {
  AgentId agent_id = 0;
  std::string sex;
  std::string age_group;
  std::string education_level;
  double sentiment_score = 0.5;
  std::string profile_text;  // "You are a 30-34 years old female with ..."

  SentimentCategory category() const { return category_of(sentiment_score); }
};

/// One corpus entry used for few-shot guidance.
struct ProposalExample {
  std::string domain;
  double sentiment_score = 0.0;
  std::string text;
  std::string reasoning;

  SentimentCategory category() const { return category_of(sentiment_score); }
};

}  // namespace ccr
