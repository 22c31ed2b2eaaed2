#include "ccr/profiles.hpp"

#include <algorithm>

#include "ccr/format.hpp"

namespace ccr {

SentimentCategory category_of(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ScoreOutOfRange("sentiment score must lie in [0,1], got " + format_double(score));
  }
  if (score < 0.2) return SentimentCategory::ActiveResistance;
  if (score < 0.4) return SentimentCategory::MinimalAcknowledgment;
  if (score < 0.6) return SentimentCategory::BalancedApproach;
  if (score < 0.8) return SentimentCategory::SupportiveMeasures;
  return SentimentCategory::ProactiveAction;
}

std::string category_name(SentimentCategory c) {
  switch (c) {
    case SentimentCategory::ActiveResistance: return "Active Resistance";
    case SentimentCategory::MinimalAcknowledgment: return "Minimal Acknowledgment";
    case SentimentCategory::BalancedApproach: return "Balanced Approach";
    case SentimentCategory::SupportiveMeasures: return "Supportive Measures";
    case SentimentCategory::ProactiveAction: return "Proactive Action";
  }
  throw DomainError("corrupt sentiment category");
}

std::string category_name_lower(SentimentCategory c) {
  std::string name = category_name(c);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return name;
}

std::string category_orientation(SentimentCategory c) {
  switch (c) {
    case SentimentCategory::ActiveResistance:
      return "complete opposition to in-favor action";
    case SentimentCategory::MinimalAcknowledgment:
      return "recognition of climate concerns without enforcing meaningful change";
    case SentimentCategory::BalancedApproach:
      return "weighing climate action alongside economic or practical constraints";
    case SentimentCategory::SupportiveMeasures:
      return "endorsement of proactive but feasible climate policies";
    case SentimentCategory::ProactiveAction:
      return "prioritization of ambitious climate-first transformations";
  }
  throw DomainError("corrupt sentiment category");
}

ScoreRange category_range(SentimentCategory c) {
  switch (c) {
    case SentimentCategory::ActiveResistance: return {0.0, 0.2};
    case SentimentCategory::MinimalAcknowledgment: return {0.2, 0.4};
    case SentimentCategory::BalancedApproach: return {0.4, 0.6};
    case SentimentCategory::SupportiveMeasures: return {0.6, 0.8};
    case SentimentCategory::ProactiveAction: return {0.8, 1.0};
  }
  throw DomainError("corrupt sentiment category");
}

}  // namespace ccr
