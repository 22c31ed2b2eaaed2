#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccr {

// Agents and paragraphs are opaque integer identifiers assigned in
// proposal order (a new paragraph gets id max+1).
using AgentId = std::uint32_t;
using ParagraphId = std::uint32_t;

/// A vote value: approve (+1), abstain/withdraw (0), disapprove (-1).
enum class Vote : std::int8_t {
  Down = -1,
  Abstain = 0,
  Up = +1,
};

constexpr int to_int(Vote v) noexcept { return static_cast<int>(v); }

Vote vote_from_int(int value);  // throws DomainError for anything outside {-1,0,+1}

std::string vote_token(Vote v);       // "+1", "0", "-1"
Vote vote_from_token(const std::string& token);

// ---------------------------------------------------------------------------
// Error hierarchy. Every named failure mode gets its own type so callers can
// react to exactly the condition they care about.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core model
struct NewParagraphNotApproval : Error { using Error::Error; };
struct UnknownAgent : Error { using Error::Error; };
struct UnknownParagraph : Error { using Error::Error; };

// rules
struct MissingRule : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// welfare
struct TooManyParagraphs : Error { using Error::Error; };
struct EmptyLog : Error { using Error::Error; };

// datasets
struct SchemaError : Error { using Error::Error; };
struct NegativeCount : Error { using Error::Error; };
struct ScoreOutOfRange : Error { using Error::Error; };
struct InsufficientCorpus : Error { using Error::Error; };

// llm gateway
struct MissingPlaceholder : Error { using Error::Error; };
struct MalformedResponse : Error { using Error::Error; };
struct InvalidVoteToken : Error { using Error::Error; };
struct IllegalAbstain : Error { using Error::Error; };
struct RepeatedVote : Error { using Error::Error; };
struct BadProposalId : Error { using Error::Error; };
struct TransportError : Error { using Error::Error; };
struct RateLimited : Error { using Error::Error; };
struct AuthError : Error { using Error::Error; };

// cli
struct UsageError : Error { using Error::Error; };

}  // namespace ccr
