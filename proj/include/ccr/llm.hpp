#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccr/datasets.hpp"
#include "ccr/populations.hpp"
#include "ccr/profiles.hpp"
#include "ccr/rng.hpp"

namespace ccr {

/// An agent produced no admissible action within the re-prompt budget.  The
/// scheduler treats this as a skipped iteration, not a run failure.
struct SkippedIteration : Error {
  using Error::Error;
};

/// Substitutes {{name}} markers in `tmpl` from `values`.  A marker with no
/// matching value, or an unterminated one, raises MissingPlaceholder.
/// Substituted values are inserted verbatim and never rescanned.
std::string render_template(const std::string& tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values);

/// The agent-introduction system prompt: identity, demographic profile, and
/// sentiment position on the topic.
std::string render_system_prompt(const AgentProfile& profile, const std::string& topic);

/// "You can either PROPOSE a new action or VOTE on an existing proposal", or
/// the forced-PROPOSE variant when no paragraphs exist yet.
std::string default_action_hint(bool has_paragraphs);

/// One python-dict-style row per paragraph: id, text, vote counts, the
/// agent's own vote ('?' when none), and whether the rule includes it.
std::string format_state_rows(const AgentView& view);

/// Numbered few-shot block: "1. [Domain] text (Reasoning: rationale)."
std::string format_examples(const std::vector<ProposalExample>& examples);

/// The stepwise decision prompt: system state, task, four reasoning steps,
/// few-shot examples, voting rules, and the mandatory response structure.
/// Requires exactly three few-shot examples.
std::string render_decision_prompt(const AgentView& view,
                                   const std::vector<ProposalExample>& few_shot,
                                   const std::string& action_hint);

/// k distinct corpus entries from the given sentiment category, drawn from
/// distinct domains as long as unused domains remain.  InsufficientCorpus
/// when the category has fewer than k entries.
std::vector<ProposalExample> sample_few_shot(const std::vector<ProposalExample>& corpus,
                                             SentimentCategory category, std::size_t k, Rng& rng);

/// A structured agent response before legality checks.
struct ParsedDecision {
  enum class Kind { Propose, Vote };

  Kind decision = Kind::Vote;
  ParagraphId paragraph_id = 0;
  std::string action_text;
  Vote vote = Vote::Up;
  std::string reasoning;
};

/// Extracts DECISION / PARAGRAPH ID / ACTION DETAILS / VOTE / REASONING from
/// a raw completion, case-insensitively and tolerant of surrounding prose.
/// MalformedResponse on a missing field, InvalidVoteToken on a bad vote.
ParsedDecision parse_decision(const std::string& raw);

/// Enforces the voting rules against the agent's stance row and the known
/// paragraph ids: ABSTAIN only from a nonzero vote, no repeated vote, votes
/// target existing paragraphs, proposals use the next free id with UPVOTE.
AgentAction validate_action(const ParsedDecision& decision,
                            const std::map<ParagraphId, Vote>& own_stance_row,
                            const std::set<ParagraphId>& existing_ids);

struct ChatConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  double temperature = 0.7;
  std::string api_key_env = "CCR_API_KEY";
  int max_retries = 3;    // retries after the first attempt
  int backoff_ms = 200;   // doubled per retry; 0 disables sleeping
  int timeout_s = 60;
};

struct ChatReply {
  int status = 0;
  std::string body;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;

  virtual ChatReply post(const ChatConfig& config, const std::string& request_json,
                         const std::string& api_key) = 0;
  virtual bool needs_credentials() const { return false; }
};

/// Wraps assistant text into a chat-completions response body.
std::string wrap_completion(const std::string& content);

/// POSTs to an OpenAI-style chat-completions endpoint over HTTP(S).
class HttpChatTransport final : public ChatTransport {
 public:
  ChatReply post(const ChatConfig& config, const std::string& request_json,
                 const std::string& api_key) override;
  bool needs_credentials() const override { return true; }
};

/// Replays a fixed list of replies in order; TransportError once exhausted.
class ScriptedChatTransport final : public ChatTransport {
 public:
  explicit ScriptedChatTransport(std::vector<std::string> contents);
  explicit ScriptedChatTransport(std::vector<ChatReply> replies);

  ChatReply post(const ChatConfig& config, const std::string& request_json,
                 const std::string& api_key) override;
  bool needs_credentials() const override { return require_credentials_; }

  void require_credentials(bool on) { require_credentials_ = on; }
  std::size_t served() const { return served_; }

 private:
  std::vector<ChatReply> replies_;
  std::size_t served_ = 0;
  bool require_credentials_ = false;
};

/// Deterministic response content derived from the prompts alone: proposals
/// reuse few-shot texts, votes follow the stated sentiment position.  Always
/// well-formed and legal with respect to the prompted state.
std::string synthesize_mock_reply(const std::string& system_text, const std::string& user_text);

class MockChatTransport final : public ChatTransport {
 public:
  ChatReply post(const ChatConfig& config, const std::string& request_json,
                 const std::string& api_key) override;
};

/// One completion per call with bounded retries: 5xx, 429, and connection
/// failures are retried with doubling backoff; 401/403 raise AuthError, a
/// missing key raises AuthError before any transport call; RateLimited or
/// TransportError surface once the budget is spent.
class ChatClient {
 public:
  ChatClient();  // HTTP transport, default config
  explicit ChatClient(ChatConfig config);
  ChatClient(ChatConfig config, std::shared_ptr<ChatTransport> transport);

  std::string complete(const std::string& system_text, const std::string& user_text) const;
  const ChatConfig& config() const { return config_; }

 private:
  ChatConfig config_;
  std::shared_ptr<ChatTransport> transport_;
};

std::string complete_chat(const std::string& system_text, const std::string& user_text,
                          const ChatConfig& config);

/// One prompt/response exchange, kept for auditing and offline replay.
struct AuditRecord {
  std::size_t iteration = 0;  // population decision counter, 1-based
  AgentId agent = 0;
  int attempt = 0;            // 0 first try, 1.. re-prompts
  std::string outcome;        // "applied", "rejected", "skipped"
  std::string violation;      // empty when applied
  std::string system_prompt;
  std::string user_prompt;
  std::string response;

  std::string to_json() const;  // single NDJSON line, no trailing newline
};

struct LlmOptions {
  std::string topic = "Climate change policy";
  int max_reprompts = 2;
  std::size_t few_shot_count = 3;
};

/// Chat-backed agents: each decision renders the two prompts, samples
/// few-shot examples for the agent's sentiment category, and validates the
/// completion, re-prompting with the named violation up to the budget before
/// raising SkippedIteration.  Every exchange lands in the audit trail.
class LlmPopulation final : public Population {
 public:
  LlmPopulation(std::vector<AgentProfile> profiles, CorpusFile corpus, ChatClient client,
                LlmOptions options = {});

  std::size_t size() const override { return profiles_.size(); }
  AgentAction decide(AgentId agent, const AgentView& view, Rng& rng) override;
  bool textual() const override { return true; }

  const std::vector<AgentProfile>& profiles() const { return profiles_; }
  const std::vector<AuditRecord>& audit() const { return audit_; }
  std::vector<AuditRecord> take_audit();

 private:
  std::vector<AgentProfile> profiles_;
  CorpusFile corpus_;
  ChatClient client_;
  LlmOptions options_;
  std::vector<AuditRecord> audit_;
  std::size_t iterations_ = 0;
};

}  // namespace ccr
