#include "ccr/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "ccr/format.hpp"

namespace ccr {

namespace {

constexpr const char kSystemPromptTemplate[] =
    R"(You are Agent {{agent_id}}, a participant in a collaborative constitution writing system focused on {{topic}}.
You engage dynamically with an evolving draft document, consisting of community proposals. The document is a list of action proposals that your community is considering adopting as policy.
YOUR PROFILE: {{profile}}.
YOUR POSITION ON {{topic}}: {{topic_position}} ({{position_category}}).
Accordingly, you have the following orientation: {{description}}.
As a participant, you can decide to vote on existing proposals (upvote, downvote, abstain) or suggest a new proposal.
Act consistently with your profile. Think step-by-step; align your reasoning explicitly with your stated orientation.)";

constexpr const char kDecisionPromptTemplate[] =
    R"(SYSTEM STATE: {{system_state_section}}.
TASK: Based on the system state and your profile, you must decide your next action through the following reasoning steps.
{{action_hint}}. Be very concise when addressing each step.
Step 1: Situation Analysis
- Analyze current proposals, subtopics, their vote counts, and your own stance.
- Note which paragraphs are included in the document and which are not.
- Identify over-represented (repeated ideas), under-represented (missing themes), or unbalanced (extreme/vague) topics.
Step 2: Position Alignment
- Evaluate if the included paragraphs reflect your profile and position.
- Identify proposals/content you support or oppose, and whether they align with your orientation.
- Identify critical gaps that would make the document incomplete or unbalanced from your perspective.
Step 3: Decision Evaluation
- Decide whether proposing or voting best influences the document at this point.
- If your support for a proposal has weakened (own vote not "?"), Choose ABSTAIN to reflect neutrality.
- Determine the optimal strategic action: propose a new paragraph/vote on an existing one.
Step 4: Action Formulation
If PROPOSE: Formulate a new proposal that:
- Addresses a sub-topic important to your background
- Is practical, realistic, diverse (max 20 words)
- Aligns with these examples of your position:
{{examples}}
If VOTE: Choose a paragraph and indicate clearly if you UPVOTE (agree), DOWNVOTE (disagree), or ABSTAIN (change previous vote to undecided).
Voting Rules (Mandatory):
- You may only ABSTAIN on a paragraph where your current vote is +1 or -1.
- If your current vote is '?', choose only UPVOTE or DOWNVOTE.
- Do NOT repeat your current vote.
Respond with the following structure (Mandatory):
DECISION: PROPOSE / VOTE
PARAGRAPH ID: [If VOTE: Paragraph ID, If PROPOSE: Next available ID]
ACTION DETAILS: [If VOTE: Proposal text, If PROPOSE: New proposal text]
VOTE: [If VOTE: UPVOTE / DOWNVOTE / ABSTAIN, If PROPOSE: UPVOTE only]
REASONING: [Brief justification, max 20 words, aligned with profile, position, and state].)";

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
  return s.substr(b, e - b);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string escape_py(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == '\'') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string own_token(Vote v) {
  switch (v) {
    case Vote::Up:
      return "+1";
    case Vote::Down:
      return "-1";
    case Vote::Abstain:
      break;
  }
  return "?";
}

}  // namespace

std::string render_template(const std::string& tmpl,
                            const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string::npos)
      throw MissingPlaceholder("unterminated placeholder near \"" + tmpl.substr(open, 24) + "\"");
    const std::string name = tmpl.substr(open + 2, close - open - 2);
    auto it = std::find_if(values.begin(), values.end(),
                           [&](const auto& kv) { return kv.first == name; });
    if (it == values.end()) throw MissingPlaceholder("no value for placeholder {{" + name + "}}");
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::string render_system_prompt(const AgentProfile& profile, const std::string& topic) {
  const SentimentCategory cat = profile.category();
  return render_template(kSystemPromptTemplate,
                         {{"agent_id", std::to_string(profile.agent_id)},
                          {"topic", topic},
                          {"profile", profile.profile_text},
                          {"topic_position", format_double(profile.sentiment_score)},
                          {"position_category", category_name_lower(cat)},
                          {"description", category_orientation(cat)}});
}

std::string default_action_hint(bool has_paragraphs) {
  if (has_paragraphs) return "You can either PROPOSE a new action or VOTE on an existing proposal";
  return "No proposals exist yet, so you must PROPOSE a new action";
}

std::string format_state_rows(const AgentView& view) {
  if (view.paragraphs.empty()) return "(no proposals have been submitted yet)";
  std::string out;
  for (const ParagraphInfo& info : view.paragraphs) {
    const ParagraphTally& t = view.tally.at(info.id);
    if (!out.empty()) out.push_back('\n');
    out += "{'paragraph_id': " + std::to_string(info.id);
    out += ", 'text': '" + escape_py(info.text) + "'";
    out += ", 'votes_plus': " + std::to_string(t.plus);
    out += ", 'votes_minus': " + std::to_string(t.minus);
    out += ", 'own_vote': '" + own_token(view.own_vote(info.id)) + "'";
    out += ", 'In document': '" + std::string(view.document.count(info.id) != 0 ? "yes" : "no") +
           "'}";
  }
  return out;
}

std::string format_examples(const std::vector<ProposalExample>& examples) {
  std::string out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (i != 0) out.push_back('\n');
    out += std::to_string(i + 1) + ". [" + examples[i].domain + "] " + examples[i].text +
           " (Reasoning: " + examples[i].reasoning + ").";
  }
  return out;
}

std::string render_decision_prompt(const AgentView& view,
                                   const std::vector<ProposalExample>& few_shot,
                                   const std::string& action_hint) {
  if (few_shot.size() != 3)
    throw DomainError("decision prompt requires exactly 3 few-shot examples, got " +
                      std::to_string(few_shot.size()));
  return render_template(kDecisionPromptTemplate,
                         {{"system_state_section", format_state_rows(view)},
                          {"action_hint", action_hint},
                          {"examples", format_examples(few_shot)}});
}

std::vector<ProposalExample> sample_few_shot(const std::vector<ProposalExample>& corpus,
                                             SentimentCategory category, std::size_t k, Rng& rng) {
  std::vector<const ProposalExample*> pool;
  for (const ProposalExample& entry : corpus)
    if (category_of(entry.sentiment_score) == category) pool.push_back(&entry);
  if (pool.size() < k)
    throw InsufficientCorpus("category " + category_name(category) + " has " +
                             std::to_string(pool.size()) + " entries, need " + std::to_string(k));

  std::vector<ProposalExample> out;
  std::set<std::string> used_domains;
  while (out.size() < k) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (used_domains.count(pool[i]->domain) == 0) candidates.push_back(i);
    if (candidates.empty()) {
      candidates.resize(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) candidates[i] = i;
    }
    const std::size_t pick = candidates[uniform_index(rng, candidates.size())];
    used_domains.insert(pool[pick]->domain);
    out.push_back(*pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

ParsedDecision parse_decision(const std::string& raw) {
  static const char* const kFields[] = {"DECISION", "PARAGRAPH ID", "ACTION DETAILS", "VOTE",
                                        "REASONING"};
  std::map<std::string, std::string> found;

  std::istringstream lines(raw);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t start = line.find_first_not_of(" \t*->#");
    if (start == std::string::npos) continue;
    const std::string body = line.substr(start);
    const std::string ub = upper(body);
    for (const char* field : kFields) {
      if (found.count(field) != 0) continue;
      const std::size_t n = std::strlen(field);
      if (ub.compare(0, n, field) != 0) continue;
      std::size_t pos = n;
      while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
      if (pos >= body.size() || body[pos] != ':') continue;
      std::string value = trim(body.substr(pos + 1));
      while (!value.empty() && value.back() == '*') value.pop_back();
      while (!value.empty() && value.front() == '*') value.erase(value.begin());
      found[field] = trim(value);
      break;
    }
  }

  for (const char* field : kFields)
    if (found.count(field) == 0)
      throw MalformedResponse("completion is missing the " + std::string(field) + " field");

  auto strip_wrapping = [](std::string v) {
    while (!v.empty() && (v.back() == '.' || v.back() == ']')) v.pop_back();
    while (!v.empty() && v.front() == '[') v.erase(v.begin());
    return trim(v);
  };

  ParsedDecision parsed;

  const std::string decision = upper(strip_wrapping(found["DECISION"]));
  if (decision == "PROPOSE") {
    parsed.decision = ParsedDecision::Kind::Propose;
  } else if (decision == "VOTE") {
    parsed.decision = ParsedDecision::Kind::Vote;
  } else {
    throw MalformedResponse("unrecognized DECISION value \"" + found["DECISION"] + "\"");
  }

  const std::string id_text = strip_wrapping(found["PARAGRAPH ID"]);
  try {
    const std::uint64_t id = parse_uint(id_text);
    if (id > std::numeric_limits<ParagraphId>::max())
      throw DomainError("paragraph id out of range");
    parsed.paragraph_id = static_cast<ParagraphId>(id);
  } catch (const DomainError&) {
    throw MalformedResponse("PARAGRAPH ID is not a number: \"" + found["PARAGRAPH ID"] + "\"");
  }

  const std::string vote = upper(strip_wrapping(found["VOTE"]));
  if (vote == "UPVOTE") {
    parsed.vote = Vote::Up;
  } else if (vote == "DOWNVOTE") {
    parsed.vote = Vote::Down;
  } else if (vote == "ABSTAIN") {
    parsed.vote = Vote::Abstain;
  } else {
    throw InvalidVoteToken("unrecognized VOTE token \"" + found["VOTE"] + "\"");
  }

  parsed.action_text = found["ACTION DETAILS"];
  parsed.reasoning = found["REASONING"];
  return parsed;
}

AgentAction validate_action(const ParsedDecision& decision,
                            const std::map<ParagraphId, Vote>& own_stance_row,
                            const std::set<ParagraphId>& existing_ids) {
  if (decision.decision == ParsedDecision::Kind::Propose) {
    const ParagraphId next = existing_ids.empty() ? 1 : *existing_ids.rbegin() + 1;
    if (decision.paragraph_id != next)
      throw BadProposalId("a proposal must use the next available id " + std::to_string(next) +
                          ", got " + std::to_string(decision.paragraph_id));
    if (decision.vote != Vote::Up) throw BadProposalId("a proposal carries an implicit UPVOTE");
    AgentAction action =
        AgentAction::propose(std::numeric_limits<double>::quiet_NaN(), decision.action_text);
    action.paragraph = next;
    return action;
  }

  const ParagraphId target = decision.paragraph_id;
  if (existing_ids.count(target) == 0)
    throw UnknownParagraph("vote targets unknown paragraph " + std::to_string(target));
  const auto it = own_stance_row.find(target);
  const Vote own = it == own_stance_row.end() ? Vote::Abstain : it->second;
  if (decision.vote == Vote::Abstain && own == Vote::Abstain)
    throw IllegalAbstain("cannot ABSTAIN on paragraph " + std::to_string(target) +
                         " without a standing vote");
  if (decision.vote != Vote::Abstain && decision.vote == own)
    throw RepeatedVote("vote on paragraph " + std::to_string(target) + " repeats the current " +
                       own_token(own));
  return AgentAction::vote(target, decision.vote);
}

namespace {

std::string build_request(const ChatConfig& config, const std::string& system_text,
                          const std::string& user_text) {
  const nlohmann::json req{
      {"model", config.model},
      {"temperature", config.temperature},
      {"messages",
       nlohmann::json::array({
           nlohmann::json{{"role", "system"}, {"content", system_text}},
           nlohmann::json{{"role", "user"}, {"content", user_text}},
       })},
  };
  return req.dump();
}

std::string extract_content(const std::string& body) {
  const nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw TransportError("completion body is not valid JSON");
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransportError("completion body lacks choices[0].message.content");
  }
}

}  // namespace

std::string wrap_completion(const std::string& content) {
  const nlohmann::json j{
      {"object", "chat.completion"},
      {"choices",
       nlohmann::json::array({
           nlohmann::json{{"index", 0},
                          {"message", nlohmann::json{{"role", "assistant"}, {"content", content}}},
                          {"finish_reason", "stop"}},
       })},
  };
  return j.dump();
}

ChatReply HttpChatTransport::post(const ChatConfig& config, const std::string& request_json,
                                  const std::string& api_key) {
  httplib::Client client(config.base_url);
  if (!client.is_valid())
    throw TransportError("unusable chat endpoint \"" + config.base_url + "\"");
  client.set_connection_timeout(config.timeout_s, 0);
  client.set_read_timeout(config.timeout_s, 0);
  client.set_write_timeout(config.timeout_s, 0);
  const httplib::Headers headers{{"Authorization", "Bearer " + api_key}};
  auto res = client.Post(config.path, headers, request_json, "application/json");
  if (!res)
    throw TransportError("POST " + config.base_url + config.path +
                         " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

ScriptedChatTransport::ScriptedChatTransport(std::vector<std::string> contents) {
  replies_.reserve(contents.size());
  for (std::string& content : contents) replies_.push_back({200, wrap_completion(content)});
}

ScriptedChatTransport::ScriptedChatTransport(std::vector<ChatReply> replies)
    : replies_(std::move(replies)) {}

ChatReply ScriptedChatTransport::post(const ChatConfig&, const std::string&, const std::string&) {
  if (served_ >= replies_.size())
    throw TransportError("scripted transport exhausted after " + std::to_string(served_) +
                         " calls");
  return replies_[served_++];
}

namespace {

struct MockStateRow {
  ParagraphId id = 0;
  std::string own = "?";
};

std::vector<MockStateRow> parse_mock_state(const std::string& user_text) {
  std::vector<MockStateRow> rows;
  std::istringstream in(user_text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t idpos = line.find("'paragraph_id':");
    if (idpos == std::string::npos) continue;
    MockStateRow row;
    row.id = static_cast<ParagraphId>(std::strtoul(line.c_str() + idpos + 15, nullptr, 10));
    if (row.id == 0) continue;
    const std::size_t ownpos = line.find("'own_vote': '");
    if (ownpos != std::string::npos) {
      const std::size_t vstart = ownpos + 13;
      const std::size_t vend = line.find('\'', vstart);
      if (vend != std::string::npos) row.own = line.substr(vstart, vend - vstart);
    }
    rows.push_back(row);
  }
  return rows;
}

double parse_mock_position(const std::string& system_text) {
  const std::size_t pos = system_text.find("YOUR POSITION ON");
  if (pos == std::string::npos) return 0.5;
  const std::size_t colon = system_text.find(':', pos);
  if (colon == std::string::npos) return 0.5;
  const char* start = system_text.c_str() + colon + 1;
  char* end = nullptr;
  const double value = std::strtod(start, &end);
  return end == start ? 0.5 : value;
}

std::vector<std::string> parse_mock_examples(const std::string& user_text) {
  std::vector<std::string> out;
  std::istringstream in(user_text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t p = 0;
    while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p])) != 0) ++p;
    std::size_t d = p;
    while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d])) != 0) ++d;
    if (d == p || d + 1 >= line.size() || line[d] != '.' || line[d + 1] != ' ') continue;
    const std::size_t open = line.find('[', d);
    if (open == std::string::npos) continue;
    const std::size_t close = line.find("] ", open);
    if (close == std::string::npos) continue;
    const std::size_t endpos = line.rfind(" (Reasoning:");
    if (endpos == std::string::npos || endpos <= close + 2) continue;
    out.push_back(line.substr(close + 2, endpos - close - 2));
  }
  return out;
}

}  // namespace

std::string synthesize_mock_reply(const std::string& system_text, const std::string& user_text) {
  const std::vector<MockStateRow> rows = parse_mock_state(user_text);
  const double position = parse_mock_position(system_text);
  const std::vector<std::string> examples = parse_mock_examples(user_text);
  const std::uint64_t h = mix_seed(fnv1a(system_text), fnv1a(user_text));

  ParagraphId next = 1;
  for (const MockStateRow& row : rows) next = std::max(next, row.id + 1);

  std::vector<const MockStateRow*> open;
  std::vector<const MockStateRow*> standing;
  for (const MockStateRow& row : rows) (row.own == "?" ? open : standing).push_back(&row);

  const bool propose = rows.empty() || h % 100 < 30;
  if (propose) {
    const std::string text =
        examples.empty() ? std::string("Review municipal climate programs for cost and impact")
                         : examples[(h >> 8) % examples.size()];
    return "DECISION: PROPOSE\nPARAGRAPH ID: " + std::to_string(next) + "\nACTION DETAILS: " +
           text + "\nVOTE: UPVOTE\nREASONING: A proposal in line with my stated position";
  }
  if (!open.empty()) {
    const MockStateRow& row = *open[(h >> 8) % open.size()];
    bool up = position >= 0.5;
    if ((h >> 16) % 8 == 0) up = !up;  // occasional cross votes
    return "DECISION: VOTE\nPARAGRAPH ID: " + std::to_string(row.id) +
           "\nACTION DETAILS: Vote on paragraph " + std::to_string(row.id) + "\nVOTE: " +
           (up ? "UPVOTE" : "DOWNVOTE") + "\nREASONING: Consistent with my stated position";
  }
  const MockStateRow& row = *standing[(h >> 8) % standing.size()];
  return "DECISION: VOTE\nPARAGRAPH ID: " + std::to_string(row.id) +
         "\nACTION DETAILS: Withdraw my vote on paragraph " + std::to_string(row.id) +
         "\nVOTE: ABSTAIN\nREASONING: My support for this paragraph has weakened";
}

ChatReply MockChatTransport::post(const ChatConfig&, const std::string& request_json,
                                  const std::string&) {
  const nlohmann::json j = nlohmann::json::parse(request_json, nullptr, false);
  std::string system_text;
  std::string user_text;
  if (!j.is_discarded() && j.contains("messages") && j["messages"].is_array()) {
    for (const auto& m : j["messages"]) {
      const std::string role = m.value("role", "");
      if (role == "system") system_text = m.value("content", "");
      if (role == "user") user_text = m.value("content", "");
    }
  }
  return {200, wrap_completion(synthesize_mock_reply(system_text, user_text))};
}

ChatClient::ChatClient() : ChatClient(ChatConfig{}, std::make_shared<HttpChatTransport>()) {}

ChatClient::ChatClient(ChatConfig config)
    : ChatClient(std::move(config), std::make_shared<HttpChatTransport>()) {}

ChatClient::ChatClient(ChatConfig config, std::shared_ptr<ChatTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_) throw ConfigError("chat transport must not be null");
}

std::string ChatClient::complete(const std::string& system_text,
                                 const std::string& user_text) const {
  std::string api_key;
  if (transport_->needs_credentials()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
      throw AuthError("environment variable " + config_.api_key_env + " is not set");
    api_key = key;
  }

  const std::string request = build_request(config_, system_text, user_text);
  const int attempts = std::max(0, config_.max_retries) + 1;
  std::string last_error = "no attempt made";
  bool rate_limited = false;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && config_.backoff_ms > 0)
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(config_.backoff_ms) << (attempt - 1)));

    ChatReply reply;
    try {
      reply = transport_->post(config_, request, api_key);
    } catch (const TransportError& err) {
      last_error = err.what();
      rate_limited = false;
      continue;
    }

    if (reply.status == 200) return extract_content(reply.body);
    if (reply.status == 401 || reply.status == 403)
      throw AuthError("chat endpoint rejected the credentials (status " +
                      std::to_string(reply.status) + ")");
    if (reply.status == 429) {
      last_error = "rate limited (status 429)";
      rate_limited = true;
      continue;
    }
    if (reply.status >= 500) {
      last_error = "server error (status " + std::to_string(reply.status) + ")";
      rate_limited = false;
      continue;
    }
    throw TransportError("chat endpoint returned status " + std::to_string(reply.status));
  }

  const std::string suffix = " after " + std::to_string(attempts) + " attempts";
  if (rate_limited) throw RateLimited(last_error + suffix);
  throw TransportError(last_error + suffix);
}

std::string complete_chat(const std::string& system_text, const std::string& user_text,
                          const ChatConfig& config) {
  return ChatClient(config).complete(system_text, user_text);
}

std::string AuditRecord::to_json() const {
  nlohmann::ordered_json j;
  j["iteration"] = iteration;
  j["agent"] = agent;
  j["attempt"] = attempt;
  j["outcome"] = outcome;
  if (!violation.empty()) j["violation"] = violation;
  j["system_prompt"] = system_prompt;
  j["user_prompt"] = user_prompt;
  j["response"] = response;
  return j.dump();
}

LlmPopulation::LlmPopulation(std::vector<AgentProfile> profiles, CorpusFile corpus,
                             ChatClient client, LlmOptions options)
    : profiles_(std::move(profiles)),
      corpus_(std::move(corpus)),
      client_(std::move(client)),
      options_(std::move(options)) {
  if (profiles_.empty()) throw ConfigError("population needs at least one profile");
  for (std::size_t i = 0; i < profiles_.size(); ++i)
    if (profiles_[i].agent_id != i + 1)
      throw ConfigError("profiles must be ordered with agent ids 1..n");
  if (options_.max_reprompts < 0) throw ConfigError("max_reprompts must be nonnegative");
  if (options_.few_shot_count != 3)
    throw ConfigError("the decision prompt takes exactly 3 few-shot examples");
}

AgentAction LlmPopulation::decide(AgentId agent, const AgentView& view, Rng& rng) {
  if (agent == 0 || agent > profiles_.size())
    throw UnknownAgent("agent " + std::to_string(agent) + " is not in the population");
  const AgentProfile& profile = profiles_[agent - 1];

  const std::string system_text = render_system_prompt(profile, options_.topic);
  const std::vector<ProposalExample> shots =
      sample_few_shot(corpus_.entries, profile.category(), options_.few_shot_count, rng);
  const std::string user_text =
      render_decision_prompt(view, shots, default_action_hint(!view.paragraphs.empty()));

  std::set<ParagraphId> existing;
  for (const ParagraphInfo& info : view.paragraphs) existing.insert(info.id);

  ++iterations_;
  std::string violation;
  for (int attempt = 0; attempt <= options_.max_reprompts; ++attempt) {
    std::string prompt = user_text;
    if (attempt > 0)
      prompt += "\n\nYour previous response was rejected: " + violation +
                ". Follow the Voting Rules and the mandatory response structure exactly.";

    const std::string raw = client_.complete(system_text, prompt);

    AuditRecord record;
    record.iteration = iterations_;
    record.agent = agent;
    record.attempt = attempt;
    record.system_prompt = system_text;
    record.user_prompt = prompt;
    record.response = raw;
    try {
      const ParsedDecision parsed = parse_decision(raw);
      AgentAction action = validate_action(parsed, view.own, existing);
      record.outcome = "applied";
      audit_.push_back(std::move(record));
      return action;
    } catch (const Error& err) {
      violation = err.what();
      record.outcome = attempt < options_.max_reprompts ? "rejected" : "skipped";
      record.violation = violation;
      audit_.push_back(std::move(record));
    }
  }
  throw SkippedIteration("agent " + std::to_string(agent) + " gave no valid action in " +
                         std::to_string(options_.max_reprompts + 1) + " attempts: " + violation);
}

std::vector<AuditRecord> LlmPopulation::take_audit() {
  std::vector<AuditRecord> out = std::move(audit_);
  audit_.clear();
  return out;
}

}  // namespace ccr
