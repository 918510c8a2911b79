#include "tbfact/extraction.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "tbfact/prompts.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

namespace {

// Leading verbs that mark a sentence as an instruction rather than a
// verifiable statement. Checked against the first alphabetic token only;
// deliberately conservative (no "follow": follow-up is everywhere).
const std::unordered_set<std::string>& imperative_leads() {
  static const std::unordered_set<std::string> kLeads = {
      "continue", "monitor", "check",  "schedule", "ensure",    "avoid",
      "obtain",   "order",   "consider", "start",  "stop",      "hold",
      "discuss",  "review",  "repeat", "assess",   "refer",     "recommend",
      "please",   "evaluate"};
  return kLeads;
}

const std::unordered_set<std::string>& anaphora_leads() {
  static const std::unordered_set<std::string> kLeads = {
      "this", "that", "these", "those", "it", "he", "she", "they"};
  return kLeads;
}

bool token_has_alpha(const std::string& t) {
  return std::any_of(t.begin(), t.end(), [](unsigned char c) {
    return std::isalpha(c) || c >= 0x80;
  });
}

// First token containing a letter; date prefixes are numeric and skipped.
std::optional<std::string> first_alpha_token(const std::vector<std::string>& toks) {
  for (const auto& t : toks) {
    if (token_has_alpha(t)) return t;
  }
  return std::nullopt;
}

std::optional<std::string> rejection_reason(const std::string& claim_text) {
  if (claim_text.find('?') != std::string::npos) {
    return "interrogative: contains a question mark";
  }
  auto toks = text::tokens(claim_text);
  if (toks.empty()) return "empty after normalization";

  if (auto lead = first_alpha_token(toks)) {
    if (imperative_leads().count(*lead)) {
      return "imperative opener '" + *lead + "': not a declarative statement";
    }
    if (anaphora_leads().count(*lead)) {
      return "anaphoric subject '" + *lead + "': claim is not self-contained";
    }
  }
  if (text::contains_phrase(claim_text, "the latter") ||
      text::contains_phrase(claim_text, "the former")) {
    return "anaphoric reference: claim is not self-contained";
  }

  int conjunctions = 0;
  for (const auto& t : toks) {
    if (t == "and" || t == "or" || t == "but" || t == "nor" || t == "yet") ++conjunctions;
  }
  if (conjunctions > 2) {
    return "compound: more than two coordinating conjunctions";
  }
  return std::nullopt;
}

struct Chunk {
  std::string prefix;  // repeated heading context, possibly empty
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Chunk> chunk_summary(const std::string& doc, std::size_t token_budget) {
  if (text::rough_token_count(doc) <= token_budget) {
    return {{"", 0, doc.size()}};
  }

  // blocks = maximal runs of non-blank lines; heading context tracked per block
  struct Block {
    std::size_t begin, end, tokens;
    std::string heading_before;
  };
  std::vector<Block> blocks;
  std::string heading;
  std::size_t pos = 0;
  std::optional<Block> open;
  auto close = [&] {
    if (open) {
      blocks.push_back(*open);
      open.reset();
    }
  };
  while (pos <= doc.size()) {
    std::size_t eol = doc.find('\n', pos);
    if (eol == std::string::npos) eol = doc.size();
    std::string line = doc.substr(pos, eol - pos);
    std::string trimmed = text::trim(line);
    if (trimmed.empty()) {
      close();
    } else {
      bool heading_line = (!trimmed.empty() && trimmed.front() == '#') ||
                          (trimmed.back() == ':' && trimmed.find(';') == std::string::npos &&
                           text::rough_token_count(trimmed) <= 6);
      if (heading_line) {
        close();
        heading = trimmed;
        blocks.push_back({pos, eol, text::rough_token_count(line), ""});
      } else {
        if (!open) open = Block{pos, eol, 0, heading};
        open->end = eol;
        open->tokens += text::rough_token_count(line);
      }
    }
    if (eol == doc.size()) break;
    pos = eol + 1;
  }
  close();

  std::vector<Chunk> chunks;
  std::size_t chunk_tokens = 0;
  std::optional<Chunk> cur;
  std::string cur_lead_heading;
  for (const auto& b : blocks) {
    if (cur && chunk_tokens + b.tokens > token_budget) {
      chunks.push_back(*cur);
      cur.reset();
      chunk_tokens = 0;
    }
    if (!cur) {
      cur = Chunk{"", b.begin, b.end};
      cur_lead_heading = b.heading_before;
      if (!cur_lead_heading.empty()) cur->prefix = cur_lead_heading + "\n";
    }
    cur->end = b.end;
    chunk_tokens += b.tokens;
  }
  if (cur) chunks.push_back(*cur);
  if (chunks.empty()) chunks.push_back({"", 0, doc.size()});
  return chunks;
}

struct ParsedCandidate {
  std::string claim_text;
  std::optional<SourceSpan> provenance;
};

std::vector<ParsedCandidate> parse_extract_response(const JudgeResponse& resp,
                                                    const Chunk& chunk) {
  if (!resp.parse_ok) {
    throw ParseFailure("claim extraction: judge output not parseable; raw: " +
                       resp.raw.substr(0, 200));
  }
  const auto& claims = resp.structured.at("claims");
  if (!claims.is_array()) throw ParseFailure("claim extraction: 'claims' is not an array");

  std::vector<ParsedCandidate> out;
  out.reserve(claims.size());
  for (const auto& item : claims) {
    ParsedCandidate pc;
    pc.claim_text = text::trim(item.at("text").get<std::string>());
    if (item.contains("begin") && item.contains("end")) {
      auto b = item.at("begin").get<std::size_t>();
      auto e = item.at("end").get<std::size_t>();
      // spans are chunk-relative; drop those inside the repeated heading
      if (b >= chunk.prefix.size() && e >= b) {
        pc.provenance = SourceSpan{chunk.begin + b - chunk.prefix.size(),
                                   chunk.begin + e - chunk.prefix.size()};
      }
    }
    out.push_back(std::move(pc));
  }
  return out;
}

std::string short_source(ClaimSource s) {
  return s == ClaimSource::Candidate ? "cand" : "ref";
}

}  // namespace

ExtractionResult extract_claims(const std::string& summary, ClaimSource source,
                                JudgeBackend& backend, const ExtractOptions& options) {
  if (text::trim(summary).empty()) {
    throw std::invalid_argument("extract_claims: summary must be non-empty");
  }

  auto chunks = chunk_summary(summary, options.chunk_token_budget);
  std::vector<std::vector<ParsedCandidate>> per_chunk(chunks.size());
  parallel_for(chunks.size(), options.concurrency, [&](std::size_t i) {
    const Chunk& chunk = chunks[i];
    JudgeRequest req;
    req.task = JudgeTask::ExtractClaims;
    req.prompt_template_id = prompts::kExtractTemplateId;
    req.payload = {{"text", chunk.prefix + summary.substr(chunk.begin, chunk.end - chunk.begin)}};
    req.temperature = options.temperature;
    req.model_id = options.model_id;
    per_chunk[i] = parse_extract_response(backend.invoke(req), chunk);
  });

  ExtractionResult result;
  std::unordered_set<std::string> seen;
  std::size_t seq = 0;
  const std::string id_prefix =
      (options.patient_id.empty() ? std::string("claim") : options.patient_id) + "/" +
      short_source(source) + "/";

  for (const auto& chunk_claims : per_chunk) {
    for (const auto& pc : chunk_claims) {
      if (pc.claim_text.empty()) {
        result.rejected.push_back({pc.claim_text, "empty after normalization"});
        continue;
      }
      if (auto reason = rejection_reason(pc.claim_text)) {
        result.rejected.push_back({pc.claim_text, *reason});
        continue;
      }
      std::string key = text::normalize(pc.claim_text);
      if (!seen.insert(key).second) continue;  // dedup by normalized text

      ClinicalClaim claim;
      char num[8];
      std::snprintf(num, sizeof(num), "%03zu", ++seq);
      claim.id = id_prefix + num;
      claim.text = pc.claim_text;
      claim.source = source;
      claim.patient_id = options.patient_id;
      claim.provenance = pc.provenance;
      if (!claim.provenance) {
        // judges that return no spans: best-effort first occurrence
        auto at = summary.find(pc.claim_text);
        if (at != std::string::npos) {
          claim.provenance = SourceSpan{at, at + pc.claim_text.size()};
        }
      }
      result.claims.push_back(std::move(claim));
    }
  }

  if (result.claims.empty()) {
    result.warnings.push_back("extraction produced zero accepted claims from a non-empty summary");
  }
  return result;
}

ExtractionResult mock_extract(const std::string& summary, ClaimSource source,
                              const std::string& patient_id) {
  OracleBackend oracle;
  ExtractOptions options;
  options.patient_id = patient_id;
  return extract_claims(summary, source, oracle, options);
}

namespace detail {

nlohmann::json mock_standardize_json(const std::string& doc) {
  nlohmann::json events = nlohmann::json::array();
  std::string narrative;
  for (const auto& cand : text::claim_candidates(doc)) {
    if (auto d = text::first_date(cand.text)) {
      events.push_back({{"date", d->iso()}, {"text", cand.text}});
    } else {
      if (!narrative.empty()) narrative += " ";
      narrative += cand.text;
    }
  }
  nlohmann::json warnings = nlohmann::json::array();
  if (events.empty()) warnings.push_back("no dated events found; timeline is empty");
  return {{"narrative", narrative}, {"events", std::move(events)}, {"warnings", std::move(warnings)}};
}

}  // namespace detail

StandardizedSummary standardize_summary(const std::string& raw_summary,
                                        JudgeBackend& backend, const JudgeOptions& options) {
  if (text::trim(raw_summary).empty()) {
    throw std::invalid_argument("standardize_summary: input must be non-empty");
  }

  JudgeRequest req;
  req.task = JudgeTask::StandardizeSummary;
  req.prompt_template_id = prompts::kStandardizeTemplateId;
  req.payload = {{"text", raw_summary}};
  req.temperature = options.temperature;
  req.model_id = options.model_id;

  JudgeResponse resp = backend.invoke(req);
  if (!resp.parse_ok) {
    throw ParseFailure("standardize: judge output not parseable; raw: " + resp.raw.substr(0, 200));
  }

  struct Event {
    text::DateToken date;
    std::string line;
  };
  std::vector<Event> events;
  for (const auto& ev : resp.structured.at("events")) {
    std::string line = text::trim(ev.at("text").get<std::string>());
    auto date = text::first_date(ev.value("date", ""));
    if (!date) date = text::first_date(line);
    if (!date) throw ParseFailure("standardize: event without a parseable date: " + line);
    if (!text::first_date(line)) line = date->iso() + ": " + line;
    events.push_back({*date, std::move(line)});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.date.ordinal() < b.date.ordinal(); });

  // every dated event in the input must surface in the timeline
  std::unordered_set<long> timeline_dates;
  for (const auto& ev : events) timeline_dates.insert(ev.date.ordinal());
  for (const auto& d : text::all_dates(raw_summary)) {
    if (!timeline_dates.count(d.ordinal())) {
      throw ParseFailure("standardize: dated event " + d.raw + " missing from the timeline");
    }
  }

  StandardizedSummary out;
  std::string narrative = text::trim(resp.structured.value("narrative", ""));
  out.text = narrative;
  out.text += "\n\nTimeline:\n";
  for (const auto& ev : events) out.text += "- " + ev.line + "\n";
  if (resp.structured.contains("warnings")) {
    for (const auto& w : resp.structured.at("warnings")) {
      out.warnings.push_back(w.get<std::string>());
    }
  }
  if (narrative.empty()) out.warnings.push_back("no undated content; narrative is empty");
  return out;
}

}  // namespace tbfact
