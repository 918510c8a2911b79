#include "tbfact/remote.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "tbfact/prompts.hpp"
#include "tbfact/text.hpp"

namespace tbfact {

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string payload_field(const nlohmann::json& payload, const char* key) {
  if (!payload.contains(key)) return "";
  const auto& v = payload.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    // numbered list, one item per line, JSON-escaped to stay unambiguous
    std::string out;
    std::size_t i = 0;
    for (const auto& item : v) {
      out += std::to_string(++i) + ". " +
             (item.is_string() ? item.get<std::string>() : item.dump()) + "\n";
    }
    return out;
  }
  return v.dump();
}

std::string render_prompt(const JudgeRequest& request) {
  std::string rendered;
  if (request.task == JudgeTask::ClassifyImportance && request.payload.contains("rubric")) {
    // the rubric itself is the prompt; claims fill its placeholder or append
    std::string rubric = request.payload.at("rubric").get<std::string>();
    std::string claims = payload_field(request.payload, "claims");
    if (rubric.find("{{claims}}") != std::string::npos) {
      return replace_all(rubric, "{{claims}}", claims);
    }
    return rubric + "\n\nClaims:\n" + claims;
  }
  rendered = prompts::template_text(request.prompt_template_id);
  rendered = replace_all(rendered, "{{text}}", payload_field(request.payload, "text"));
  rendered = replace_all(rendered, "{{target}}", payload_field(request.payload, "target"));
  rendered = replace_all(rendered, "{{facts}}", payload_field(request.payload, "facts"));
  rendered = replace_all(rendered, "{{claims}}", payload_field(request.payload, "claims"));
  return rendered;
}

// Task-specific shape checks; a failure here triggers the single reprompt.
bool conforms(const JudgeRequest& request, const nlohmann::json& structured) {
  try {
    switch (request.task) {
      case JudgeTask::ExtractClaims: {
        const auto& claims = structured.at("claims");
        if (!claims.is_array()) return false;
        for (const auto& c : claims) {
          if (!c.at("text").is_string()) return false;
        }
        return true;
      }
      case JudgeTask::ClassifyImportance: {
        const auto& labels = structured.at("labels");
        if (!labels.is_array()) return false;
        if (labels.size() != request.payload.at("claims").size()) return false;
        for (const auto& l : labels) {
          std::string s = l.at("label").get<std::string>();
          if (s != "High" && s != "Medium" && s != "Low") return false;
        }
        return true;
      }
      case JudgeTask::JudgeEntailment: {
        const auto& labels = structured.at("labels");
        if (!labels.is_array()) return false;
        if (labels.size() != request.payload.at("facts").size()) return false;
        for (const auto& l : labels) {
          std::string s = l.at("label").get<std::string>();
          if (s != "Yes" && s != "No" && s != "Partial") return false;
          if (s != "Yes" && text::trim(l.value("rationale", "")).empty()) return false;
        }
        return true;
      }
      case JudgeTask::StandardizeSummary: {
        if (!structured.at("narrative").is_string()) return false;
        const auto& events = structured.at("events");
        if (!events.is_array()) return false;
        for (const auto& e : events) {
          if (!e.at("date").is_string() || !e.at("text").is_string()) return false;
        }
        return true;
      }
    }
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  return false;
}

}  // namespace

RemoteConfig RemoteConfig::from_env() {
  RemoteConfig cfg;
  cfg.endpoint = env_or_empty("TBFACT_ENDPOINT");
  cfg.api_key = env_or_empty("TBFACT_API_KEY");
  cfg.model = env_or_empty("TBFACT_MODEL");
  return cfg;
}

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw ConfigMismatch("remote backend requires an endpoint (flag or TBFACT_ENDPOINT)");
  }
  if (config_.model.empty()) {
    throw ConfigMismatch("remote backend requires a model (flag or TBFACT_MODEL)");
  }
  std::string rest = config_.endpoint;
  auto scheme_end = rest.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = rest.find('/', host_start);
  if (path_start == std::string::npos) {
    base_ = rest;
    path_ = "/v1/chat/completions";
  } else {
    base_ = rest.substr(0, path_start);
    path_ = rest.substr(path_start);
    if (path_ == "/") path_ = "/v1/chat/completions";
  }
}

std::string RemoteBackend::id() const { return "remote:" + config_.model; }

std::string RemoteBackend::post_chat(const nlohmann::json& body) const {
  httplib::Client client(base_);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
    headers.emplace("api-key", config_.api_key);
  }

  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else if (res->status >= 400) {
      throw BackendUnreachable("judge endpoint rejected the request: HTTP " +
                               std::to_string(res->status) + " " + res->body.substr(0, 200));
    } else {
      return res->body;
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(250 * attempt));
    }
  }
  throw BackendUnreachable("judge endpoint unreachable after " +
                           std::to_string(config_.max_attempts) + " attempts: " + last_error);
}

JudgeResponse RemoteBackend::invoke(const JudgeRequest& request) {
  const std::string model = request.model_id.empty() ? config_.model : request.model_id;
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "user"}, {"content", render_prompt(request)}});

  JudgeResponse out;
  for (int round = 0; round < 2; ++round) {
    nlohmann::json body = {
        {"model", model},
        {"temperature", request.temperature},
        {"messages", messages},
        {"response_format", {{"type", "json_object"}}},
    };
    std::string raw = post_chat(body);

    std::string content;
    try {
      auto envelope = nlohmann::json::parse(raw);
      content = envelope.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseFailure(std::string("malformed chat-completion envelope: ") + e.what() +
                         "; body: " + raw.substr(0, 200));
    }

    out.raw = content;
    try {
      nlohmann::json structured = nlohmann::json::parse(content);
      if (conforms(request, structured)) {
        out.structured = std::move(structured);
        out.parse_ok = true;
        return out;
      }
    } catch (const nlohmann::json::exception&) {
      // fall through to the reprompt
    }

    messages.push_back({{"role", "assistant"}, {"content", content}});
    messages.push_back({{"role", "user"},
                        {"content",
                         "Your previous reply did not conform to the required JSON schema. "
                         "Reply again with only the JSON object, one entry per input item, "
                         "using the exact labels requested."}});
  }
  out.parse_ok = false;
  return out;
}

}  // namespace tbfact
