#pragma once

#include <string>

#include "tbfact/judge.hpp"

namespace tbfact {

struct RemoteConfig {
  std::string endpoint;  // base URL; a path component overrides the default
  std::string api_key;
  std::string model;     // default model when a request names none
  int max_attempts = 3;  // transport attempts before BackendUnreachable
  int timeout_seconds = 120;

  // Reads TBFACT_ENDPOINT, TBFACT_API_KEY, TBFACT_MODEL.
  static RemoteConfig from_env();
};

// Chat-completion judge over HTTP(S). Prompts instruct structured JSON
// output; a non-conformant reply earns one corrective reprompt, after which
// the response is returned with parse_ok = false and callers fail loudly.
class RemoteBackend : public JudgeBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);

  std::string id() const override;
  JudgeResponse invoke(const JudgeRequest& request) override;

 private:
  std::string post_chat(const nlohmann::json& body) const;

  RemoteConfig config_;
  std::string base_;  // scheme://host[:port]
  std::string path_;  // request path, default /v1/chat/completions
};

}  // namespace tbfact
