#include "tbfact/cache.hpp"

#include <fstream>

#include "tbfact/corpus_io.hpp"

namespace tbfact {

JudgeCache::JudgeCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoFailure("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::string JudgeCache::key_of(const JudgeRequest& request) {
  nlohmann::json canonical = {
      {"task", to_string(request.task)},
      {"template", request.prompt_template_id},
      {"model", request.model_id},
      {"temperature", request.temperature},
      {"payload", request.payload},
  };
  return sha256_hex(canonical.dump());
}

namespace {

nlohmann::json response_json(const JudgeResponse& response) {
  return {{"structured", response.structured},
          {"raw", response.raw},
          {"parse_ok", response.parse_ok}};
}

}  // namespace

std::optional<JudgeResponse> JudgeCache::load(const std::string& key) const {
  std::filesystem::path file = dir_ / (key + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    stats_.misses.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
  try {
    nlohmann::json entry = nlohmann::json::parse(in);
    const auto& resp = entry.at("response");
    if (entry.at("checksum").get<std::string>() != sha256_hex(resp.dump())) {
      stats_.corrupt.fetch_add(1, std::memory_order_relaxed);
      stats_.misses.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    JudgeResponse out;
    out.structured = resp.at("structured");
    out.raw = resp.at("raw").get<std::string>();
    out.parse_ok = resp.at("parse_ok").get<bool>();
    stats_.hits.fetch_add(1, std::memory_order_relaxed);
    return out;
  } catch (const nlohmann::json::exception&) {
    stats_.corrupt.fetch_add(1, std::memory_order_relaxed);
    stats_.misses.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
}

void JudgeCache::store(const std::string& key, const JudgeRequest& request,
                       const JudgeResponse& response) const {
  nlohmann::json resp = response_json(response);
  nlohmann::json entry = {
      {"key", key},
      {"task", to_string(request.task)},
      {"template", request.prompt_template_id},
      {"model", request.model_id},
      {"temperature", request.temperature},
      {"response", resp},
      {"checksum", sha256_hex(resp.dump())},
  };
  write_file_atomic(dir_ / (key + ".json"), entry.dump(2) + "\n");
}

JudgeResponse cached_call(const JudgeRequest& request, JudgeBackend& backend,
                          const JudgeCache& cache) {
  std::string key = JudgeCache::key_of(request);
  if (auto hit = cache.load(key)) return *hit;
  JudgeResponse response = backend.invoke(request);
  if (response.parse_ok) cache.store(key, request, response);
  return response;
}

}  // namespace tbfact
