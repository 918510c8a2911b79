#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>

#include "tbfact/judge.hpp"

namespace tbfact {

struct CacheStats {
  std::atomic<std::size_t> hits{0};
  std::atomic<std::size_t> misses{0};
  std::atomic<std::size_t> corrupt{0};
};

// Content-addressed response store: one JSON document per key under a
// directory, with a checksum over the response body. Entries that fail the
// checksum count as misses and are replaced on the next store.
class JudgeCache {
 public:
  explicit JudgeCache(std::filesystem::path dir);

  // Digest over (task, prompt template, model, temperature, canonical
  // payload); any payload difference changes the key.
  static std::string key_of(const JudgeRequest& request);

  std::optional<JudgeResponse> load(const std::string& key) const;
  void store(const std::string& key, const JudgeRequest& request,
             const JudgeResponse& response) const;

  const CacheStats& stats() const { return stats_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable CacheStats stats_;
};

// Returns the cached response when present; otherwise invokes the backend
// and stores the result. Only parseable responses are persisted, so a
// failed parse is retried on the next run instead of being pinned.
JudgeResponse cached_call(const JudgeRequest& request, JudgeBackend& backend,
                          const JudgeCache& cache);

class CachingBackend : public JudgeBackend {
 public:
  CachingBackend(JudgeBackend& inner, std::filesystem::path dir)
      : inner_(inner), cache_(std::move(dir)) {}

  std::string id() const override { return inner_.id(); }

  JudgeResponse invoke(const JudgeRequest& request) override {
    return cached_call(request, inner_, cache_);
  }

  const JudgeCache& cache() const { return cache_; }

 private:
  JudgeBackend& inner_;
  JudgeCache cache_;
};

}  // namespace tbfact
