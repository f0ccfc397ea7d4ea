#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "scrap/prompt.h"
#include "scrap/quad.h"

namespace scrap {

// One harvested rationale for a training sentence.
struct ReasoningPath {
  int sentence_id = -1;
  int index = 0;  // position within [0, n_paths)
  std::string text;
};

struct GeneratorConfig {
  int n_paths = 16;
  double sampling_temperature = 1.0;
  int max_retries = 3;
  std::string endpoint;                       // opaque descriptor; empty selects the stub
  std::string model = "stub";
  std::string api_key_env = "SCRAP_API_KEY";  // credential variable name, never a value
  int parallelism = 1;
};

// Abstract completion endpoint. Implementations must be safe to call from
// multiple threads.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt, double temperature) = 0;
  virtual std::string model_name() const = 0;
};

// Deterministic offline client. By default it reads the query block back
// out of the prompt and synthesizes an extract-then-assign rationale for
// it; a scripted instance replays canned completions in order instead.
class StubLlmClient : public LlmClient {
 public:
  StubLlmClient() = default;
  explicit StubLlmClient(std::vector<std::string> scripted);

  std::string complete(const std::string& prompt, double temperature) override;
  std::string model_name() const override { return "stub"; }

  int call_count() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> scripted_;
  size_t script_cursor_ = 0;
  int calls_ = 0;
  std::unordered_map<std::string, int> per_prompt_calls_;
};

// OpenAI-style chat-completions client over HTTP(S). The bearer token is
// read from the environment variable named in the config at call time.
std::unique_ptr<LlmClient> make_http_llm_client(const GeneratorConfig& config);

// Selects stub or HTTP client from the config.
std::unique_ptr<LlmClient> make_llm_client(const GeneratorConfig& config);

// Durable cache of harvested paths, one JSON record per line with fields
// sentence_id, sentence, reasoning_index, reasoning_text, generator_model,
// timestamp. Appends are serialized through one writer.
class ReasoningCache {
 public:
  explicit ReasoningCache(std::filesystem::path path);

  // Cached paths for a sentence with index < n, sorted by index. Gaps are
  // the caller's problem; an absent cache file yields an empty list.
  std::vector<ReasoningPath> lookup(int sentence_id, int n) const;

  void append(const ReasoningPath& path, const std::string& sentence,
              const std::string& generator_model);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex write_mutex_;
};

// Raised when the endpoint keeps failing; completed paths stay cached.
class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, int completed)
      : std::runtime_error(what), completed_paths(completed) {}
  int completed_paths;
};

struct GenerationResult {
  std::vector<ReasoningPath> paths;  // exactly n_paths, sorted by index
  int duplicate_texts = 0;           // exact duplicates among the n (retained)
  int client_calls = 0;
};

// Returns exactly config.n_paths rationales for the example, reusing the
// cache and sampling the missing indices (concurrently up to
// config.parallelism). Empty completions are resampled up to
// config.max_retries times before the whole operation fails.
GenerationResult generate_reasonings(const Example& example, const GeneratorConfig& config,
                                     LlmClient& client, ReasoningCache* cache = nullptr,
                                     const PromptTemplate& tmpl = default_prompt_template());

}  // namespace scrap
