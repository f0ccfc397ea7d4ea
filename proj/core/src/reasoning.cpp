#include "scrap/reasoning.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <set>
#include <thread>

#include "scrap/dataset.h"

namespace scrap {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

ReasoningCache::ReasoningCache(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<ReasoningPath> ReasoningCache::lookup(int sentence_id, int n) const {
  std::vector<ReasoningPath> out;
  if (!std::filesystem::exists(path_)) return out;
  const auto records = read_records(path_);
  for (size_t i = 0; i < records.size(); ++i) {
    const Record& record = records[i];
    if (!record.contains("sentence_id") || !record.contains("reasoning_index") ||
        !record.contains("reasoning_text")) {
      throw std::runtime_error("record " + std::to_string(i + 1) + ": missing cache fields (" +
                               path_.filename().string() + ")");
    }
    if (record["sentence_id"].get<int>() != sentence_id) continue;
    const int index = record["reasoning_index"].get<int>();
    if (index < 0 || index >= n) continue;
    out.push_back({sentence_id, index, record["reasoning_text"].get<std::string>()});
  }
  std::sort(out.begin(), out.end(),
            [](const ReasoningPath& a, const ReasoningPath& b) { return a.index < b.index; });
  // A rewritten cache may hold the same index twice; the latest entry wins.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ReasoningPath& a, const ReasoningPath& b) {
                          return a.index == b.index;
                        }),
            out.end());
  return out;
}

void ReasoningCache::append(const ReasoningPath& path, const std::string& sentence,
                            const std::string& generator_model) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  Record record;
  record["sentence_id"] = path.sentence_id;
  record["sentence"] = sentence;
  record["reasoning_index"] = path.index;
  record["reasoning_text"] = path.text;
  record["generator_model"] = generator_model;
  record["timestamp"] = utc_timestamp();
  append_records(path_, {record});
}

GenerationResult generate_reasonings(const Example& example, const GeneratorConfig& config,
                                     LlmClient& client, ReasoningCache* cache,
                                     const PromptTemplate& tmpl) {
  if (config.n_paths < 1) {
    throw std::invalid_argument("generate_reasonings: n_paths must be >= 1");
  }

  GenerationResult result;
  std::vector<std::optional<ReasoningPath>> slots(config.n_paths);
  if (cache != nullptr) {
    for (auto& path : cache->lookup(example.sentence_id, config.n_paths)) {
      slots[path.index] = std::move(path);
    }
  }

  std::vector<int> missing;
  for (int i = 0; i < config.n_paths; ++i) {
    if (!slots[i]) missing.push_back(i);
  }

  std::atomic<int> calls{0};
  if (!missing.empty()) {
    const std::string prompt = build_prompt(example, tmpl);
    std::mutex slot_mutex;
    std::vector<std::string> failures;

    auto worker = [&](int index) {
      std::string text;
      for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        calls.fetch_add(1);
        text = normalize_term(client.complete(prompt, config.sampling_temperature));
        if (!text.empty()) break;
      }
      std::lock_guard<std::mutex> lock(slot_mutex);
      if (text.empty()) {
        failures.push_back("path " + std::to_string(index) + " empty after " +
                           std::to_string(config.max_retries + 1) + " attempts");
        return;
      }
      ReasoningPath path{example.sentence_id, index, std::move(text)};
      if (cache != nullptr) cache->append(path, example.sentence, client.model_name());
      slots[index] = std::move(path);
    };

    const int threads = std::clamp(config.parallelism, 1, static_cast<int>(missing.size()));
    if (threads <= 1) {
      for (int index : missing) worker(index);
    } else {
      std::atomic<size_t> cursor{0};
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          while (true) {
            const size_t at = cursor.fetch_add(1);
            if (at >= missing.size()) return;
            worker(missing[at]);
          }
        });
      }
      for (auto& thread : pool) thread.join();
    }

    if (!failures.empty()) {
      int completed = 0;
      for (const auto& slot : slots) completed += slot.has_value() ? 1 : 0;
      throw GenerationError("reasoning generation failed for sentence " +
                                std::to_string(example.sentence_id) + ": " + failures.front() +
                                " (" + std::to_string(completed) + "/" +
                                std::to_string(config.n_paths) + " completed)",
                            completed);
    }
  }

  result.client_calls = calls.load();
  std::set<std::string> distinct;
  for (auto& slot : slots) {
    if (!distinct.insert(slot->text).second) ++result.duplicate_texts;
    result.paths.push_back(std::move(*slot));
  }
  return result;
}

}  // namespace scrap
