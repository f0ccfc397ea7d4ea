#include "scrap/backend.h"

#include <cstdio>
#include <stdexcept>

#include "scrap/count_backend.h"
#include "scrap/digest.h"
#include "scrap/stub_backend.h"

namespace scrap {

std::string hex_digest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void validate_train_config(const TrainConfig& config) {
  if (config.epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
  if (config.learning_rate <= 0.0) {
    throw std::invalid_argument("train config: learning_rate must be > 0");
  }
  if (config.max_target_length < 1) {
    throw std::invalid_argument("train config: max_target_length must be >= 1");
  }
}

std::string digest_pairs(const std::vector<TrainingPair>& pairs) {
  uint64_t h = kFnvOffset;
  for (const auto& pair : pairs) {
    h = fnv1a64(pair.input_text, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(pair.target_text, h);
    h = fnv1a64("\x1e", h);
  }
  return hex_digest(h);
}

std::unique_ptr<Seq2SeqBackend> make_backend(const std::string& key) {
  if (key == "stub") return std::make_unique<StubBackend>();
  if (key == "real" || key == "count") return std::make_unique<CountBackend>();
  throw std::invalid_argument("unknown backend '" + key + "' (expected stub or real)");
}

}  // namespace scrap
