#include "scrap/stub_backend.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scrap/quad.h"

namespace scrap {

namespace {

struct StubState : ModelState {
  std::unordered_map<std::string, std::string> memorized;  // first target per input
};

const StubState& state_of(const ModelHandle& model) {
  auto* state = dynamic_cast<const StubState*>(model.state.get());
  if (state == nullptr) {
    throw std::invalid_argument("stub backend: handle was not produced by this backend");
  }
  return *state;
}

size_t count_tokens(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  size_t n = 0;
  while (in >> token) ++n;
  return n;
}

}  // namespace

ModelHandle StubBackend::train(const std::vector<TrainingPair>& pairs,
                               const TrainConfig& config) const {
  validate_train_config(config);
  if (pairs.empty()) throw std::invalid_argument("train: no training pairs");
  train_calls_.fetch_add(1);

  auto state = std::make_shared<StubState>();
  for (const auto& pair : pairs) {
    state->memorized.emplace(normalize_term(pair.input_text), pair.target_text);
  }

  ModelHandle handle;
  handle.state = std::move(state);
  handle.provenance = {config, digest_pairs(pairs), pairs.size(), name()};
  return handle;
}

std::vector<std::string> StubBackend::sample(const ModelHandle& model,
                                             const std::string& input_text, int k,
                                             double temperature) const {
  if (k < 1) throw std::invalid_argument("sample: k must be >= 1");
  if (temperature <= 0.0) throw std::invalid_argument("sample: temperature must be > 0");
  sample_calls_.fetch_add(1);

  const auto& state = state_of(model);
  const std::string key = normalize_term(input_text);
  std::vector<std::string> out;
  out.reserve(k);
  if (auto scripted = script_.find(key); scripted != script_.end() && !scripted->second.empty()) {
    for (int i = 0; i < k; ++i) out.push_back(scripted->second[i % scripted->second.size()]);
    return out;
  }
  auto memorized = state.memorized.find(key);
  const std::string echo =
      (memorized != state.memorized.end()) ? memorized->second : std::string();
  for (int i = 0; i < k; ++i) out.push_back(echo);
  return out;
}

double StubBackend::score_target(const ModelHandle& model, const std::string& input_text,
                                 const std::string& target_text) const {
  if (count_tokens(target_text) == 0) throw std::invalid_argument("score_target: empty target");
  state_of(model);  // handle sanity
  score_calls_.fetch_add(1);
  if (score_rule_) return score_rule_(input_text, target_text);
  return 0.01 * static_cast<double>(count_tokens(target_text));
}

void StubBackend::save(const ModelHandle& model, const std::filesystem::path& dir) const {
  const auto& state = state_of(model);
  std::filesystem::create_directories(dir);

  nlohmann::json doc;
  doc["type"] = name();
  nlohmann::json memorized = nlohmann::json::array();
  std::vector<std::string> keys;
  for (const auto& [input, target] : state.memorized) keys.push_back(input);
  std::sort(keys.begin(), keys.end());
  for (const auto& key : keys) {
    memorized.push_back({{"input", key}, {"target", state.memorized.at(key)}});
  }
  doc["memorized"] = std::move(memorized);
  doc["manifest"] = {{"backend", model.provenance.backend},
                     {"pair_digest", model.provenance.pair_digest},
                     {"pair_count", model.provenance.pair_count},
                     {"seed", model.provenance.config.seed},
                     {"epochs", model.provenance.config.epochs},
                     {"batch_size", model.provenance.config.batch_size},
                     {"learning_rate", model.provenance.config.learning_rate},
                     {"max_target_length", model.provenance.config.max_target_length}};

  std::ofstream out(dir / "model.json", std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model to " + dir.string());
  out << doc.dump(2) << '\n';
}

ModelHandle StubBackend::load(const std::filesystem::path& dir) const {
  std::ifstream in(dir / "model.json");
  if (!in) throw std::runtime_error("no model found in " + dir.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.value("type", "") != name()) {
    throw std::runtime_error("model in " + dir.string() + " was not saved by the stub backend");
  }

  auto state = std::make_shared<StubState>();
  for (const auto& entry : doc["memorized"]) {
    state->memorized[entry["input"].get<std::string>()] = entry["target"].get<std::string>();
  }

  ModelHandle handle;
  handle.state = std::move(state);
  const auto& manifest = doc["manifest"];
  handle.provenance.backend = manifest.value("backend", name());
  handle.provenance.pair_digest = manifest.value("pair_digest", "");
  handle.provenance.pair_count = manifest.value("pair_count", 0u);
  handle.provenance.config.seed = manifest.value("seed", 0u);
  handle.provenance.config.epochs = manifest.value("epochs", 20);
  handle.provenance.config.batch_size = manifest.value("batch_size", 16);
  handle.provenance.config.learning_rate = manifest.value("learning_rate", 3e-5);
  handle.provenance.config.max_target_length = manifest.value("max_target_length", 512);
  return handle;
}

}  // namespace scrap
