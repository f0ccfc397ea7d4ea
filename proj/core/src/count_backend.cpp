#include "scrap/count_backend.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "scrap/digest.h"
#include "scrap/quad.h"

namespace scrap {

namespace {

constexpr int kUnkId = 0;
constexpr int kBosId = 1;
constexpr int kEosId = 2;
constexpr int kFirstTokenId = 3;
constexpr int kLevels = 5;
constexpr double kLambdaFloor = 1e-4;
constexpr double kLambdaCap = 0.995;
constexpr uint64_t kPrefixSalt = 0x9e3779b97f4a7c15ull;

struct ContextDist {
  uint64_t total = 0;
  std::vector<std::pair<int, uint64_t>> items;  // sorted by token id

  double ml(int token) const {
    auto it = std::lower_bound(items.begin(), items.end(), token,
                               [](const auto& a, int b) { return a.first < b; });
    if (it == items.end() || it->first != token) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total);
  }
};

using ContextTable = std::unordered_map<uint64_t, ContextDist>;

struct CountState : ModelState {
  std::vector<std::string> vocab;  // textual tokens, id = index + kFirstTokenId
  std::unordered_map<std::string, int> token_ids;
  ContextDist unigram;                          // level 1
  std::array<ContextTable, 4> context_levels;   // levels 2..5
  std::array<double, kLevels> lambdas{};
  uint64_t seed = 0;
  int max_target_length = 512;

  int vocab_size() const { return static_cast<int>(vocab.size()) + kFirstTokenId; }
  // Every id except <s> may be predicted.
  int predictable() const { return vocab_size() - 1; }

  int token_id(const std::string& token) const {
    auto it = token_ids.find(token);
    return it == token_ids.end() ? kUnkId : it->second;
  }
  const std::string& token_text(int id) const {
    static const std::string kUnk = "<unk>";
    static const std::string kBos = "<s>";
    static const std::string kEos = "</s>";
    if (id == kUnkId) return kUnk;
    if (id == kBosId) return kBos;
    if (id == kEosId) return kEos;
    return vocab[static_cast<size_t>(id - kFirstTokenId)];
  }
};

const CountState& state_of(const ModelHandle& model) {
  auto* state = dynamic_cast<const CountState*>(model.state.get());
  if (state == nullptr) {
    throw std::invalid_argument("count backend: handle was not produced by this backend");
  }
  return *state;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

uint64_t input_hash(const std::string& input_text) {
  return fnv1a64(normalize_term(input_text));
}

uint64_t trigram_key(int prev2, int prev1) {
  return (static_cast<uint64_t>(prev2) << 21) | static_cast<uint64_t>(prev1);
}

uint64_t input_trigram_key(uint64_t input, int prev2, int prev1) {
  return fnv1a64_step(fnv1a64_step(input, static_cast<uint64_t>(prev2)),
                      static_cast<uint64_t>(prev1));
}

// Rolling context state while walking a target left to right.
struct HistoryCursor {
  uint64_t input = 0;
  int prev2 = kBosId;
  int prev1 = kBosId;
  uint64_t prefix = 0;

  explicit HistoryCursor(uint64_t input_key) : input(input_key) {
    prefix = fnv1a64_step(input_key, kPrefixSalt);
  }
  void push(int token) {
    prev2 = prev1;
    prev1 = token;
    prefix = fnv1a64_step(prefix, static_cast<uint64_t>(token));
  }
  std::array<uint64_t, 4> context_keys() const {
    return {static_cast<uint64_t>(prev1), trigram_key(prev2, prev1),
            input_trigram_key(input, prev2, prev1), prefix};
  }
};

// The interpolated distribution at one decoding position. Levels are gated
// top-down: the prefix memory fires first, each unseen level passes through.
struct MixturePoint {
  double uniform_coeff = 0.0;                       // weight on 1/predictable
  double level_coeff[kLevels] = {0, 0, 0, 0, 0};    // weight on each ML dist
  const ContextDist* dists[kLevels] = {nullptr, nullptr, nullptr, nullptr, nullptr};

  double probability(const CountState& state, int token) const {
    double p = uniform_coeff / state.predictable();
    for (int level = 0; level < kLevels; ++level) {
      if (dists[level] != nullptr && level_coeff[level] > 0.0) {
        p += level_coeff[level] * dists[level]->ml(token);
      }
    }
    return p;
  }
};

MixturePoint mixture_at(const CountState& state, const HistoryCursor& cursor) {
  MixturePoint mix;
  mix.dists[0] = &state.unigram;
  const auto keys = cursor.context_keys();
  for (int level = 1; level < kLevels; ++level) {
    const auto& table = state.context_levels[static_cast<size_t>(level - 1)];
    auto it = table.find(keys[static_cast<size_t>(level - 1)]);
    if (it != table.end()) mix.dists[level] = &it->second;
  }
  double passthrough = 1.0;
  for (int level = kLevels - 1; level >= 0; --level) {
    if (mix.dists[level] == nullptr) continue;
    mix.level_coeff[level] = state.lambdas[static_cast<size_t>(level)] * passthrough;
    passthrough *= 1.0 - state.lambdas[static_cast<size_t>(level)];
  }
  mix.uniform_coeff = passthrough;
  return mix;
}

struct TokenizedPair {
  uint64_t input = 0;
  std::vector<int> tokens;  // target ids, </s> excluded
};

// One EM pass over the corpus. Returns mean per-token NLL under the current
// weights; when update is set, re-estimates the gate weights in place.
double em_pass(CountState& state, const std::vector<TokenizedPair>& corpus, bool update,
               int epoch) {
  std::array<double, kLevels> numerator{};
  std::array<double, kLevels> denominator{};
  double nll = 0.0;
  uint64_t positions = 0;

  for (const auto& pair : corpus) {
    HistoryCursor cursor(pair.input);
    for (size_t t = 0; t <= pair.tokens.size(); ++t) {
      const int token = (t == pair.tokens.size()) ? kEosId : pair.tokens[t];
      const MixturePoint mix = mixture_at(state, cursor);

      double terms[kLevels + 1];
      terms[0] = mix.uniform_coeff / state.predictable();
      double p = terms[0];
      for (int level = 0; level < kLevels; ++level) {
        terms[level + 1] = (mix.dists[level] != nullptr)
                               ? mix.level_coeff[level] * mix.dists[level]->ml(token)
                               : 0.0;
        p += terms[level + 1];
      }
      nll -= std::log(p);
      ++positions;

      if (update) {
        double reach = terms[0] / p;
        for (int level = 0; level < kLevels; ++level) {
          if (mix.dists[level] == nullptr) continue;
          const double gamma = terms[level + 1] / p;
          reach += gamma;
          numerator[static_cast<size_t>(level)] += gamma;
          denominator[static_cast<size_t>(level)] += reach;
        }
      }
      cursor.push(token);
    }
  }

  if (!std::isfinite(nll)) {
    throw std::runtime_error("count backend: training loss became non-finite at epoch " +
                             std::to_string(epoch));
  }
  if (update) {
    for (int level = 0; level < kLevels; ++level) {
      if (denominator[static_cast<size_t>(level)] > 0.0) {
        state.lambdas[static_cast<size_t>(level)] =
            std::clamp(numerator[static_cast<size_t>(level)] /
                           denominator[static_cast<size_t>(level)],
                       kLambdaFloor, kLambdaCap);
      }
    }
  }
  return positions == 0 ? 0.0 : nll / static_cast<double>(positions);
}

void add_count(ContextTable& table, uint64_t key, int token) {
  auto& dist = table[key];
  auto it = std::lower_bound(dist.items.begin(), dist.items.end(), token,
                             [](const auto& a, int b) { return a.first < b; });
  if (it != dist.items.end() && it->first == token) {
    ++it->second;
  } else {
    dist.items.insert(it, {token, 1});
  }
  ++dist.total;
}

uint64_t sampling_seed(const CountState& state, const std::string& input_text, int index) {
  uint64_t h = fnv1a64_step(input_hash(input_text), state.seed);
  return fnv1a64_step(h, static_cast<uint64_t>(index));
}

nlohmann::json dump_context_table(const ContextTable& table) {
  std::vector<uint64_t> keys;
  keys.reserve(table.size());
  for (const auto& [key, dist] : table) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  nlohmann::json out = nlohmann::json::array();
  for (uint64_t key : keys) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& [token, count] : table.at(key).items) {
      items.push_back({token, count});
    }
    out.push_back({std::to_string(key), std::move(items)});
  }
  return out;
}

ContextTable load_context_table(const nlohmann::json& doc) {
  ContextTable table;
  for (const auto& entry : doc) {
    ContextDist dist;
    for (const auto& item : entry[1]) {
      dist.items.emplace_back(item[0].get<int>(), item[1].get<uint64_t>());
      dist.total += item[1].get<uint64_t>();
    }
    table.emplace(std::stoull(entry[0].get<std::string>()), std::move(dist));
  }
  return table;
}

}  // namespace

ModelHandle CountBackend::train(const std::vector<TrainingPair>& pairs,
                                const TrainConfig& config) const {
  validate_train_config(config);
  if (pairs.empty()) throw std::invalid_argument("train: no training pairs");

  auto state = std::make_shared<CountState>();
  state->seed = config.seed;
  state->max_target_length = config.max_target_length;
  state->lambdas.fill(0.5);

  ModelHandle handle;

  // Vocabulary and token sequences.
  std::vector<TokenizedPair> corpus;
  corpus.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto words = tokenize(pairs[i].target_text);
    if (words.size() > static_cast<size_t>(config.max_target_length)) {
      handle.warnings.push_back("pair " + std::to_string(i) + ": target truncated from " +
                                std::to_string(words.size()) + " to " +
                                std::to_string(config.max_target_length) + " tokens");
      words.resize(static_cast<size_t>(config.max_target_length));
    }
    if (words.empty()) {
      handle.warnings.push_back("pair " + std::to_string(i) + ": empty target skipped");
      continue;
    }
    TokenizedPair entry;
    entry.input = input_hash(pairs[i].input_text);
    for (auto& word : words) {
      auto [it, inserted] =
          state->token_ids.emplace(word, state->vocab_size());
      if (inserted) state->vocab.push_back(word);
      entry.tokens.push_back(it->second);
    }
    corpus.push_back(std::move(entry));
  }
  if (corpus.empty()) throw std::invalid_argument("train: all targets were empty");
  if (state->vocab_size() >= (1 << 21)) {
    throw std::runtime_error("count backend: vocabulary too large");
  }

  // Closed-form count fit.
  for (const auto& pair : corpus) {
    HistoryCursor cursor(pair.input);
    for (size_t t = 0; t <= pair.tokens.size(); ++t) {
      const int token = (t == pair.tokens.size()) ? kEosId : pair.tokens[t];
      auto it = std::lower_bound(state->unigram.items.begin(), state->unigram.items.end(), token,
                                 [](const auto& a, int b) { return a.first < b; });
      if (it != state->unigram.items.end() && it->first == token) {
        ++it->second;
      } else {
        state->unigram.items.insert(it, {token, 1});
      }
      ++state->unigram.total;

      const auto keys = cursor.context_keys();
      for (size_t level = 0; level < keys.size(); ++level) {
        add_count(state->context_levels[level], keys[level], token);
      }
      cursor.push(token);
    }
  }

  // EM on the interpolation weights; one step per configured epoch.
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    handle.loss_curve.push_back(em_pass(*state, corpus, /*update=*/true, epoch));
  }
  handle.loss_curve.push_back(em_pass(*state, corpus, /*update=*/false, config.epochs));

  handle.provenance = {config, digest_pairs(pairs), pairs.size(), name()};
  handle.state = std::move(state);
  return handle;
}

std::vector<std::string> CountBackend::sample(const ModelHandle& model,
                                              const std::string& input_text, int k,
                                              double temperature) const {
  if (k < 1) throw std::invalid_argument("sample: k must be >= 1");
  if (temperature <= 0.0) throw std::invalid_argument("sample: temperature must be > 0");
  const CountState& state = state_of(model);

  const int vocab_size = state.vocab_size();
  std::vector<double> weights(static_cast<size_t>(vocab_size), 0.0);

  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(k));
  for (int index = 0; index < k; ++index) {
    std::mt19937_64 rng(sampling_seed(state, input_text, index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    HistoryCursor cursor(input_hash(input_text));
    std::vector<int> emitted;
    while (static_cast<int>(emitted.size()) < state.max_target_length) {
      const MixturePoint mix = mixture_at(state, cursor);

      // Materialize the token distribution additively: uniform floor over
      // every predictable id, then each seen level over its own support.
      const double base = mix.uniform_coeff / state.predictable();
      std::fill(weights.begin(), weights.end(), base);
      weights[kBosId] = 0.0;
      for (int level = 0; level < kLevels; ++level) {
        if (mix.dists[level] == nullptr || mix.level_coeff[level] <= 0.0) continue;
        const double coeff = mix.level_coeff[level];
        const double total = static_cast<double>(mix.dists[level]->total);
        for (const auto& [token, count] : mix.dists[level]->items) {
          weights[static_cast<size_t>(token)] += coeff * static_cast<double>(count) / total;
        }
      }

      double mass = 0.0;
      const double inv_t = 1.0 / temperature;
      for (int token = 0; token < vocab_size; ++token) {
        double& w = weights[static_cast<size_t>(token)];
        w = (w > 0.0) ? std::exp(std::log(w) * inv_t) : 0.0;
        mass += w;
      }

      double pick = unit(rng) * mass;
      int chosen = kEosId;
      for (int token = 0; token < vocab_size; ++token) {
        pick -= weights[static_cast<size_t>(token)];
        if (pick <= 0.0) {
          chosen = token;
          break;
        }
      }
      if (chosen == kEosId) break;
      emitted.push_back(chosen);
      cursor.push(chosen);
    }

    std::string text;
    for (size_t i = 0; i < emitted.size(); ++i) {
      if (i) text.push_back(' ');
      text += state.token_text(emitted[i]);
    }
    out.push_back(std::move(text));
  }
  return out;
}

double CountBackend::score_target(const ModelHandle& model, const std::string& input_text,
                                  const std::string& target_text) const {
  const CountState& state = state_of(model);
  const auto words = tokenize(target_text);
  if (words.empty()) throw std::invalid_argument("score_target: empty target");

  HistoryCursor cursor(input_hash(input_text));
  double nll = 0.0;
  uint64_t positions = 0;
  for (size_t t = 0; t <= words.size(); ++t) {
    const int token = (t == words.size()) ? kEosId : state.token_id(words[t]);
    const MixturePoint mix = mixture_at(state, cursor);
    nll -= std::log(mix.probability(state, token));
    ++positions;
    cursor.push(token);
  }
  return nll / static_cast<double>(positions);
}

void CountBackend::save(const ModelHandle& model, const std::filesystem::path& dir) const {
  const CountState& state = state_of(model);
  std::filesystem::create_directories(dir);

  nlohmann::json doc;
  doc["type"] = name();
  doc["vocab"] = state.vocab;
  doc["lambdas"] = state.lambdas;
  doc["seed"] = state.seed;
  doc["max_target_length"] = state.max_target_length;

  nlohmann::json unigram = nlohmann::json::array();
  for (const auto& [token, count] : state.unigram.items) unigram.push_back({token, count});
  doc["unigram"] = std::move(unigram);
  const char* level_names[4] = {"bigram", "trigram", "input_trigram", "input_prefix"};
  for (size_t level = 0; level < 4; ++level) {
    doc[level_names[level]] = dump_context_table(state.context_levels[level]);
  }

  doc["loss_curve"] = model.loss_curve;
  doc["warnings"] = model.warnings;
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
  out << doc.dump() << '\n';
}

ModelHandle CountBackend::load(const std::filesystem::path& dir) const {
  std::ifstream in(dir / "model.json");
  if (!in) throw std::runtime_error("no model found in " + dir.string());
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.value("type", "") != name()) {
    throw std::runtime_error("model in " + dir.string() + " was not saved by the count backend");
  }

  auto state = std::make_shared<CountState>();
  state->vocab = doc["vocab"].get<std::vector<std::string>>();
  for (size_t i = 0; i < state->vocab.size(); ++i) {
    state->token_ids.emplace(state->vocab[i], static_cast<int>(i) + kFirstTokenId);
  }
  const auto lambdas = doc["lambdas"].get<std::vector<double>>();
  std::copy(lambdas.begin(), lambdas.end(), state->lambdas.begin());
  state->seed = doc["seed"].get<uint64_t>();
  state->max_target_length = doc["max_target_length"].get<int>();

  for (const auto& item : doc["unigram"]) {
    state->unigram.items.emplace_back(item[0].get<int>(), item[1].get<uint64_t>());
    state->unigram.total += item[1].get<uint64_t>();
  }
  const char* level_names[4] = {"bigram", "trigram", "input_trigram", "input_prefix"};
  for (size_t level = 0; level < 4; ++level) {
    state->context_levels[level] = load_context_table(doc[level_names[level]]);
  }

  ModelHandle handle;
  handle.loss_curve = doc.value("loss_curve", std::vector<double>{});
  handle.warnings = doc.value("warnings", std::vector<std::string>{});
  const auto& manifest = doc["manifest"];
  handle.provenance.backend = manifest.value("backend", name());
  handle.provenance.pair_digest = manifest.value("pair_digest", "");
  handle.provenance.pair_count = manifest.value("pair_count", 0u);
  handle.provenance.config.seed = manifest.value("seed", 0u);
  handle.provenance.config.epochs = manifest.value("epochs", 20);
  handle.provenance.config.batch_size = manifest.value("batch_size", 16);
  handle.provenance.config.learning_rate = manifest.value("learning_rate", 3e-5);
  handle.provenance.config.max_target_length = manifest.value("max_target_length", 512);
  handle.state = std::move(state);
  return handle;
}

}  // namespace scrap
