#include "scrap/reasoning.h"

#include <cstdlib>

#ifdef SCRAP_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <nlohmann/json.hpp>

#include "scrap/dataset.h"

namespace scrap {

namespace {

// Pulls "sentence####literal" back out of the prompt's query block.
std::optional<std::string> extract_query_line(const std::string& prompt) {
  const std::string needle = "\nText: ";
  size_t pos = prompt.rfind(needle);
  if (pos == std::string::npos) return std::nullopt;
  size_t begin = pos + needle.size();
  size_t end = prompt.find('\n', begin);
  if (end == std::string::npos) end = prompt.size();
  return prompt.substr(begin, end - begin);
}

const char* kOpeners[3] = {
    "In this sentence,",
    "Looking at the review,",
    "Reading the sentence closely,",
};
const char* kClosers[2] = {
    "That covers every evaluation expressed in the sentence.",
    "No other aspect is evaluated here.",
};

}  // namespace

StubLlmClient::StubLlmClient(std::vector<std::string> scripted)
    : scripted_(std::move(scripted)) {}

int StubLlmClient::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

std::string StubLlmClient::complete(const std::string& prompt, double /*temperature*/) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;

  if (!scripted_.empty()) {
    const std::string& text =
        scripted_[std::min(script_cursor_, scripted_.size() - 1)];
    ++script_cursor_;
    return text;
  }

  const int variant = per_prompt_calls_[prompt]++;
  auto query = extract_query_line(prompt);
  if (!query) return "The sentence expresses no identifiable evaluation.";

  size_t delim = query->find("####");
  std::string reasoning = kOpeners[variant % 3];
  if (delim == std::string::npos) {
    return reasoning + " no quadruplet annotation was given.";
  }
  try {
    const auto literals = parse_quad_literal(std::string_view(*query).substr(delim + 4));
    for (size_t i = 0; i < literals.size(); ++i) {
      // File order is [at, ac, sp, ot].
      if (i) reasoning += " Next,";
      reasoning += " the aspect term is '" + literals[i][0] + "' and the opinion term is '" +
                   literals[i][3] + "'; this points to the category '" + literals[i][1] +
                   "' with " + literals[i][2] + " polarity.";
    }
  } catch (const std::exception&) {
    return reasoning + " the annotation could not be read.";
  }
  reasoning += " ";
  reasoning += kClosers[(variant / 3) % 2];
  return reasoning;
}

namespace {

class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(GeneratorConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint;
    size_t scheme = url.find("://");
    size_t path_start = (scheme == std::string::npos) ? url.find('/')
                                                      : url.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      base_ = url;
      path_ = "/v1/chat/completions";
    } else {
      base_ = url.substr(0, path_start);
      path_ = url.substr(path_start);
    }
  }

  std::string complete(const std::string& prompt, double temperature) override {
    httplib::Client client(base_);
    client.set_read_timeout(120, 0);

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = temperature;

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      throw std::runtime_error("endpoint unreachable: " + base_);
    }
    if (res->status != 200) {
      throw std::runtime_error("endpoint returned status " + std::to_string(res->status));
    }
    auto payload = nlohmann::json::parse(res->body, nullptr, false);
    if (payload.is_discarded() || !payload.contains("choices") || payload["choices"].empty()) {
      throw std::runtime_error("endpoint returned an unexpected payload");
    }
    return payload["choices"][0]["message"]["content"].get<std::string>();
  }

  std::string model_name() const override { return config_.model; }

 private:
  GeneratorConfig config_;
  std::string base_;
  std::string path_;
};

}  // namespace

std::unique_ptr<LlmClient> make_http_llm_client(const GeneratorConfig& config) {
  return std::make_unique<HttpLlmClient>(config);
}

std::unique_ptr<LlmClient> make_llm_client(const GeneratorConfig& config) {
  if (config.model == "stub" || config.endpoint.empty()) {
    return std::make_unique<StubLlmClient>();
  }
  return make_http_llm_client(config);
}

}  // namespace scrap
