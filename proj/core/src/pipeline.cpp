#include "scrap/pipeline.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scrap/count_backend.h"
#include "scrap/dataset.h"
#include "scrap/digest.h"
#include "scrap/metrics.h"
#include "scrap/stub_backend.h"
#include "scrap/target_builder.h"

namespace scrap {

namespace {

// ---------------------------------------------------------------------------
// Config plumbing

VoteFallback fallback_from_string(const std::string& text) {
  if (text == "modal_output") return VoteFallback::kModalOutput;
  if (text == "empty") return VoteFallback::kEmpty;
  throw std::invalid_argument("config: unknown vote fallback '" + text + "'");
}

std::string fallback_to_string(VoteFallback fallback) {
  return fallback == VoteFallback::kModalOutput ? "modal_output" : "empty";
}

}  // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& doc) {
  PipelineConfig config;
  if (doc.contains("data")) {
    const auto& data = doc["data"];
    config.data.train = data.value("train", std::string());
    config.data.dev = data.value("dev", std::string());
    config.data.test = data.value("test", std::string());
  }
  if (doc.contains("generator")) {
    const auto& gen = doc["generator"];
    config.generator.n_paths = gen.value("n_paths", config.generator.n_paths);
    config.generator.sampling_temperature =
        gen.value("temperature", config.generator.sampling_temperature);
    config.generator.max_retries = gen.value("max_retries", config.generator.max_retries);
    config.generator.endpoint = gen.value("endpoint", config.generator.endpoint);
    config.generator.model = gen.value("model", config.generator.model);
    config.generator.api_key_env = gen.value("api_key_env", config.generator.api_key_env);
    config.generator.parallelism = gen.value("parallelism", config.generator.parallelism);
  }
  if (doc.contains("targets")) {
    const auto& targets = doc["targets"];
    config.targets.p = targets.value("p", config.targets.p);
    config.targets.cross_product = targets.value("cross_product", config.targets.cross_product);
    config.targets.scorer = targets.value("scorer", config.targets.scorer);
    config.targets.entropy_sample = targets.value("entropy_sample", config.targets.entropy_sample);
    config.targets.scorer_model_dir = targets.value("scorer_model_dir", std::string());
  }
  if (doc.contains("train")) {
    const auto& train = doc["train"];
    config.train.epochs = train.value("epochs", config.train.epochs);
    config.train.batch_size = train.value("batch_size", config.train.batch_size);
    config.train.learning_rate = train.value("learning_rate", config.train.learning_rate);
    config.train.seed = train.value("seed", config.train.seed);
    config.train.max_target_length =
        train.value("max_target_length", config.train.max_target_length);
  }
  if (doc.contains("decode")) {
    const auto& decode = doc["decode"];
    config.decode.decoder.k = decode.value("k", config.decode.decoder.k);
    config.decode.decoder.temperature =
        decode.value("temperature", config.decode.decoder.temperature);
    config.decode.decoder.vote_threshold =
        decode.value("vote_threshold", config.decode.decoder.vote_threshold);
    config.decode.decoder.fallback = fallback_from_string(
        decode.value("fallback", fallback_to_string(config.decode.decoder.fallback)));
    config.decode.script = decode.value("script", std::string());
  }
  config.backend = doc.value("backend", config.backend);
  config.out_dir = doc.value("out_dir", config.out_dir.string());
  return config;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  return pipeline_config_from_json(doc);
}

void validate_pipeline_config(const PipelineConfig& config) {
  if (config.generator.n_paths < 1) throw std::invalid_argument("config: n_paths must be >= 1");
  if (config.targets.p < 1 || config.targets.p > 24) {
    throw std::invalid_argument("config: p must be in [1, 24]");
  }
  if (config.decode.decoder.k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (config.decode.decoder.temperature <= 0.0) {
    throw std::invalid_argument("config: decode temperature must be > 0");
  }
  if (config.decode.decoder.vote_threshold <= 0.0 || config.decode.decoder.vote_threshold > 1.0) {
    throw std::invalid_argument("config: vote threshold must be in (0, 1]");
  }
  if (config.targets.scorer != "fallback" && config.targets.scorer != "backend") {
    throw std::invalid_argument("config: targets.scorer must be 'fallback' or 'backend'");
  }
  validate_train_config(config.train);
  if (config.out_dir.empty()) throw std::invalid_argument("config: out_dir must be set");
  make_backend(config.backend);  // rejects unknown keys
}

namespace {

// ---------------------------------------------------------------------------
// Stage infrastructure

class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw std::runtime_error("run directory is locked (" + path_.string() +
                               " exists); remove it if no other stage is running");
    }
  }
  ~RunLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  uint64_t h = kFnvOffset;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(std::string_view(buf, static_cast<size_t>(in.gcount())), h);
  }
  return hex_digest(h);
}

std::filesystem::path manifest_path(const PipelineConfig& config, Stage stage) {
  return config.out_dir / (std::string("manifest_") + stage_name(stage) + ".json");
}

struct StagePlan {
  std::vector<std::filesystem::path> inputs;
  nlohmann::json config_subset;
  std::vector<std::filesystem::path> outputs;
};

bool stage_up_to_date(const PipelineConfig& config, Stage stage, const StagePlan& plan) {
  const auto path = manifest_path(config, stage);
  if (!std::filesystem::exists(path)) return false;
  nlohmann::json manifest;
  try {
    std::ifstream in(path);
    manifest = nlohmann::json::parse(in);
  } catch (...) {
    return false;
  }
  if (manifest.value("config_digest", "") != hex_digest(fnv1a64(plan.config_subset.dump()))) {
    return false;
  }
  for (const auto& input : plan.inputs) {
    if (!std::filesystem::exists(input)) return false;
    const std::string key = input.string();
    if (!manifest["inputs"].contains(key)) return false;
    if (manifest["inputs"][key].get<std::string>() != file_digest(input)) return false;
  }
  for (const auto& output : plan.outputs) {
    if (!std::filesystem::exists(output)) return false;
  }
  return true;
}

void write_manifest(const PipelineConfig& config, Stage stage, const StagePlan& plan) {
  nlohmann::json manifest;
  manifest["stage"] = stage_name(stage);
  manifest["config_digest"] = hex_digest(fnv1a64(plan.config_subset.dump()));
  manifest["inputs"] = nlohmann::json::object();
  for (const auto& input : plan.inputs) {
    manifest["inputs"][input.string()] = file_digest(input);
  }
  manifest["outputs"] = nlohmann::json::array();
  for (const auto& output : plan.outputs) manifest["outputs"].push_back(output.string());
  std::ofstream out(manifest_path(config, stage), std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

void require_file(const std::filesystem::path& path, const std::string& hint) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error("missing " + path.string() + "; " + hint);
  }
}

// ---------------------------------------------------------------------------
// Shared record encoding

nlohmann::json quad_to_json(const Quad& quad) {
  return nlohmann::json::array(
      {quad.aspect_term, quad.opinion_term, quad.aspect_category, quad.sentiment_polarity});
}

Quad quad_from_json(const nlohmann::json& doc) {
  return Quad::normalized(doc[0].get<std::string>(), doc[1].get<std::string>(),
                          doc[2].get<std::string>(), doc[3].get<std::string>());
}

std::vector<TrainingPair> pairs_from_records(const std::vector<Record>& records) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(records.size());
  for (const auto& record : records) {
    TrainingPair pair;
    pair.sentence_id = record["sentence_id"].get<int>();
    pair.input_text = record["input_text"].get<std::string>();
    pair.target_text = record["target_text"].get<std::string>();
    pair.permutation = Permutation::from_string(record["permutation"].get<std::string>());
    pair.reasoning_index = record["reasoning_index"].get<int>();
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

StubBackend::Script load_script(const std::filesystem::path& path) {
  StubBackend::Script script;
  for (const auto& record : read_records(path)) {
    script[normalize_term(record["input"].get<std::string>())] =
        record["candidates"].get<std::vector<std::string>>();
  }
  return script;
}

// The backend for predict/sweep; a stub picks up scripted candidates here.
std::unique_ptr<Seq2SeqBackend> make_pipeline_backend(const PipelineConfig& config) {
  if (config.backend == "stub" && !config.decode.script.empty()) {
    require_file(config.decode.script, "the configured stub script is required for predict");
    return std::make_unique<StubBackend>(load_script(config.decode.script));
  }
  return make_backend(config.backend);
}

QuadSetsById golds_of(const std::vector<Example>& examples) {
  QuadSetsById golds;
  golds.reserve(examples.size());
  for (const auto& example : examples) {
    golds.emplace_back(example.sentence_id, example.gold_quads);
  }
  return golds;
}

Record prediction_record(const Example& example, const DecodeResult& result,
                         const DecoderConfig& decoder) {
  Record record;
  record["sentence_id"] = example.sentence_id;
  record["sentence"] = example.sentence;
  nlohmann::json final_quads = nlohmann::json::array();
  for (const auto& quad : result.final_quads) final_quads.push_back(quad_to_json(quad));
  record["final_quads"] = std::move(final_quads);
  nlohmann::json tally = nlohmann::json::array();
  for (const auto& [quad, count] : result.tally) {
    tally.push_back({quad_to_json(quad), count});
  }
  record["tally"] = std::move(tally);
  record["k"] = decoder.k;
  record["temperature"] = decoder.temperature;
  record["threshold"] = decoder.vote_threshold;
  nlohmann::json reasonings = nlohmann::json::array();
  for (const auto& parsed : result.parsed) reasonings.push_back(parsed.reasoning);
  record["reasonings"] = std::move(reasonings);
  record["raw_candidates"] = result.raw_candidates;
  record["diagnostics"] = result.diagnostics;
  return record;
}

// ---------------------------------------------------------------------------
// Stages

StageResult stage_generate_reasoning(const PipelineConfig& config) {
  require_file(config.data.train, "set data.train in the config");
  const auto cache_path = config.out_dir / "reasonings.jsonl";

  StagePlan plan;
  plan.inputs = {config.data.train};
  plan.config_subset = {{"n_paths", config.generator.n_paths},
                        {"temperature", config.generator.sampling_temperature},
                        {"model", config.generator.model},
                        {"endpoint", config.generator.endpoint}};
  plan.outputs = {cache_path};

  StageResult result{stage_name(Stage::kGenerateReasoning)};
  if (stage_up_to_date(config, Stage::kGenerateReasoning, plan)) {
    result.skipped = true;
    result.outputs = plan.outputs;
    result.summary = "up-to-date; reasoning cache unchanged";
    return result;
  }

  const auto examples = load_dataset(config.data.train);
  auto client = make_llm_client(config.generator);
  ReasoningCache cache(cache_path);

  int calls = 0;
  int duplicates = 0;
  for (const auto& example : examples) {
    auto generated = generate_reasonings(example, config.generator, *client, &cache);
    calls += generated.client_calls;
    duplicates += generated.duplicate_texts;
  }

  write_manifest(config, Stage::kGenerateReasoning, plan);
  result.outputs = plan.outputs;
  std::ostringstream summary;
  summary << examples.size() << " sentences x " << config.generator.n_paths << " paths ("
          << calls << " client calls, " << duplicates << " duplicate texts)";
  result.summary = summary.str();
  return result;
}

StageResult stage_build_targets(const PipelineConfig& config) {
  require_file(config.data.train, "set data.train in the config");
  const auto cache_path = config.out_dir / "reasonings.jsonl";
  require_file(cache_path, "run generate-reasoning first");
  const auto pairs_path = config.out_dir / "training_pairs.jsonl";
  const auto ranking_path = config.out_dir / "ranking.jsonl";

  StagePlan plan;
  plan.inputs = {config.data.train, cache_path};
  plan.config_subset = {{"p", config.targets.p},
                        {"cross_product", config.targets.cross_product},
                        {"scorer", config.targets.scorer},
                        {"entropy_sample", config.targets.entropy_sample},
                        {"n_paths", config.generator.n_paths}};
  plan.outputs = {pairs_path, ranking_path};

  StageResult result{stage_name(Stage::kBuildTargets)};
  if (stage_up_to_date(config, Stage::kBuildTargets, plan)) {
    result.skipped = true;
    result.outputs = plan.outputs;
    result.summary = "up-to-date; training pairs unchanged";
    return result;
  }

  const auto examples = load_dataset(config.data.train);

  PermutationRanking ranking;
  if (config.targets.scorer == "backend") {
    const auto model_dir = config.targets.scorer_model_dir.empty()
                               ? config.out_dir / "model"
                               : config.targets.scorer_model_dir;
    require_file(model_dir / "model.json", "train or point targets.scorer_model_dir at a model");
    auto backend = make_backend(config.backend);
    auto handle = backend->load(model_dir);
    auto scorer = [&backend, &handle](const std::string& input, const std::string& target) {
      return backend->score_target(handle, input, target);
    };
    ranking = rank_permutations(examples, scorer, config.targets.p, config.targets.entropy_sample);
  } else {
    ranking = fallback_ranking(config.targets.p);
  }

  ReasoningCache cache(cache_path);
  std::vector<Record> pair_records;
  size_t pair_count = 0;
  for (const auto& example : examples) {
    auto paths = cache.lookup(example.sentence_id, config.generator.n_paths);
    if (static_cast<int>(paths.size()) != config.generator.n_paths) {
      throw std::runtime_error("sentence " + std::to_string(example.sentence_id) + " has " +
                               std::to_string(paths.size()) + "/" +
                               std::to_string(config.generator.n_paths) +
                               " cached reasonings; rerun generate-reasoning");
    }
    const auto pairs =
        build_targets(example, paths, ranking, BuildOptions{config.targets.cross_product});
    pair_count += pairs.size();
    for (const auto& pair : pairs) {
      Record record;
      record["sentence_id"] = pair.sentence_id;
      record["input_text"] = pair.input_text;
      record["target_text"] = pair.target_text;
      record["permutation"] = pair.permutation.to_string();
      record["reasoning_index"] = pair.reasoning_index;
      pair_records.push_back(std::move(record));
    }
  }
  write_records(pairs_path, pair_records);

  std::vector<Record> ranking_records;
  for (const auto& [perm, score] : ranking.scored) {
    Record record;
    record["permutation"] = perm.to_string();
    record["score"] = score;
    record["chosen"] = std::find(ranking.chosen.begin(), ranking.chosen.end(), perm) !=
                       ranking.chosen.end();
    ranking_records.push_back(std::move(record));
  }
  write_records(ranking_path, ranking_records);

  write_manifest(config, Stage::kBuildTargets, plan);
  result.outputs = plan.outputs;
  std::ostringstream summary;
  summary << pair_records.size() << " training pairs (" << examples.size() << " sentences x "
          << config.generator.n_paths << " reasonings x " << config.targets.p
          << " permutations, cross_product=" << (config.targets.cross_product ? "true" : "false")
          << "); head permutation " << ranking.chosen.front().to_string();
  result.summary = summary.str();
  return result;
}

StageResult stage_train(const PipelineConfig& config) {
  const auto pairs_path = config.out_dir / "training_pairs.jsonl";
  require_file(pairs_path, "run build-targets first");
  const auto model_dir = config.out_dir / "model";

  StagePlan plan;
  plan.inputs = {pairs_path};
  plan.config_subset = {{"backend", config.backend},
                        {"epochs", config.train.epochs},
                        {"batch_size", config.train.batch_size},
                        {"learning_rate", config.train.learning_rate},
                        {"seed", config.train.seed},
                        {"max_target_length", config.train.max_target_length}};
  plan.outputs = {model_dir / "model.json"};

  StageResult result{stage_name(Stage::kTrain)};
  if (stage_up_to_date(config, Stage::kTrain, plan)) {
    result.skipped = true;
    result.outputs = plan.outputs;
    result.summary = "up-to-date; model unchanged";
    return result;
  }

  const auto pairs = pairs_from_records(read_records(pairs_path));
  auto backend = make_backend(config.backend);
  auto handle = backend->train(pairs, config.train);
  backend->save(handle, model_dir);

  write_manifest(config, Stage::kTrain, plan);
  result.outputs = plan.outputs;
  std::ostringstream summary;
  summary << "trained " << backend->name() << " backend on " << pairs.size() << " pairs";
  if (handle.loss_curve.size() >= 2) {
    summary << "; loss " << handle.loss_curve.front() << " -> " << handle.loss_curve.back();
  }
  if (!handle.warnings.empty()) summary << "; " << handle.warnings.size() << " warnings";
  result.summary = summary.str();
  return result;
}

StageResult stage_predict(const PipelineConfig& config) {
  require_file(config.data.test, "set data.test in the config");
  const auto model_file = config.out_dir / "model" / "model.json";
  require_file(model_file, "run train first");
  const auto predictions_path = config.out_dir / "predictions.jsonl";

  StagePlan plan;
  plan.inputs = {config.data.test, model_file};
  if (!config.decode.script.empty()) plan.inputs.push_back(config.decode.script);
  plan.config_subset = {{"backend", config.backend},
                        {"k", config.decode.decoder.k},
                        {"temperature", config.decode.decoder.temperature},
                        {"vote_threshold", config.decode.decoder.vote_threshold},
                        {"fallback", fallback_to_string(config.decode.decoder.fallback)},
                        {"script", config.decode.script.string()}};
  plan.outputs = {predictions_path};

  StageResult result{stage_name(Stage::kPredict)};
  if (stage_up_to_date(config, Stage::kPredict, plan)) {
    result.skipped = true;
    result.outputs = plan.outputs;
    result.summary = "up-to-date; predictions unchanged";
    return result;
  }

  const auto examples = load_dataset(config.data.test);
  auto backend = make_pipeline_backend(config);
  auto handle = backend->load(config.out_dir / "model");

  std::vector<Record> records;
  records.reserve(examples.size());
  size_t total_final = 0;
  size_t fallbacks = 0;
  for (const auto& example : examples) {
    auto decoded = decode(*backend, handle, example.sentence, config.decode.decoder);
    total_final += decoded.final_quads.size();
    for (const auto& diagnostic : decoded.diagnostics) {
      if (diagnostic.find("modal candidate") != std::string::npos) ++fallbacks;
    }
    records.push_back(prediction_record(example, decoded, config.decode.decoder));
  }
  write_records(predictions_path, records);

  write_manifest(config, Stage::kPredict, plan);
  result.outputs = plan.outputs;
  std::ostringstream summary;
  summary << examples.size() << " sentences decoded with k=" << config.decode.decoder.k
          << ", T=" << config.decode.decoder.temperature << "; " << total_final
          << " final quads, " << fallbacks << " modal fallbacks";
  result.summary = summary.str();
  return result;
}

StageResult stage_evaluate(const PipelineConfig& config) {
  require_file(config.data.test, "set data.test in the config");
  const auto predictions_path = config.out_dir / "predictions.jsonl";
  require_file(predictions_path, "run predict first");
  const auto report_path = config.out_dir / "report.json";

  StagePlan plan;
  plan.inputs = {config.data.test, predictions_path};
  plan.config_subset = {{"stage", "evaluate"}};
  plan.outputs = {report_path};

  StageResult result{stage_name(Stage::kEvaluate)};
  if (stage_up_to_date(config, Stage::kEvaluate, plan)) {
    result.skipped = true;
    result.outputs = plan.outputs;
    result.summary = "up-to-date; report unchanged";
    // Reprint the stored report so a skipped evaluate still shows scores.
    std::ifstream in(report_path);
    nlohmann::json report = nlohmann::json::parse(in);
    std::ostringstream summary;
    summary << "up-to-date; P=" << report["precision"].get<double>()
            << " R=" << report["recall"].get<double>() << " F1=" << report["f1"].get<double>();
    result.summary = summary.str();
    return result;
  }

  const auto examples = load_dataset(config.data.test);
  QuadSetsById predictions;
  for (const auto& record : read_records(predictions_path)) {
    std::vector<Quad> quads;
    for (const auto& quad : record["final_quads"]) quads.push_back(quad_from_json(quad));
    predictions.emplace_back(record["sentence_id"].get<int>(), std::move(quads));
  }
  const auto golds = golds_of(examples);

  const ScoreReport scores = score(predictions, golds);
  const ElementErrorReport errors = element_error_rates(predictions, golds);

  nlohmann::json report;
  report["precision"] = scores.precision;
  report["recall"] = scores.recall;
  report["f1"] = scores.f1;
  report["tp"] = scores.tp;
  report["pred_count"] = scores.pred_count;
  report["gold_count"] = scores.gold_count;
  report["element_error_rates"] = {
      {"AT", errors.error_rate[static_cast<size_t>(ElementTag::AT)]},
      {"OT", errors.error_rate[static_cast<size_t>(ElementTag::OT)]},
      {"AC", errors.error_rate[static_cast<size_t>(ElementTag::AC)]},
      {"SP", errors.error_rate[static_cast<size_t>(ElementTag::SP)]}};
  report["predicted_quads"] = errors.predicted_quads;
  {
    std::ofstream out(report_path, std::ios::trunc);
    out << report.dump(2) << '\n';
  }

  write_manifest(config, Stage::kEvaluate, plan);
  result.outputs = plan.outputs;
  std::ostringstream summary;
  summary << "precision=" << scores.precision << " recall=" << scores.recall
          << " f1=" << scores.f1 << " (tp=" << scores.tp << " pred=" << scores.pred_count
          << " gold=" << scores.gold_count << ")\n"
          << "element error rates: AT=" << errors.error_rate[static_cast<size_t>(ElementTag::AT)]
          << " OT=" << errors.error_rate[static_cast<size_t>(ElementTag::OT)]
          << " AC=" << errors.error_rate[static_cast<size_t>(ElementTag::AC)]
          << " SP=" << errors.error_rate[static_cast<size_t>(ElementTag::SP)];
  result.summary = summary.str();
  return result;
}

}  // namespace

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::kGenerateReasoning: return "generate-reasoning";
    case Stage::kBuildTargets: return "build-targets";
    case Stage::kTrain: return "train";
    case Stage::kPredict: return "predict";
    case Stage::kEvaluate: return "evaluate";
  }
  return "unknown";
}

std::optional<Stage> stage_from_name(const std::string& name) {
  for (Stage stage : {Stage::kGenerateReasoning, Stage::kBuildTargets, Stage::kTrain,
                      Stage::kPredict, Stage::kEvaluate}) {
    if (name == stage_name(stage)) return stage;
  }
  return std::nullopt;
}

StageResult run_stage(Stage stage, const PipelineConfig& config) {
  validate_pipeline_config(config);
  std::filesystem::create_directories(config.out_dir);
  RunLock lock(config.out_dir);

  switch (stage) {
    case Stage::kGenerateReasoning: return stage_generate_reasoning(config);
    case Stage::kBuildTargets: return stage_build_targets(config);
    case Stage::kTrain: return stage_train(config);
    case Stage::kPredict: return stage_predict(config);
    case Stage::kEvaluate: return stage_evaluate(config);
  }
  throw std::logic_error("unreachable stage");
}

namespace {

SweepRow evaluate_row(double value, const QuadSetsById& predictions, const QuadSetsById& golds) {
  const ScoreReport report = score(predictions, golds);
  return {value, report.precision, report.recall, report.f1};
}

void write_sweep_table(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  out << "value\tprecision\trecall\tf1\n";
  for (const auto& row : rows) {
    out << row.value << '\t' << row.precision << '\t' << row.recall << '\t' << row.f1 << '\n';
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const std::string& axis, const std::vector<double>& values,
                                const PipelineConfig& config) {
  validate_pipeline_config(config);
  if (values.empty()) throw std::invalid_argument("sweep: no values given");
  if (axis != "N" && axis != "K" && axis != "threshold" && axis != "temperature") {
    throw std::invalid_argument("sweep: axis must be one of N, K, threshold, temperature");
  }
  for (double value : values) {
    if ((axis == "N" || axis == "K") && (value < 1.0 || value != std::floor(value))) {
      throw std::invalid_argument("sweep: " + axis + " values must be positive integers");
    }
    if (axis == "threshold" && (value <= 0.0 || value > 1.0)) {
      throw std::invalid_argument("sweep: threshold values must be in (0, 1]");
    }
    if (axis == "temperature" && value <= 0.0) {
      throw std::invalid_argument("sweep: temperature values must be > 0");
    }
  }

  require_file(config.data.train, "set data.train in the config");
  require_file(config.data.test, "set data.test in the config");
  std::filesystem::create_directories(config.out_dir);

  const auto train_examples = load_dataset(config.data.train);
  const auto test_examples = load_dataset(config.data.test);
  const auto golds = golds_of(test_examples);

  std::vector<SweepRow> rows;

  if (axis == "N") {
    // One shared cache at the largest N; smaller rows take index prefixes.
    const int n_max = static_cast<int>(*std::max_element(values.begin(), values.end()));
    ReasoningCache cache(config.out_dir / "reasonings.jsonl");
    auto client = make_llm_client(config.generator);
    GeneratorConfig harvest = config.generator;
    harvest.n_paths = n_max;
    for (const auto& example : train_examples) {
      generate_reasonings(example, harvest, *client, &cache);
    }

    const auto ranking = fallback_ranking(config.targets.p);
    auto backend = make_pipeline_backend(config);
    for (double value : values) {
      const int n = static_cast<int>(value);
      std::vector<TrainingPair> pairs;
      for (const auto& example : train_examples) {
        auto paths = cache.lookup(example.sentence_id, n);
        auto built =
            build_targets(example, paths, ranking, BuildOptions{config.targets.cross_product});
        pairs.insert(pairs.end(), built.begin(), built.end());
      }
      auto handle = backend->train(pairs, config.train);
      QuadSetsById predictions;
      for (const auto& example : test_examples) {
        auto decoded = decode(*backend, handle, example.sentence, config.decode.decoder);
        predictions.emplace_back(example.sentence_id, decoded.final_quads);
      }
      rows.push_back(evaluate_row(value, predictions, golds));
    }
  } else {
    // Axes downstream of training share one trained model.
    ReasoningCache cache(config.out_dir / "reasonings.jsonl");
    auto client = make_llm_client(config.generator);
    for (const auto& example : train_examples) {
      generate_reasonings(example, config.generator, *client, &cache);
    }
    const auto ranking = fallback_ranking(config.targets.p);
    std::vector<TrainingPair> pairs;
    for (const auto& example : train_examples) {
      auto paths = cache.lookup(example.sentence_id, config.generator.n_paths);
      auto built =
          build_targets(example, paths, ranking, BuildOptions{config.targets.cross_product});
      pairs.insert(pairs.end(), built.begin(), built.end());
    }
    auto backend = make_pipeline_backend(config);
    auto handle = backend->train(pairs, config.train);

    if (axis == "temperature") {
      for (double value : values) {
        DecoderConfig decoder = config.decode.decoder;
        decoder.temperature = value;
        QuadSetsById predictions;
        for (const auto& example : test_examples) {
          auto decoded = decode(*backend, handle, example.sentence, decoder);
          predictions.emplace_back(example.sentence_id, decoded.final_quads);
        }
        rows.push_back(evaluate_row(value, predictions, golds));
      }
    } else {
      // K and threshold re-vote prefixes of one sampled pool.
      const int k_pool = (axis == "K")
                             ? static_cast<int>(*std::max_element(values.begin(), values.end()))
                             : config.decode.decoder.k;
      std::vector<std::vector<std::string>> pool;
      pool.reserve(test_examples.size());
      for (const auto& example : test_examples) {
        pool.push_back(
            backend->sample(handle, example.sentence, k_pool, config.decode.decoder.temperature));
      }
      for (double value : values) {
        DecoderConfig decoder = config.decode.decoder;
        if (axis == "K") {
          decoder.k = static_cast<int>(value);
        } else {
          decoder.vote_threshold = value;
        }
        QuadSetsById predictions;
        for (size_t i = 0; i < test_examples.size(); ++i) {
          std::vector<std::string> candidates = pool[i];
          if (axis == "K") candidates.resize(static_cast<size_t>(decoder.k));
          auto decoded = decode_candidates(candidates, decoder);
          predictions.emplace_back(test_examples[i].sentence_id, decoded.final_quads);
        }
        rows.push_back(evaluate_row(value, predictions, golds));
      }
    }
  }

  write_sweep_table(config.out_dir / ("sweep_" + axis + ".tsv"), rows);
  return rows;
}

}  // namespace scrap
