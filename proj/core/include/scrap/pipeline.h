#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scrap/backend.h"
#include "scrap/decoder.h"
#include "scrap/reasoning.h"

namespace scrap {

// Declarative settings for one experiment run; loaded from a single JSON
// file and overridable from the command line.
struct PipelineConfig {
  struct DataPaths {
    std::filesystem::path train;
    std::filesystem::path dev;
    std::filesystem::path test;
  };
  struct TargetSettings {
    int p = 5;
    bool cross_product = true;
    std::string scorer = "fallback";  // "fallback" or "backend"
    size_t entropy_sample = 0;        // 0 = score every training example
    std::filesystem::path scorer_model_dir;
  };
  struct DecodeSettings {
    DecoderConfig decoder;
    std::filesystem::path script;  // scripted candidates for the stub backend
  };

  DataPaths data;
  GeneratorConfig generator;
  TargetSettings targets;
  TrainConfig train;
  DecodeSettings decode;
  std::string backend = "stub";
  std::filesystem::path out_dir = "runs/default";
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc);
void validate_pipeline_config(const PipelineConfig& config);

enum class Stage { kGenerateReasoning, kBuildTargets, kTrain, kPredict, kEvaluate };

std::optional<Stage> stage_from_name(const std::string& name);
const char* stage_name(Stage stage);

struct StageResult {
  std::string stage;
  bool skipped = false;  // inputs unchanged, manifest satisfied
  std::vector<std::filesystem::path> outputs;
  std::string summary;
};

// Runs exactly one stage inside config.out_dir. Stages are resumable and
// idempotent: a manifest of input digests is written on success and a rerun
// with unchanged inputs is skipped. A lock file serializes stages per run
// directory. Missing upstream artifacts fail fast naming the stage to run.
StageResult run_stage(Stage stage, const PipelineConfig& config);

struct SweepRow {
  double value = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Evaluates the pipeline along one axis ("N", "K", "threshold",
// "temperature") and writes a plottable TSV next to the stage artifacts.
// K and threshold sweeps re-vote prefixes of a single sampled candidate
// pool so rows are comparable; N sweeps share one reasoning cache and take
// index prefixes.
std::vector<SweepRow> run_sweep(const std::string& axis, const std::vector<double>& values,
                                const PipelineConfig& config);

}  // namespace scrap
