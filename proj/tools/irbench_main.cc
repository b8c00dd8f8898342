// Copyright 2026 The irbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// irbench command-line tool.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "irbench/atf.h"
#include "irbench/cache.h"
#include "irbench/corpus.h"
#include "irbench/error.h"
#include "irbench/evaluation.h"
#include "irbench/http_backend.h"
#include "irbench/metrics.h"
#include "irbench/perturb.h"
#include "irbench/prompts.h"
#include "irbench/report.h"
#include "irbench/rng.h"
#include "irbench/run_record.h"

namespace fs = std::filesystem;

namespace irbench {
namespace {

constexpr int kExitError = 1;
constexpr int kExitUnavailable = 3;

void Note(const std::string& message) { std::cerr << "irbench: " << message << "\n"; }

// Owns whatever stack of backends a run needs.
struct BackendStack {
  std::unique_ptr<HttpBackend> live;
  std::shared_ptr<CompletionCache> cache;
  std::unique_ptr<ReplayBackend> replay;
  Backend* top = nullptr;
};

BackendStack MakeBackend(const std::string& kind, const std::string& cache_path,
                         std::string* model_name) {
  BackendStack stack;
  auto make_live = [&] {
    std::string env_model;
    auto config = HttpConfigFromEnv(&env_model);
    if (!config) {
      throw Error(ErrorCode::kInvalidArgument,
                  "live backend needs IRBENCH_ENDPOINT (and usually "
                  "IRBENCH_API_KEY)");
    }
    if (!env_model.empty() && model_name) *model_name = env_model;
    stack.live = std::make_unique<HttpBackend>(std::move(*config));
  };
  if (kind == "live") {
    make_live();
    if (!cache_path.empty()) {
      stack.cache = std::make_shared<CompletionCache>(cache_path);
      stack.replay = std::make_unique<ReplayBackend>(
          stack.cache, ReplayMode::kRecord, stack.live.get());
      stack.top = stack.replay.get();
    } else {
      stack.top = stack.live.get();
    }
  } else if (kind == "replay") {
    if (cache_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--backend replay needs --cache");
    }
    if (!fs::exists(cache_path)) {
      throw Error(ErrorCode::kIo, "cache file not found: " + cache_path);
    }
    stack.cache = std::make_shared<CompletionCache>(cache_path);
    stack.replay =
        std::make_unique<ReplayBackend>(stack.cache, ReplayMode::kStrict);
    stack.top = stack.replay.get();
  } else if (kind == "record") {
    if (cache_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--backend record needs --cache");
    }
    make_live();
    stack.cache = std::make_shared<CompletionCache>(cache_path);
    stack.replay = std::make_unique<ReplayBackend>(
        stack.cache, ReplayMode::kRecord, stack.live.get());
    stack.top = stack.replay.get();
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + kind + "'");
  }
  return stack;
}

void WriteFileOrStdout(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string corpus;
  std::string templates;
  std::uint64_t seed = 0;
  std::string position = "0";
  std::size_t sample = 0;
  std::string out;
  std::string slc_out;
};

int Generate(const GenerateArgs& args) {
  Corpus source = LoadCorpus(args.corpus, CorpusFormat::kGsm8k);
  std::vector<DistractorTemplate> templates =
      args.templates.empty() ? BuiltinTemplates() : LoadTemplates(args.templates);
  Placement placement = Placement::Shuffled();
  if (args.position != "shuffle") {
    try {
      placement = Placement::At(std::stoul(args.position));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--position must be an integer or 'shuffle'");
    }
  }
  std::vector<std::size_t> order(source.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (args.sample > 0 && args.sample < order.size()) {
    Rng rng(MixSeed(args.seed, 0x5a3b1e));
    rng.Shuffle(std::span<std::size_t>(order));
    order.resize(args.sample);
    std::sort(order.begin(), order.end());
  }

  Corpus gsmir;
  gsmir.name = fs::path(args.out).stem().string();
  gsmir.format = CorpusFormat::kGsmir;
  std::size_t skipped = 0;
  for (std::size_t i : order) {
    const ProblemRecord& problem = source.entries[i].problem;
    try {
      PerturbedProblem p =
          PerturbProblem(problem, templates, MixSeed(args.seed, i), placement);
      gsmir.entries.push_back(MakeGsmirEntry(p));
    } catch (const Error& e) {
      ++skipped;
      Note("skipping " + problem.id + ": " + e.what());
    }
  }
  SaveCorpus(gsmir, args.out);
  if (!args.slc_out.empty()) SaveCorpus(StripCorpus(gsmir), args.slc_out);
  Note("wrote " + std::to_string(gsmir.size()) + " perturbed problems to " +
       args.out + (skipped ? " (" + std::to_string(skipped) + " skipped)" : ""));
  return 0;
}

// ------------------------------------------------------ generate-atf-demos

struct AtfDemoArgs {
  std::string corpus;
  std::size_t with_distractor = 6;
  std::size_t clean = 4;
  std::uint64_t seed = 0;
  std::string backend = "live";
  std::string cache;
  std::string prompts;
  std::string model;
  std::string out;
};

int GenerateAtfDemos(const AtfDemoArgs& args) {
  Corpus corpus = LoadCorpus(args.corpus, CorpusFormat::kGsmir);
  if (corpus.size() < args.with_distractor + args.clean) {
    throw Error(ErrorCode::kInvalidArgument,
                "corpus has fewer problems than requested demos");
  }
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(args.seed);
  rng.Shuffle(std::span<std::size_t>(order));

  DecodingParams decoding;
  if (!args.model.empty()) decoding.model_name = args.model;
  BackendStack stack = MakeBackend(args.backend, args.cache, &decoding.model_name);
  const AtfPrompts prompts =
      args.prompts.empty() ? AtfPrompts::Defaults() : AtfPrompts::Load(args.prompts);

  std::vector<AnalysisDemo> demos;
  for (std::size_t k = 0; k < args.with_distractor + args.clean; ++k) {
    const CorpusEntry& entry = corpus.entries[order[k]];
    if (k < args.with_distractor) {
      demos.push_back(
          GenerateAnalysisDemo(*entry.perturbed, *stack.top, prompts, decoding));
    } else {
      demos.push_back(GenerateAnalysisDemo(entry.perturbed->base, *stack.top,
                                           prompts, decoding));
    }
  }
  Rng mix(MixSeed(args.seed, 1));
  mix.Shuffle(std::span<AnalysisDemo>(demos));
  SaveAnalysisDemos(demos, args.out);
  Note("wrote " + std::to_string(demos.size()) + " analysis demos to " + args.out);
  return 0;
}

// --------------------------------------------------------------------- run

struct RunArgs {
  std::string corpus;
  std::string corpus_format = "gsmir";
  std::string method = "cot";
  std::string downstream = "cot";
  std::string backend = "replay";
  std::string cache;
  std::uint64_t seed = 0;
  double id_threshold = kDefaultIdThreshold;
  std::string out;
  std::size_t max_in_flight = 4;
  std::string demos;
  std::string atf_demos;
  std::optional<std::uint64_t> atf_shuffle_seed;
  std::uint64_t identify_shuffle_seed = 0;
  std::string atf_prompts;
  std::string ip_instruction{kDefaultIpInstruction};
  bool ltm_two_call = false;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
  bool resume = false;
};

int Run(const RunArgs& args) {
  const Corpus corpus = LoadCorpus(args.corpus, ParseCorpusFormat(args.corpus_format));
  MethodConfig config;
  config.method = ParseMethodKind(args.method);
  config.downstream = ParseMethodKind(args.downstream);
  config.id_threshold = args.id_threshold;
  config.identify_shuffle_seed = args.identify_shuffle_seed;
  config.atf_shuffle_seed = args.atf_shuffle_seed;
  config.reasoning.ip_instruction = args.ip_instruction;
  config.reasoning.ltm_two_call = args.ltm_two_call;
  config.reasoning.decoding.temperature = args.temperature;
  config.reasoning.decoding.max_tokens = args.max_tokens;

  const MethodKind reasoning =
      config.method == MethodKind::kAtf ? config.downstream : config.method;
  if (reasoning != MethodKind::kZeroCot || !args.demos.empty()) {
    if (args.demos.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(MethodLabel(config.method)) + " needs --demos");
    }
    config.demos = SampleDemoSet(LoadDemonstrations(args.demos), args.seed);
  }
  if (config.method == MethodKind::kAtf) {
    if (args.atf_demos.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "ATF needs --atf-demos");
    }
    config.atf_demos = LoadAnalysisDemos(args.atf_demos);
    if (!args.atf_prompts.empty()) config.atf_prompts = AtfPrompts::Load(args.atf_prompts);
  }

  std::string model = args.model;
  BackendStack stack = MakeBackend(args.backend, args.cache, &model);
  if (!args.model.empty()) model = args.model;
  if (!model.empty()) config.reasoning.decoding.model_name = model;

  EvaluationOptions options;
  options.max_in_flight = args.max_in_flight;
  if (!args.out.empty()) options.out_dir = args.out;
  options.resume = args.resume;
  options.corpus_digest = FileDigest(args.corpus);
  if (args.backend == "replay") options.cache_digest = FileDigest(args.cache);
  options.extra["seeds"] = {{"demo_sampling", args.seed}};
  options.extra["backend"] = args.backend;

  std::vector<RunRecord> records;
  try {
    records = RunEvaluation(corpus, config, *stack.top, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnavailable && e.code() != ErrorCode::kAuth) throw;
    Note(e.what());
    if (options.out_dir) {
      Note("checkpoint written to " + options.out_dir->string() +
           "; rerun with --resume to continue");
    }
    return kExitUnavailable;
  }
  std::size_t flagged = 0;
  for (const RunRecord& r : records) flagged += r.flags.empty() ? 0 : 1;
  std::ostringstream summary;
  summary << records.size() << " records";
  if (!records.empty() &&
      (IsReasoningMethod(config.method) || config.method == MethodKind::kAtf)) {
    summary << ", accuracy " << FormatPercent(ComputeAccuracy(records)) << "%";
  }
  if (!records.empty() && records.front().identification) {
    summary << ", identification " << FormatPercent(ComputeIdentificationRate(records)) << "%";
  }
  if (flagged) summary << ", " << flagged << " flagged";
  if (stack.replay) {
    summary << " (cache hits " << stack.replay->hits() << ", misses "
            << stack.replay->misses() << ")";
  }
  Note(summary.str());
  if (args.out.empty()) std::cout << SerializeResults(records);
  return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string results;
  std::string original;
  std::string identification;
  std::vector<std::string> weak;
  std::string label;
  std::string dataset = "GSMIR";
  std::string out;
};

fs::path ResultsPath(const std::string& path) {
  fs::path p(path);
  return fs::is_directory(p) ? p / kResultsFileName : p;
}

int Analyze(const AnalyzeArgs& args) {
  const fs::path results_path = ResultsPath(args.results);
  std::vector<RunRecord> records = LoadResults(results_path);
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "no records in " + results_path.string());

  MetricsReport report;
  report.dataset = args.dataset;
  report.record_count = records.size();
  const RunRecord& first = records.front();
  report.method = args.label;
  if (report.method.empty()) {
    report.method = std::string(MethodLabel(first.method));
    if (first.downstream) {
      report.method = std::string(MethodLabel(*first.downstream)) + "+ATF";
    }
  }
  const fs::path manifest = results_path.parent_path() / kManifestFileName;
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    report.config_echo = nlohmann::ordered_json::parse(in);
  }

  if (!args.identification.empty()) {
    records = AttachIdentification(records, LoadResults(ResultsPath(args.identification)));
  }
  if (IsReasoningMethod(first.method) || first.method == MethodKind::kAtf) {
    report.accuracy = ComputeAccuracy(records);
  }
  bool all_verdicts = true;
  for (const auto& r : records) all_verdicts &= r.identification.has_value();
  if (all_verdicts) {
    report.identification_rate = ComputeIdentificationRate(records);
    report.recognition_breakdown = ComputeRecognitionBreakdown(records);
  }
  if (!args.original.empty()) {
    report.error_attribution =
        AttributeErrors(records, LoadResults(ResultsPath(args.original)));
  }
  if (!args.weak.empty()) {
    if (!all_verdicts) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--weak needs identification verdicts on --results");
    }
    std::map<std::string, std::vector<RunRecord>> per_method;
    for (const std::string& spec : args.weak) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::kInvalidArgument, "--weak expects LABEL=PATH, got " + spec);
      }
      per_method[spec.substr(0, eq)] = LoadResults(ResultsPath(spec.substr(eq + 1)));
    }
    report.weak_irrelevance =
        WeakIrrelevanceAnalysis(UnrecognizedRecords(records), per_method);
  }
  WriteFileOrStdout(args.out, MetricsReportToJson(report).dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------ cache verify

int VerifyCache(const std::string& path) {
  const CacheVerifyReport r = VerifyCacheFile(path);
  for (const std::string& p : r.problems) std::cout << p << "\n";
  std::cout << path << ": " << r.lines << " lines, " << r.valid << " valid, "
            << r.key_mismatches << " key mismatches, " << r.duplicate_keys
            << " duplicate keys (" << r.conflicting << " conflicting)\n";
  return r.ok() ? 0 : kExitError;
}

// ------------------------------------------------------------------ report

int Report(const std::vector<std::string>& metrics, const std::string& format,
           const std::string& out) {
  std::vector<MetricsReport> reports;
  for (const std::string& m : metrics) reports.push_back(LoadMetricsReport(m));
  WriteFileOrStdout(out, RenderReport(reports, ParseReportFormat(format)));
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Irrelevant-information robustness benchmark for math word problems"};
  app.set_config("--config", "", "key=value configuration file");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  int status = 0;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a GSMIR-style corpus");
  generate->add_option("--corpus", gen.corpus, "GSM8K-format JSONL")->required()->check(CLI::ExistingFile);
  generate->add_option("--templates", gen.templates, "template JSONL (default: built-in)")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "generation seed");
  generate->add_option("--position", gen.position, "sentence index or 'shuffle'")->capture_default_str();
  generate->add_option("--sample", gen.sample, "draw this many problems (0 = all)");
  generate->add_option("--out", gen.out, "output GSMIR JSONL")->required();
  generate->add_option("--slc-out", gen.slc_out, "also write the distractor-free pairs");
  generate->callback([&] { status = Generate(gen); });

  AtfDemoArgs demo;
  auto* gen_demos = app.add_subcommand("generate-atf-demos", "Generate ATF analysis demonstrations");
  gen_demos->add_option("--corpus", demo.corpus, "GSMIR-format JSONL")->required()->check(CLI::ExistingFile);
  gen_demos->add_option("--with-distractor", demo.with_distractor)->capture_default_str();
  gen_demos->add_option("--clean", demo.clean)->capture_default_str();
  gen_demos->add_option("--seed", demo.seed);
  gen_demos->add_option("--backend", demo.backend)->check(CLI::IsMember({"live", "replay", "record"}))->capture_default_str();
  gen_demos->add_option("--cache", demo.cache);
  gen_demos->add_option("--prompts", demo.prompts, "ATF prompt wording JSON")->check(CLI::ExistingFile);
  gen_demos->add_option("--model", demo.model);
  gen_demos->add_option("--out", demo.out)->required();
  gen_demos->callback([&] { status = GenerateAtfDemos(demo); });

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate one method over a corpus");
  run_cmd->add_option("--corpus", run.corpus)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--corpus-format", run.corpus_format)->check(CLI::IsMember({"gsm8k", "gsmir"}))->capture_default_str();
  run_cmd->add_option("--method", run.method)
      ->check(CLI::IsMember({"sp", "cot", "0cot", "ltm", "ip", "identify", "identify-shuffle", "atf"}))
      ->capture_default_str();
  run_cmd->add_option("--downstream", run.downstream, "ATF downstream method")
      ->check(CLI::IsMember({"sp", "cot", "0cot", "ltm", "ip"}))
      ->capture_default_str();
  run_cmd->add_option("--backend", run.backend)->check(CLI::IsMember({"live", "replay", "record"}))->capture_default_str();
  run_cmd->add_option("--cache", run.cache, "completion cache JSONL");
  run_cmd->add_option("--seed", run.seed, "demonstration sampling seed");
  run_cmd->add_option("--id-threshold", run.id_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  run_cmd->add_option("--out", run.out, "output directory (results.jsonl, manifest.json)");
  run_cmd->add_option("--max-in-flight", run.max_in_flight)->check(CLI::PositiveNumber)->capture_default_str();
  run_cmd->add_option("--demos", run.demos, "demonstration pool JSONL")->check(CLI::ExistingFile);
  run_cmd->add_option("--atf-demos", run.atf_demos, "analysis demos JSONL")->check(CLI::ExistingFile);
  run_cmd->add_option("--atf-shuffle-seed", run.atf_shuffle_seed, "relocate distractors in analysis demos");
  run_cmd->add_option("--atf-prompts", run.atf_prompts, "ATF prompt wording JSON")->check(CLI::ExistingFile);
  run_cmd->add_option("--identify-shuffle-seed", run.identify_shuffle_seed);
  run_cmd->add_option("--ip-instruction", run.ip_instruction);
  run_cmd->add_flag("--ltm-two-call", run.ltm_two_call, "separate decompose and solve calls");
  run_cmd->add_option("--model", run.model);
  run_cmd->add_option("--temperature", run.temperature)->capture_default_str();
  run_cmd->add_option("--max-tokens", run.max_tokens)->capture_default_str();
  run_cmd->add_flag("--resume", run.resume, "skip problems already in --out");
  run_cmd->callback([&] { status = Run(run); });

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Compute metrics for a results file");
  analyze->add_option("--results", an.results, "results.jsonl or run directory")->required()->check(CLI::ExistingPath);
  analyze->add_option("--original", an.original, "paired run on the distractor-free corpus")->check(CLI::ExistingPath);
  analyze->add_option("--identification", an.identification, "identification run whose verdicts to attach")->check(CLI::ExistingPath);
  analyze->add_option("--weak", an.weak, "LABEL=PATH of a method run, for weak-irrelevance");
  analyze->add_option("--label", an.label, "row label (default: from the records)");
  analyze->add_option("--dataset", an.dataset, "column label")->capture_default_str();
  analyze->add_option("--out", an.out, "metrics JSON (default: stdout)");
  analyze->callback([&] { status = Analyze(an); });

  std::string cache_path;
  auto* cache = app.add_subcommand("cache", "Completion cache utilities");
  cache->require_subcommand(1);
  auto* verify = cache->add_subcommand("verify", "Recompute and check every cache key");
  verify->add_option("--cache", cache_path)->required()->check(CLI::ExistingFile);
  verify->callback([&] { status = VerifyCache(cache_path); });

  std::vector<std::string> metrics;
  std::string format = "md";
  std::string report_out;
  auto* report = app.add_subcommand("report", "Render metrics files as a table");
  report->add_option("metrics", metrics, "metrics JSON files")->required()->check(CLI::ExistingFile);
  report->add_option("--format", format)->check(CLI::IsMember({"md", "csv", "json"}))->capture_default_str();
  report->add_option("--out", report_out);
  report->callback([&] { status = Report(metrics, format, report_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    Note(std::string(ErrorCodeName(e.code())) + ": " + e.what());
    return kExitError;
  } catch (const std::exception& e) {
    Note(e.what());
    return kExitError;
  }
  return status;
}

}  // namespace
}  // namespace irbench

int main(int argc, char** argv) { return irbench::Main(argc, argv); }
