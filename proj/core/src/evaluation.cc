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

#include "irbench/evaluation.h"

#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>

#include "irbench/error.h"
#include "irbench/extraction.h"
#include "irbench/text.h"

namespace irbench {
namespace {

using ojson = nlohmann::ordered_json;

bool Propagates(ErrorCode code) {
  return code == ErrorCode::kUnavailable || code == ErrorCode::kAuth ||
         code == ErrorCode::kInvalidArgument || code == ErrorCode::kIo;
}

bool CarriesVerdict(MethodKind m) {
  return m == MethodKind::kIdentifyIr || m == MethodKind::kIdentifyShuffleIr ||
         m == MethodKind::kAtf;
}

void AddStages(RunRecord& record, const std::vector<StageTrace>& stages) {
  for (const StageTrace& s : stages) {
    record.prompt_digests.push_back(s.prompt_digest);
    record.completions.push_back(s.completion);
    if (s.finish_reason == FinishReason::kLength) {
      record.flags.insert(RunFlag::kTruncated);
    }
  }
}

std::string TrueDistractor(const CorpusEntry& entry) {
  return entry.perturbed ? entry.perturbed->distractor_sentence : std::string();
}

std::string DemoDigest(const DemoSet& demos) {
  std::string all;
  for (const Demonstration& d : demos.demos) {
    all += d.question;
    all += '\x1f';
    all += d.rationale.value_or("");
    all += '\x1f';
    all += d.ltm_rationale.value_or("");
    all += '\x1f';
    all += FormatRational(d.final_answer);
    all += '\x1e';
  }
  return Sha256Hex(all);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

ojson ConfigEcho(const MethodConfig& config) {
  ojson j;
  j["method"] = MethodFlagName(config.method);
  if (config.method == MethodKind::kAtf) {
    j["downstream"] = MethodFlagName(config.downstream);
  }
  ojson demos;
  demos["count"] = config.demos.demos.size();
  demos["sampling"] = config.demos.sampling_descriptor;
  demos["seed"] = config.demos.rng_seed;
  demos["digest"] = DemoDigest(config.demos);
  j["demos"] = std::move(demos);
  const auto& d = config.reasoning.decoding;
  ojson decoding;
  decoding["model"] = d.model_name;
  decoding["temperature"] = d.temperature;
  decoding["max_tokens"] = d.max_tokens;
  decoding["stop"] = d.stop_sequences;
  j["decoding"] = std::move(decoding);
  if (config.method == MethodKind::kIp ||
      (config.method == MethodKind::kAtf &&
       config.downstream == MethodKind::kIp)) {
    j["ip_instruction"] = config.reasoning.ip_instruction;
  }
  if (config.method == MethodKind::kLtm ||
      (config.method == MethodKind::kAtf &&
       config.downstream == MethodKind::kLtm)) {
    j["ltm_two_call"] = config.reasoning.ltm_two_call;
  }
  if (config.method == MethodKind::kIdentifyShuffleIr) {
    j["identify_shuffle_seed"] = config.identify_shuffle_seed;
  }
  if (config.method == MethodKind::kAtf) {
    ojson atf;
    atf["demo_count"] = config.atf_demos.size();
    std::string rendered;
    for (const auto& demo : config.atf_demos) {
      rendered += RenderAnalysisDemo(demo);
      rendered += '\n';
    }
    atf["demo_digest"] = Sha256Hex(rendered);
    atf["shuffle_seed"] = config.atf_shuffle_seed
                              ? ojson(*config.atf_shuffle_seed)
                              : ojson(nullptr);
    const auto& p = config.atf_prompts;
    atf["prompts_digest"] =
        Sha256Hex(p.key_information + '\x1e' + p.decomposition + '\x1e' +
                  p.clause_analysis + '\x1e' + p.filtration_instruction +
                  '\x1e' + p.filtration_system);
    j["atf"] = std::move(atf);
  }
  if (CarriesVerdict(config.method)) {
    j["id_threshold"] = config.id_threshold;
    j["id_match"] = "token_f1";
  }
  return j;
}

RunRecord RunProblem(const CorpusEntry& entry, const MethodConfig& config,
                     Backend& backend) {
  RunRecord record;
  record.problem_id = entry.id();
  record.method = config.method;
  if (config.method == MethodKind::kAtf) record.downstream = config.downstream;
  const std::string& question = entry.question();
  const std::string distractor = TrueDistractor(entry);
  try {
    if (IsReasoningMethod(config.method)) {
      const ReasoningResult r = RunReasoning(config.method, config.demos,
                                             question, backend, config.reasoning);
      AddStages(record, r.stages);
      record.extracted = r.extracted;
    } else if (config.method == MethodKind::kAtf) {
      AtfOptions options;
      options.downstream = config.downstream;
      options.prompts = config.atf_prompts;
      options.reasoning = config.reasoning;
      options.shuffle_seed = config.atf_shuffle_seed;
      const AtfResult r =
          RunAtf(question, config.atf_demos, config.demos, backend, options);
      AddStages(record, r.stages);
      record.extracted = r.downstream.extracted;
      record.processed_context = r.processed_question;
      if (r.filtration_failed) record.flags.insert(RunFlag::kFiltrationFailed);
      if (r.parse_error) record.flags.insert(RunFlag::kParseError);
      record.error = r.stage_error;
      if (r.analysis) {
        record.identification = MatchIdentification(
            r.analysis->identified_span, distractor,
            !r.analysis->identified_span, config.id_threshold);
      }
    } else {
      const auto demos = IdentifyDemosFrom(config.demos);
      std::optional<std::uint64_t> seed;
      if (config.method == MethodKind::kIdentifyShuffleIr) {
        seed = config.identify_shuffle_seed;
      }
      const PromptBundle bundle = BuildIdentifyPrompt(
          demos, question, seed, config.reasoning.decoding);
      const Completion c = Complete(bundle, backend);
      AddStages(record,
                {{"identify", CacheKey(bundle), c.text, c.finish_reason}});
      std::string claim = ExtractIdentificationClaim(c.text);
      std::optional<std::string> claimed;
      if (!claim.empty()) claimed = std::move(claim);
      record.identification = MatchIdentification(
          claimed, distractor, false, config.id_threshold);
    }
  } catch (const Error& e) {
    if (Propagates(e.code())) throw;
    record.flags.insert(e.code() == ErrorCode::kParse ? RunFlag::kParseError
                                                      : RunFlag::kBackendError);
    record.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
  }
  if (CarriesVerdict(config.method) && !record.identification) {
    record.identification = IdentificationVerdict{};
  }
  record.correct = ScoreAnswer(record.extracted, entry.problem.gold_answer);
  return record;
}

std::vector<RunRecord> RunEvaluation(const Corpus& corpus,
                                     const MethodConfig& config,
                                     Backend& backend,
                                     const EvaluationOptions& options) {
  const std::size_t n = corpus.size();
  std::vector<std::optional<RunRecord>> slots(n);
  std::map<std::string_view, std::size_t> index_of;
  for (std::size_t i = 0; i < n; ++i) index_of[corpus.entries[i].id()] = i;

  std::filesystem::path results_path;
  std::filesystem::path manifest_path;
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    results_path = *options.out_dir / kResultsFileName;
    manifest_path = *options.out_dir / kManifestFileName;
    if (options.resume && std::filesystem::exists(results_path)) {
      for (RunRecord& r : LoadResults(results_path)) {
        auto it = index_of.find(r.problem_id);
        if (it != index_of.end() && r.method == config.method) {
          slots[it->second] = std::move(r);
        }
      }
    }
  }

  auto write_manifest = [&](std::string_view status, std::size_t done) {
    if (!options.out_dir) return;
    ojson m;
    m["tool_version"] = kToolVersion;
    m["status"] = status;
    m["corpus"] = corpus.name;
    m["corpus_format"] = CorpusFormatName(corpus.format);
    m["corpus_size"] = n;
    m["record_count"] = done;
    m["corpus_digest"] = options.corpus_digest;
    m["cache_digest"] = options.cache_digest;
    m["config"] = ConfigEcho(config);
    for (const auto& [k, v] : options.extra.items()) m[k] = v;
    WriteText(manifest_path, m.dump(2) + "\n");
  };
  auto finished = [&] {
    std::vector<RunRecord> out;
    for (const auto& s : slots) {
      if (s) out.push_back(*s);
    }
    return out;
  };

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < n; ++i) {
    if (!slots[i]) pending.push_back(i);
  }

  std::ofstream journal;
  std::mutex journal_mutex;
  if (options.out_dir) {
    // Rewritten in corpus order; completed records are appended below as
    // they land so that a killed run can still be resumed.
    WriteText(results_path, SerializeResults(finished()));
    journal.open(results_path, std::ios::binary | std::ios::app);
    if (!journal) throw Error(ErrorCode::kIo, "cannot append to " + results_path.string());
    write_manifest("incomplete", n - pending.size());
  }

  try {
    ParallelFor(pending.size(), options.max_in_flight, [&](std::size_t k) {
      const std::size_t i = pending[k];
      RunRecord r = RunProblem(corpus.entries[i], config, backend);
      if (journal.is_open()) {
        const std::string line = RunRecordToJson(r).dump() + "\n";
        std::lock_guard<std::mutex> lock(journal_mutex);
        journal << line;
        journal.flush();
      }
      slots[i] = std::move(r);
    });
  } catch (...) {
    if (options.out_dir) {
      journal.close();
      auto done = finished();
      WriteText(results_path, SerializeResults(done));
      write_manifest("incomplete", done.size());
    }
    throw;
  }

  std::vector<RunRecord> records = finished();
  if (options.out_dir) {
    journal.close();
    WriteText(results_path, SerializeResults(records));
    write_manifest("complete", records.size());
  }
  return records;
}

std::string FileDigest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  return Sha256Hex(buf.str());
}

}  // namespace irbench
