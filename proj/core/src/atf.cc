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

#include "irbench/atf.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/extraction.h"
#include "irbench/perturb.h"
#include "irbench/rng.h"
#include "irbench/text.h"

namespace irbench {
namespace {

constexpr std::string_view kDemoSeparator = "\n\n";
constexpr std::string_view kKeyInfoLabel = "Key information:";

std::string Fill(std::string text, std::string_view question,
                 std::string_view key_information = {},
                 std::string_view clauses = {}) {
  text = ReplaceAll(std::move(text), "{key_information}", key_information);
  text = ReplaceAll(std::move(text), "{clauses}", clauses);
  return ReplaceAll(std::move(text), "{question}", question);
}

PromptBundle UserBundle(std::string text, const DecodingParams& decoding) {
  PromptBundle bundle;
  bundle.messages.push_back({ChatRole::kUser, std::move(text)});
  bundle.decoding = decoding;
  return bundle;
}

std::string Head(std::string_view text, std::size_t n = 160) {
  if (text.size() <= n) return std::string(text);
  while (n > 0 && (static_cast<unsigned char>(text[n]) & 0xC0) == 0x80) --n;
  return std::string(text.substr(0, n)) + "...";
}

[[noreturn]] void GenerationFailure(std::string_view stage,
                                    std::string_view raw,
                                    std::string_view what) {
  throw Error(ErrorCode::kGeneration, "analysis demo stage '" +
                                          std::string(stage) + "': " +
                                          std::string(what) + "; raw: " +
                                          Head(raw));
}

// r(p) and a(p) out of the text following "Because".
struct SplitAnalysis {
  std::string rationale;
  std::string answer;
};

std::optional<SplitAnalysis> SplitOnFinally(std::string_view text) {
  const auto pos = RFindCaseInsensitive(text, kFinallyMarker);
  if (pos == std::string_view::npos) return std::nullopt;
  std::string_view rationale = Trim(text.substr(0, pos));
  if (!rationale.empty() && rationale.back() == ',') {
    rationale = Trim(rationale.substr(0, rationale.size() - 1));
  }
  std::string_view answer = Trim(text.substr(pos + kFinallyMarker.size()));
  if (!answer.empty() && answer.back() == ']') {
    answer = Trim(answer.substr(0, answer.size() - 1));
  }
  return SplitAnalysis{std::string(rationale), std::string(answer)};
}

std::string NumberedClauses(std::span<const std::string> clauses) {
  std::string out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ". \"" + clauses[i] + "\"";
  }
  return out;
}

std::string ParseKeyInformation(std::string_view raw) {
  std::string_view text = Trim(raw);
  if (auto pos = RFindCaseInsensitive(text, kKeyInfoLabel);
      pos != std::string_view::npos) {
    text = Trim(text.substr(pos + kKeyInfoLabel.size()));
  }
  text = Trim(text.substr(0, text.find('\n')));
  while (!text.empty() && (text.back() == '.' || text.back() == ';')) {
    text = Trim(text.substr(0, text.size() - 1));
  }
  if (text.empty()) GenerationFailure("key_information", raw, "empty");
  if (text.find(';') != std::string_view::npos ||
      RFindCaseInsensitive(text, kFinallyMarker) != std::string_view::npos) {
    GenerationFailure("key_information", raw, "reserved text in answer");
  }
  return std::string(text);
}

std::vector<std::string> ParseDecomposition(std::string_view raw) {
  static const std::regex kLine(R"(^\s*(\d+)\s*[.):]\s*(.+?)\s*$)");
  std::vector<std::string> clauses;
  std::istringstream in{std::string(raw)};
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) continue;
    if (std::stoul(m[1].str()) != clauses.size() + 1) {
      GenerationFailure("decomposition", raw, "sub-clauses out of order");
    }
    std::string clause = m[2].str();
    if (clause.size() >= 2 && clause.front() == '"' && clause.back() == '"') {
      clause = clause.substr(1, clause.size() - 2);
    }
    if (Trim(clause).empty()) {
      GenerationFailure("decomposition", raw, "empty sub-clause");
    }
    clauses.push_back(std::move(clause));
  }
  if (clauses.empty()) GenerationFailure("decomposition", raw, "no sub-clauses");
  return clauses;
}

std::vector<ClauseVerdict> ParseClauseAnalysis(
    std::string_view raw, std::span<const std::string> clauses) {
  static const std::regex kLine(
      R"(^\s*(?:sub-clause\s*)?(\d+)\s*[.):]?\s*(?:is\s+)?(irrelevant|relevant)\b[\s,:-]*(?:because\s+)?(.*?)\s*$)",
      std::regex::icase);
  std::vector<ClauseVerdict> verdicts;
  std::istringstream in{std::string(raw)};
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) continue;
    const std::size_t index = std::stoul(m[1].str());
    if (index != verdicts.size() + 1 || index > clauses.size()) {
      GenerationFailure("clause_analysis", raw, "verdicts out of order");
    }
    std::string reason = m[3].str();
    while (!reason.empty() && (reason.back() == '.' || reason.back() == ';')) {
      reason.pop_back();
    }
    if (Trim(reason).empty() || reason.find(';') != std::string::npos) {
      GenerationFailure("clause_analysis", raw,
                        "bad reason for sub-clause " + std::to_string(index));
    }
    verdicts.push_back({index, clauses[index - 1],
                        ToLowerAscii(m[2].str()) == "irrelevant",
                        std::string(Trim(reason))});
  }
  if (verdicts.size() != clauses.size()) {
    GenerationFailure("clause_analysis", raw,
                      "expected " + std::to_string(clauses.size()) +
                          " verdicts, got " + std::to_string(verdicts.size()));
  }
  return verdicts;
}

AnalysisDemo GenerateDemo(std::string_view question, std::string answer,
                          Backend& backend, const AtfPrompts& prompts,
                          const DecodingParams& decoding) {
  const std::string key_raw =
      Complete(UserBundle(Fill(prompts.key_information, question), decoding),
               backend)
          .text;
  const std::string key = ParseKeyInformation(key_raw);
  const std::string decomposition_raw =
      Complete(UserBundle(Fill(prompts.decomposition, question, key), decoding),
               backend)
          .text;
  const std::vector<std::string> clauses = ParseDecomposition(decomposition_raw);
  const std::string analysis_raw =
      Complete(UserBundle(Fill(prompts.clause_analysis, question, key,
                               NumberedClauses(clauses)),
                          decoding),
               backend)
          .text;
  const auto verdicts = ParseClauseAnalysis(analysis_raw, clauses);
  AnalysisDemo demo{std::string(question), RenderRationale(key, verdicts),
                    std::move(answer)};
  try {
    ValidateAnalysisDemo(demo);
  } catch (const Error& e) {
    GenerationFailure("render", RenderAnalysisDemo(demo), e.what());
  }
  return demo;
}

}  // namespace

AtfPrompts AtfPrompts::Defaults() {
  AtfPrompts p;
  p.key_information =
      "Read the following math word problem and state the key information "
      "needed to answer its question. Reply with a single line starting with "
      "\"Key information:\".\n\nProblem: {question}";
  p.decomposition =
      "Split the following math word problem into sub-clauses, one per "
      "sentence, copied verbatim. Reply with a numbered list, one sub-clause "
      "per line.\n\nProblem: {question}\nKey information: {key_information}";
  p.clause_analysis =
      "For each numbered sub-clause of the problem below, decide whether it "
      "is relevant or irrelevant to answering the question, given the key "
      "information. Reply with one line per sub-clause, either \"<number>. "
      "relevant because <reason>\" or \"<number>. irrelevant because "
      "<reason>\".\n\nProblem: {question}\nKey information: "
      "{key_information}\nSub-clauses:\n{clauses}";
  p.filtration_instruction = std::string(kDefaultFiltrationInstruction);
  p.filtration_system =
      "Reply in the form \"Processed Context: <context>\".";
  return p;
}

AtfPrompts AtfPrompts::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, path.string() + ": expected an object");
  }
  AtfPrompts p = Defaults();
  const std::pair<const char*, std::string*> fields[] = {
      {"key_information", &p.key_information},
      {"decomposition", &p.decomposition},
      {"clause_analysis", &p.clause_analysis},
      {"filtration_instruction", &p.filtration_instruction},
      {"filtration_system", &p.filtration_system},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(std::begin(fields), std::end(fields),
                           [&](const auto& f) { return key == f.first; });
    if (it == std::end(fields) || !value.is_string()) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": unknown or non-string field '" + key + "'");
    }
    *it->second = value.get<std::string>();
  }
  for (const std::string* t :
       {&p.key_information, &p.decomposition, &p.clause_analysis}) {
    if (t->find("{question}") == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": sub-prompt lacks {question}");
    }
  }
  if (p.clause_analysis.find("{clauses}") == std::string::npos) {
    throw Error(ErrorCode::kParse,
                path.string() + ": clause_analysis lacks {clauses}");
  }
  if (Trim(p.filtration_instruction).empty()) {
    throw Error(ErrorCode::kParse, path.string() + ": empty instruction");
  }
  return p;
}

std::string RenderAnalysisDemo(const AnalysisDemo& demo) {
  return "[Q: " + demo.question + ", A: " + std::string(kBecauseMarker) + " " +
         demo.analysis_rationale + ", " + std::string(kFinallyMarker) + " " +
         demo.identified_answer + "]";
}

void ValidateAnalysisDemo(const AnalysisDemo& demo) {
  if (Trim(demo.question).empty() || Trim(demo.analysis_rationale).empty() ||
      Trim(demo.identified_answer).empty()) {
    throw Error(ErrorCode::kGeneration, "analysis demo has an empty part");
  }
  const std::string rendered = RenderAnalysisDemo(demo);
  const std::string lead = "[Q: " + demo.question + ", A: " +
                           std::string(kBecauseMarker) + " ";
  auto split = SplitOnFinally(
      std::string_view(rendered).substr(lead.size()));
  if (!split || split->rationale != Trim(demo.analysis_rationale) ||
      split->answer != Trim(demo.identified_answer) ||
      demo.analysis_rationale != Trim(demo.analysis_rationale) ||
      demo.identified_answer != Trim(demo.identified_answer)) {
    throw Error(ErrorCode::kGeneration,
                "analysis demo does not round-trip: " + Head(rendered));
  }
}

std::vector<AnalysisDemo> LoadAnalysisDemos(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<AnalysisDemo> demos;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const char* field = "";
    try {
      const auto j = nlohmann::json::parse(line);
      AnalysisDemo d;
      field = "question";
      d.question = j.at("question").get<std::string>();
      field = "rationale";
      d.analysis_rationale = j.at("rationale").get<std::string>();
      field = "answer";
      d.identified_answer = j.at("answer").get<std::string>();
      field = "";
      ValidateAnalysisDemo(d);
      demos.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::kParse, line_no, field, e.what());
    } catch (const LineError&) {
      throw;
    } catch (const Error& e) {
      throw LineError(ErrorCode::kParse, line_no, field, e.what());
    }
  }
  return demos;
}

void SaveAnalysisDemos(std::span<const AnalysisDemo> demos,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const AnalysisDemo& d : demos) {
    nlohmann::ordered_json j;
    j["question"] = d.question;
    j["rationale"] = d.analysis_rationale;
    j["answer"] = d.identified_answer;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string RenderRationale(std::string_view key_information,
                            std::span<const ClauseVerdict> verdicts) {
  std::string out = "the key information is " + std::string(key_information) +
                    "; the question can be split into " +
                    std::to_string(verdicts.size()) + " sub-clauses";
  for (const ClauseVerdict& v : verdicts) {
    out += "; sub-clause " + std::to_string(v.index) + " \"" + v.clause +
           "\" is " + (v.irrelevant ? "irrelevant" : "relevant") +
           " because " + v.reason;
  }
  return out;
}

std::vector<ClauseVerdict> ParseClauseVerdicts(std::string_view rationale) {
  static const std::regex kVerdict(
      R"re(sub-clause (\d+) "(.*?)" is (irrelevant|relevant) because ([^;]*))re");
  std::vector<ClauseVerdict> out;
  const std::string text(rationale);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kVerdict);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out.push_back({std::stoul(m[1].str()), m[2].str(),
                   m[3].str() == "irrelevant",
                   std::string(Trim(m[4].str()))});
  }
  return out;
}

AnalysisDemo GenerateAnalysisDemo(const PerturbedProblem& seed_problem,
                                  Backend& backend, const AtfPrompts& prompts,
                                  const DecodingParams& decoding) {
  if (Trim(seed_problem.distractor_sentence).empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "seed problem carries no distractor");
  }
  return GenerateDemo(seed_problem.question, seed_problem.distractor_sentence,
                      backend, prompts, decoding);
}

AnalysisDemo GenerateAnalysisDemo(const ProblemRecord& clean_problem,
                                  Backend& backend, const AtfPrompts& prompts,
                                  const DecodingParams& decoding) {
  return GenerateDemo(clean_problem.question, std::string(kNoIrrelevantPhrase),
                      backend, prompts, decoding);
}

AnalysisDemo ShuffleAnalysisDemo(const AnalysisDemo& demo, std::uint64_t seed) {
  if (IsNoIrrelevantClaim(demo.identified_answer) ||
      demo.question.find(demo.identified_answer) == std::string::npos) {
    return demo;
  }
  const PerturbedProblem original =
      PerturbedFromText(demo.question, demo.identified_answer);
  const PerturbedProblem moved = ShuffleDistractorPosition(original, seed);
  AnalysisDemo out = demo;
  out.question = moved.question;

  auto verdicts = ParseClauseVerdicts(demo.analysis_rationale);
  const auto spans = SplitSentences(demo.question);
  auto distractor = std::find_if(verdicts.begin(), verdicts.end(),
                                 [&](const ClauseVerdict& v) {
                                   return v.irrelevant &&
                                          v.clause == demo.identified_answer;
                                 });
  if (verdicts.size() != spans.size() || distractor == verdicts.end()) {
    return out;
  }
  const auto key_end = demo.analysis_rationale.find("; the question can be split");
  const std::string prefix = "the key information is ";
  if (key_end == std::string::npos || !StartsWith(demo.analysis_rationale, prefix)) {
    return out;
  }
  const std::string key =
      demo.analysis_rationale.substr(prefix.size(), key_end - prefix.size());
  ClauseVerdict moved_verdict = *distractor;
  verdicts.erase(distractor);
  const std::size_t slot = std::min(moved.insertion_index, verdicts.size());
  verdicts.insert(verdicts.begin() + static_cast<std::ptrdiff_t>(slot),
                  moved_verdict);
  for (std::size_t i = 0; i < verdicts.size(); ++i) verdicts[i].index = i + 1;
  out.analysis_rationale = RenderRationale(key, verdicts);
  return out;
}

PromptBundle BuildAnalysisPrompt(std::span<const AnalysisDemo> demos,
                                 std::string_view question,
                                 const DecodingParams& decoding) {
  std::string text;
  for (const AnalysisDemo& d : demos) {
    text += RenderAnalysisDemo(d);
    text += kDemoSeparator;
  }
  text += "Q: " + std::string(question) + ", A: " + std::string(kBecauseMarker);
  return UserBundle(std::move(text), decoding);
}

AnalysisOutcome ParseAnalysisCompletion(std::string_view question,
                                        std::string_view completion) {
  AnalysisOutcome out;
  out.raw_completion = std::string(completion);
  out.clauses = SplitSentences(question);
  std::string_view body = Trim(completion);
  if (StartsWith(body, kBecauseMarker)) body.remove_prefix(kBecauseMarker.size());
  auto split = SplitOnFinally(body);
  if (!split) {
    throw Error(ErrorCode::kParse, "analysis output lacks \"" +
                                       std::string(kFinallyMarker) +
                                       "\": " + Head(completion));
  }
  if (split->answer.empty()) {
    throw Error(ErrorCode::kParse, "analysis output has an empty answer");
  }
  out.rationale = split->rationale;
  auto verdicts = ParseClauseVerdicts(out.rationale);
  if (verdicts.size() == out.clauses.size()) out.verdicts = std::move(verdicts);
  if (!IsNoIrrelevantClaim(split->answer)) {
    out.identified_span = std::move(split->answer);
  }
  return out;
}

AnalysisOutcome RunAnalysis(std::string_view question,
                            std::span<const AnalysisDemo> demos,
                            Backend& backend, const DecodingParams& decoding) {
  if (demos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ATF analysis needs demos");
  }
  const Completion c =
      Complete(BuildAnalysisPrompt(demos, question, decoding), backend);
  return ParseAnalysisCompletion(question, c.text);
}

PromptBundle BuildFiltrationPrompt(std::string_view question,
                                   std::string_view identified_span,
                                   const AtfPrompts& prompts,
                                   const DecodingParams& decoding) {
  PromptBundle bundle;
  if (!prompts.filtration_system.empty()) {
    bundle.messages.push_back({ChatRole::kSystem, prompts.filtration_system});
  }
  bundle.messages.push_back(
      {ChatRole::kUser, std::string(question) + "\n" +
                            std::string(identified_span) + "\nQ: " +
                            prompts.filtration_instruction + "\nA: " +
                            std::string(kProcessedContextMarker)});
  bundle.decoding = decoding;
  return bundle;
}

namespace {

FiltrationOutcome FinishFiltration(std::string_view question,
                                   std::string raw) {
  FiltrationOutcome out;
  out.processed_context = ParseFiltration(raw);
  out.removed_any =
      CollapseWhitespace(out.processed_context) != CollapseWhitespace(question);
  out.raw_completion = std::move(raw);
  return out;
}

FiltrationOutcome PassThrough(std::string_view question) {
  return FiltrationOutcome{std::string(question), false, ""};
}

}  // namespace

FiltrationOutcome RunFiltration(std::string_view question,
                                const AnalysisOutcome& analysis,
                                Backend& backend, const AtfPrompts& prompts,
                                const DecodingParams& decoding) {
  if (!analysis.identified_span) return PassThrough(question);
  Completion c = Complete(
      BuildFiltrationPrompt(question, *analysis.identified_span, prompts,
                            decoding),
      backend);
  return FinishFiltration(question, std::move(c.text));
}

AtfResult RunAtf(std::string_view question,
                 std::span<const AnalysisDemo> demos, const DemoSet& demoset,
                 Backend& backend, const AtfOptions& options) {
  if (!IsReasoningMethod(options.downstream)) {
    throw Error(ErrorCode::kInvalidArgument,
                "ATF downstream must be a reasoning method, got " +
                    std::string(MethodLabel(options.downstream)));
  }
  if (demos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ATF analysis needs demos");
  }
  std::vector<AnalysisDemo> shuffled;
  if (options.shuffle_seed) {
    for (std::size_t i = 0; i < demos.size(); ++i) {
      shuffled.push_back(
          ShuffleAnalysisDemo(demos[i], MixSeed(*options.shuffle_seed, i)));
    }
    demos = shuffled;
  }

  const DecodingParams& decoding = options.reasoning.decoding;
  AtfResult result;
  result.processed_question = std::string(question);
  auto call = [&](std::string stage, const PromptBundle& bundle) {
    Completion c = Complete(bundle, backend);
    result.stages.push_back(
        {std::move(stage), CacheKey(bundle), std::move(c.text), c.finish_reason});
    return result.stages.back().completion;
  };

  try {
    const std::string raw =
        call("analysis", BuildAnalysisPrompt(demos, question, decoding));
    result.analysis = ParseAnalysisCompletion(question, raw);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    result.parse_error = true;
    result.filtration_failed = true;
    result.stage_error = std::string("analysis: ") + e.what();
  }

  if (result.analysis) {
    if (!result.analysis->identified_span) {
      result.filtration = PassThrough(question);
    } else {
      try {
        std::string raw = call(
            "filtration",
            BuildFiltrationPrompt(question, *result.analysis->identified_span,
                                  options.prompts, decoding));
        result.filtration = FinishFiltration(question, std::move(raw));
        result.processed_question = result.filtration->processed_context;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kParse) throw;
        result.filtration_failed = true;
        result.stage_error = std::string("filtration: ") + e.what();
      }
    }
  }

  result.downstream = RunReasoning(options.downstream, demoset,
                                   result.processed_question, backend,
                                   options.reasoning);
  for (const StageTrace& t : result.downstream.stages) {
    result.stages.push_back(t);
  }
  return result;
}

}  // namespace irbench
