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

#include "irbench/prompts.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "irbench/error.h"
#include "irbench/perturb.h"
#include "irbench/rng.h"
#include "irbench/text.h"

namespace irbench {
namespace {

constexpr std::string_view kDemoSeparator = "\n\n";

struct MethodName {
  MethodKind kind;
  std::string_view flag;
  std::string_view label;
};

constexpr MethodName kMethodNames[] = {
    {MethodKind::kSp, "sp", "SP"},
    {MethodKind::kCot, "cot", "COT"},
    {MethodKind::kZeroCot, "0cot", "0-COT"},
    {MethodKind::kLtm, "ltm", "LTM"},
    {MethodKind::kIp, "ip", "IP"},
    {MethodKind::kIdentifyIr, "identify", "Identify-Ir-Prompt"},
    {MethodKind::kIdentifyShuffleIr, "identify-shuffle",
     "Identify-Shuffle-Ir-Prompt"},
    {MethodKind::kAtf, "atf", "ATF"},
};

PromptBundle UserBundle(std::string text, const DecodingParams& decoding) {
  PromptBundle bundle;
  bundle.messages.push_back({ChatRole::kUser, std::move(text)});
  bundle.decoding = decoding;
  return bundle;
}

std::string AnswerLine(const Rational& answer) {
  return std::string(kAnswerSentinel) + " " + FormatRational(answer) + ".";
}

std::string TestBlock(std::string_view question) {
  return "Q: " + std::string(question) + "\nA:";
}

template <typename RenderDemo>
std::string Render(const DemoSet& demos, std::string_view preamble,
                   RenderDemo render, std::string_view test_block) {
  std::string out(preamble);
  for (const Demonstration& d : demos.demos) {
    out += render(d);
    out += kDemoSeparator;
  }
  out += test_block;
  return out;
}

std::string CotDemo(const Demonstration& d) {
  if (!d.rationale || Trim(*d.rationale).empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "demonstration has no rationale: " + d.question);
  }
  return "Q: " + d.question + "\nA: " + std::string(Trim(*d.rationale)) + " " +
         AnswerLine(d.final_answer);
}

const std::string& LtmRationale(const Demonstration& d) {
  if (!d.ltm_rationale || d.ltm_rationale->find("1)") == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "demonstration has no decomposition rationale: " + d.question);
  }
  return *d.ltm_rationale;
}

std::string LtmDemo(const Demonstration& d) {
  return "Q: " + d.question + "\nA: " + std::string(kLtmLead) + " " +
         std::string(Trim(LtmRationale(d))) + " " + AnswerLine(d.final_answer);
}

std::vector<std::size_t> Pick(std::size_t pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.Below(pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

std::string IdentifyBlock(std::string_view question) {
  return "Q: " + std::string(question) + " Q: " + std::string(kIdentifyProbe) +
         " A:";
}

}  // namespace

std::string_view MethodFlagName(MethodKind kind) {
  for (const auto& m : kMethodNames) {
    if (m.kind == kind) return m.flag;
  }
  return "cot";
}

std::string_view MethodLabel(MethodKind kind) {
  for (const auto& m : kMethodNames) {
    if (m.kind == kind) return m.label;
  }
  return "COT";
}

MethodKind ParseMethodKind(std::string_view name) {
  for (const auto& m : kMethodNames) {
    if (m.flag == name || m.label == name) return m.kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) + "'");
}

bool IsReasoningMethod(MethodKind kind) {
  switch (kind) {
    case MethodKind::kSp:
    case MethodKind::kCot:
    case MethodKind::kZeroCot:
    case MethodKind::kLtm:
    case MethodKind::kIp:
      return true;
    default:
      return false;
  }
}

std::vector<Demonstration> LoadDemonstrations(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Demonstration> demos;
  std::string line;
  std::size_t line_no = 0;
  auto optional_text = [](const nlohmann::json& j, const char* key)
      -> std::optional<std::string> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::string>();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    }
    const char* field = "question";
    try {
      Demonstration d;
      d.question = j.at("question").get<std::string>();
      if (Trim(d.question).empty()) {
        throw LineError(ErrorCode::kParse, line_no, field, "empty question");
      }
      field = "rationale";
      d.rationale = optional_text(j, "rationale");
      field = "ltm_rationale";
      d.ltm_rationale = optional_text(j, "ltm_rationale");
      if (d.ltm_rationale && d.ltm_rationale->find("1)") == std::string::npos) {
        throw LineError(ErrorCode::kParse, line_no, field,
                        "decomposition must enumerate sub-questions");
      }
      field = "answer";
      const auto& answer = j.at("answer");
      std::string text =
          answer.is_string() ? answer.get<std::string>() : answer.dump();
      auto value = ParseNumber(Trim(text));
      if (!value) {
        throw LineError(ErrorCode::kParse, line_no, field,
                        "not a number: " + text);
      }
      d.final_answer = *value;
      field = "has_distractor";
      d.has_distractor = j.value("has_distractor", false);
      field = "distractor";
      d.distractor = optional_text(j, "distractor");
      if (d.has_distractor) {
        if (!d.distractor || Trim(*d.distractor).empty()) {
          throw LineError(ErrorCode::kParse, line_no, field,
                          "distractor-bearing demo without distractor");
        }
        if (d.question.find(*d.distractor) == std::string::npos) {
          throw LineError(ErrorCode::kParse, line_no, field,
                          "distractor not found in question");
        }
      }
      demos.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::kParse, line_no, field, e.what());
    }
  }
  return demos;
}

DemoSet SampleDemoSet(std::span<const Demonstration> distractor_pool,
                      std::span<const Demonstration> clean_pool,
                      std::uint64_t seed, DemoComposition composition) {
  if (distractor_pool.size() < composition.with_distractor ||
      clean_pool.size() < composition.clean) {
    throw Error(ErrorCode::kInvalidArgument,
                "demonstration pools too small: need " +
                    std::to_string(composition.with_distractor) + " + " +
                    std::to_string(composition.clean) + ", have " +
                    std::to_string(distractor_pool.size()) + " + " +
                    std::to_string(clean_pool.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& d : distractor_pool) seen.insert(d.question);
  for (const auto& d : clean_pool) {
    if (seen.count(d.question)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "demonstration pools overlap: " + d.question);
    }
  }
  Rng rng(seed);
  DemoSet set;
  set.rng_seed = seed;
  for (std::size_t i :
       Pick(distractor_pool.size(), composition.with_distractor, rng)) {
    set.demos.push_back(distractor_pool[i]);
  }
  for (std::size_t i : Pick(clean_pool.size(), composition.clean, rng)) {
    set.demos.push_back(clean_pool[i]);
  }
  rng.Shuffle(std::span<Demonstration>(set.demos));
  set.sampling_descriptor =
      "distractor=" + std::to_string(composition.with_distractor) +
      ",clean=" + std::to_string(composition.clean) +
      ",seed=" + std::to_string(seed);
  return set;
}

DemoSet SampleDemoSet(std::span<const Demonstration> pool, std::uint64_t seed,
                      DemoComposition composition) {
  std::vector<Demonstration> distractor;
  std::vector<Demonstration> clean;
  for (const auto& d : pool) (d.has_distractor ? distractor : clean).push_back(d);
  return SampleDemoSet(distractor, clean, seed, composition);
}

PromptBundle BuildSpPrompt(const DemoSet& demos, std::string_view question,
                           const DecodingParams& decoding) {
  auto render = [](const Demonstration& d) {
    return "Q: " + d.question + "\nA: " + AnswerLine(d.final_answer);
  };
  return UserBundle(Render(demos, "", render, TestBlock(question)), decoding);
}

PromptBundle BuildCotPrompt(const DemoSet& demos, std::string_view question,
                            const DecodingParams& decoding) {
  return UserBundle(Render(demos, "", CotDemo, TestBlock(question)), decoding);
}

PromptBundle BuildLtmPrompt(const DemoSet& demos, std::string_view question,
                            const DecodingParams& decoding) {
  return UserBundle(Render(demos, "", LtmDemo, TestBlock(question)), decoding);
}

PromptBundle BuildIpPrompt(const DemoSet& demos, std::string_view question,
                           std::string_view instruction,
                           const DecodingParams& decoding) {
  if (Trim(instruction).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "IP instruction is empty");
  }
  std::string preamble = std::string(Trim(instruction)) + "\n\n";
  return UserBundle(Render(demos, preamble, CotDemo, TestBlock(question)),
                    decoding);
}

PromptBundle ZeroCotPrompts::Stage1() const {
  return UserBundle(TestBlock(question) + " " + std::string(kZeroCotTrigger),
                    decoding);
}

PromptBundle ZeroCotPrompts::Stage2(std::string_view stage1_output) const {
  std::string text = Stage1().messages.front().content;
  text += " ";
  text += Trim(stage1_output);
  text += "\n";
  text += kZeroCotAnswerCue;
  return UserBundle(std::move(text), decoding);
}

ZeroCotPrompts BuildZeroCotPrompts(std::string_view question,
                                   const DecodingParams& decoding) {
  if (Trim(question).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "question is empty");
  }
  return ZeroCotPrompts{std::string(question), decoding};
}

PromptBundle BuildLtmDecomposePrompt(const DemoSet& demos,
                                     std::string_view question,
                                     const DecodingParams& decoding) {
  auto render = [](const Demonstration& d) {
    return "Q: " + d.question + "\nA: " + std::string(kLtmLead) + " " +
           std::string(Trim(LtmRationale(d)));
  };
  return UserBundle(Render(demos, "", render,
                           TestBlock(question) + " " + std::string(kLtmLead)),
                    decoding);
}

PromptBundle BuildLtmSolvePrompt(const DemoSet& demos,
                                 std::string_view question,
                                 std::string_view decomposition,
                                 const DecodingParams& decoding) {
  std::string test = TestBlock(question) + " " + std::string(kLtmLead) + " " +
                     std::string(Trim(decomposition));
  return UserBundle(Render(demos, "", LtmDemo, test), decoding);
}

std::vector<IdentifyDemo> IdentifyDemosFrom(const DemoSet& demos) {
  std::vector<IdentifyDemo> out;
  for (const Demonstration& d : demos.demos) {
    IdentifyDemo demo;
    demo.question = d.question;
    if (d.has_distractor && d.distractor) {
      demo.perturbed = PerturbedFromText(d.question, *d.distractor);
      demo.perturbed->base.gold_answer = d.final_answer;
      demo.expected_identification = *d.distractor;
    } else {
      demo.expected_identification = std::string(kNoIrrelevantPhrase);
    }
    out.push_back(std::move(demo));
  }
  return out;
}

PromptBundle BuildIdentifyPrompt(std::span<const IdentifyDemo> demos,
                                 std::string_view question,
                                 std::optional<std::uint64_t> shuffle_seed,
                                 const DecodingParams& decoding) {
  std::string out;
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const IdentifyDemo& d = demos[i];
    std::string q = d.question;
    if (shuffle_seed && d.perturbed) {
      q = ShuffleDistractorPosition(*d.perturbed, MixSeed(*shuffle_seed, i))
              .question;
    }
    out += "[" + IdentifyBlock(q) + " " + std::string(kAnswerSentinel) + " " +
           d.expected_identification + "]";
    out += kDemoSeparator;
  }
  out += IdentifyBlock(question);
  return UserBundle(std::move(out), decoding);
}

}  // namespace irbench
