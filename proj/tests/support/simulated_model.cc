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

#include "simulated_model.h"

#include <cstdint>
#include <regex>
#include <sstream>
#include <vector>

#include "irbench/atf.h"
#include "irbench/error.h"
#include "irbench/extraction.h"
#include "irbench/prompts.h"
#include "irbench/text.h"

namespace irbench::testing {
namespace {

std::uint64_t Fnv(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

const std::string& LastUser(const PromptBundle& bundle) {
  for (auto it = bundle.messages.rbegin(); it != bundle.messages.rend(); ++it) {
    if (it->role == ChatRole::kUser) return it->content;
  }
  throw Error(ErrorCode::kInvalidArgument, "no user message");
}

// Start of the last block that opens with "Q: " at a line start.
std::size_t LastBlock(std::string_view text) {
  std::size_t pos = text.rfind("\nQ: ");
  if (pos != std::string_view::npos) return pos + 1;
  if (StartsWith(text, "Q: ")) return 0;
  return std::string_view::npos;
}

std::string AfterLabel(std::string_view text, std::string_view label,
                       std::string_view until) {
  auto pos = text.find(label);
  if (pos == std::string_view::npos) return "";
  auto rest = text.substr(pos + label.size());
  return std::string(rest.substr(0, rest.find(until)));
}

std::vector<std::string> Sentences(std::string_view q) {
  std::vector<std::string> out;
  for (const auto& s : SplitSentences(q)) out.push_back(s.text);
  return out;
}

}  // namespace

double UnitHash(std::string_view text) {
  return double(Fnv(text) >> 11) / double(std::uint64_t{1} << 53);
}

SimulatedModel::SimulatedModel(SimulatedModelOptions options)
    : options_(options) {}

void SimulatedModel::Learn(const Corpus& corpus) {
  for (const CorpusEntry& e : corpus.entries) {
    if (e.perturbed) {
      Learn(e.perturbed->base.question, e.problem.gold_answer,
            e.perturbed->distractor_sentence);
      index_[CollapseWhitespace(e.perturbed->question)] =
          Seen{&facts_[e.perturbed->base.question], true};
    } else {
      Learn(e.problem.question, e.problem.gold_answer);
    }
  }
}

void SimulatedModel::Learn(const std::string& question, const Rational& gold,
                           std::optional<std::string> distractor) {
  Fact& f = facts_[question];
  f.gold = gold;
  if (distractor) f.distractor = std::move(distractor);
  index_[CollapseWhitespace(question)] = Seen{&f, false};
}

SimulatedModel::Seen SimulatedModel::Lookup(std::string_view question) const {
  auto it = index_.find(CollapseWhitespace(question));
  return it == index_.end() ? Seen{} : it->second;
}

Completion SimulatedModel::Complete(const PromptBundle& bundle) {
  ValidateBundle(bundle);
  ++calls_;
  Completion c;
  c.text = Respond(bundle);
  c.prompt_tokens = static_cast<std::int64_t>(LastUser(bundle).size() / 4);
  c.completion_tokens = static_cast<std::int64_t>(c.text.size() / 4);
  return c;
}

std::string SimulatedModel::Respond(const PromptBundle& bundle) const {
  const std::string& text = LastUser(bundle);
  const double u = UnitHash(text);
  const std::uint64_t h = Fnv(text);

  // Filtration.
  if (EndsWith(text, "A: " + std::string(kProcessedContextMarker))) {
    const auto first = text.find('\n');
    const auto second = text.find('\n', first + 1);
    std::string question = text.substr(0, first);
    const std::string span = text.substr(first + 1, second - first - 1);
    if (auto pos = question.find(span); pos != std::string::npos) {
      std::size_t begin = pos, end = pos + span.size();
      if (end < question.size() && question[end] == ' ') {
        ++end;
      } else if (begin > 0 && question[begin - 1] == ' ') {
        --begin;
      }
      question.erase(begin, end - begin);
    }
    return "Processed Context: " + question;
  }

  // Analysis-demo generation, default wording.
  if (StartsWith(text, "Read the following math word problem")) {
    return "Key information: the quantities needed to answer the question";
  }
  if (StartsWith(text, "Split the following math word problem")) {
    const auto q = AfterLabel(text, "Problem: ", "\nKey information:");
    std::string out;
    int i = 0;
    for (const auto& s : Sentences(q)) out += std::to_string(++i) + ". " + s + "\n";
    return out;
  }
  if (StartsWith(text, "For each numbered sub-clause")) {
    const auto q = AfterLabel(text, "Problem: ", "\nKey information:");
    const Seen seen = Lookup(q);
    static const std::regex kClause(R"re(^(\d+)\. "(.*)"$)re");
    std::istringstream in(AfterLabel(text, "Sub-clauses:\n", "\n\n"));
    std::string out;
    for (std::string line; std::getline(in, line);) {
      std::smatch m;
      if (!std::regex_match(line, m, kClause)) continue;
      const bool irrelevant = seen.fact && seen.fact->distractor &&
                              m[2].str() == *seen.fact->distractor;
      out += m[1].str() +
             (irrelevant ? ". irrelevant because it does not change the "
                           "quantities the question asks about\n"
                         : ". relevant because it is needed to answer the "
                           "question\n");
    }
    return out;
  }

  const std::size_t block = LastBlock(text);
  if (block == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "simulated model does not recognize the prompt");
  }
  const std::string_view last = std::string_view(text).substr(block + 3);

  // ATF analysis.
  const std::string because = ", A: " + std::string(kBecauseMarker);
  if (EndsWith(last, because)) {
    const std::string q(last.substr(0, last.size() - because.size()));
    const Seen seen = Lookup(q);
    const std::optional<std::string> distractor =
        seen.distracted ? seen.fact->distractor : std::nullopt;
    std::vector<ClauseVerdict> verdicts;
    std::size_t i = 0;
    std::string other;
    for (const auto& s : Sentences(q)) {
      const bool irrelevant = distractor && s == *distractor;
      if (!irrelevant && other.empty()) other = s;
      verdicts.push_back(
          {++i, s, irrelevant,
           irrelevant ? "it does not change the quantities the question asks "
                        "about"
                      : "it is needed to answer the question"});
    }
    std::string answer(kNoIrrelevantPhrase);
    if (distractor && u < options_.analysis_rate) {
      answer = *distractor;
    } else if (distractor &&
               u < options_.analysis_rate + options_.analysis_other_rate) {
      answer = other;
    }
    return " " +
           RenderRationale("the quantities needed to answer the question",
                           verdicts) +
           ", " + std::string(kFinallyMarker) + " " + answer + "]";
  }

  // Identification.
  const std::string probe =
      " Q: " + std::string(kIdentifyProbe) + " A:";
  if (EndsWith(last, probe)) {
    const std::string q(last.substr(0, last.size() - probe.size()));
    const Seen seen = Lookup(q);
    std::string answer(kNoIrrelevantPhrase);
    if (seen.distracted && seen.fact->distractor) {
      if (u < options_.identify_rate) {
        answer = *seen.fact->distractor;
      } else if (u < options_.identify_rate + 0.05) {
        answer = Sentences(q).back();
      }
    }
    return std::string(kAnswerSentinel) + " " + answer;
  }

  // Reasoning methods.
  const auto a_pos = last.find("\nA:");
  if (a_pos == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "simulated model does not recognize the prompt");
  }
  const std::string q(last.substr(0, a_pos));
  const std::string_view answer_part = Trim(last.substr(a_pos + 3));
  const Seen seen = Lookup(q);
  Rational value = 0;
  if (seen.fact) {
    const double accuracy = seen.distracted ? options_.distracted_accuracy
                                            : options_.clean_accuracy;
    value = u < accuracy ? seen.fact->gold
                         : seen.fact->gold + 1 + Rational(h % 7);
  }
  const std::string v = FormatRational(value);

  if (answer_part == kZeroCotTrigger) {
    return " First, collect the quantities in the problem. Combining them "
           "step by step gives " + v + ".";
  }
  if (EndsWith(answer_part, kZeroCotAnswerCue)) {
    const auto cue = answer_part.rfind(kZeroCotAnswerCue);
    const auto tokens = ScanNumbers(answer_part.substr(0, cue));
    return " " + (tokens.empty() ? std::string("0")
                                 : FormatRational(tokens.back().value)) + ".";
  }
  if (answer_part == kLtmLead) {
    return " 1) Which quantities are given? 2) How do they combine to answer "
           "the question?";
  }
  if (StartsWith(answer_part, kLtmLead)) {
    return "Combining the quantities in order gives " + v + ". " +
           std::string(kAnswerSentinel) + " " + v + ".";
  }
  if (text.find(std::string(kLtmLead)) != std::string::npos) {
    return std::string(kLtmLead) +
           " 1) Which quantities are given? 2) How do they combine? "
           "Combining them in order gives " + v + ". " +
           std::string(kAnswerSentinel) + " " + v + ".";
  }
  if (text.find("\nA: " + std::string(kAnswerSentinel)) != std::string::npos) {
    return std::string(kAnswerSentinel) + " " + v + ".";  // SP demos
  }
  return "Working through the quantities one at a time gives " + v + ". " +
         std::string(kAnswerSentinel) + " " + v + ".";
}

}  // namespace irbench::testing
