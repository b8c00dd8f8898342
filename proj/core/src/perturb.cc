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

#include "irbench/perturb.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "irbench/corpus.h"
#include "irbench/error.h"
#include "irbench/rng.h"
#include "irbench/text.h"

namespace irbench {
namespace {

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }
bool IsAlpha(char c) { return IsUpper(c) || IsLower(c); }

constexpr std::array<std::string_view, 8> kOpinionMarkers = {
    "insists", "believes", "thinks", "feels",
    "argues",  "claims",   "is convinced", "prefers"};

constexpr std::array<std::string_view, 4> kFallbackRoles = {
    "the shop owner", "a neighbor", "the teacher", "a friend"};

constexpr std::array<std::string_view, 9> kRelationNouns = {
    "brother", "sister", "cousin",  "classmate", "teacher",
    "neighbor", "friend", "mother", "father"};

// Capitalized words that are not people: sentence openers, pronouns,
// calendar words.
const std::unordered_set<std::string>& NonNameWords() {
  static const auto* words = new std::unordered_set<std::string>{
      "A", "An", "The", "This", "That", "These", "Those", "There", "Then",
      "Than", "If", "How", "What", "When", "Where", "Which", "Who", "Whom",
      "Whose", "Why", "He", "She", "It", "They", "We", "You", "I", "His",
      "Her", "Hers", "Its", "Their", "Our", "Your", "My", "Him", "Them",
      "Us", "Me", "In", "On", "At", "For", "From", "To", "Of", "By", "With",
      "After", "Before", "During", "Since", "Until", "While", "Each",
      "Every", "All", "Some", "Any", "Both", "Either", "Neither", "One",
      "Two", "Three", "Four", "Five", "Six", "Seven", "Eight", "Nine", "Ten",
      "Half", "Most", "Many", "Much", "Several", "Another", "Other", "Also",
      "And", "But", "Or", "So", "Yet", "Not", "No", "Yes", "However",
      "Therefore", "Finally", "First", "Second", "Third", "Last", "Next",
      "Now", "Today", "Tomorrow", "Yesterday", "Tonight", "Later", "Once",
      "Instead", "Meanwhile", "Altogether", "Together", "Overall", "Including",
      "Assuming", "Given", "Suppose", "Currently", "Initially", "Originally",
      "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday",
      "Sunday", "January", "February", "March", "April", "May", "June",
      "July", "August", "September", "October", "November", "December",
      "Christmas", "Halloween", "Thanksgiving", "Easter", "Valentine",
      "Calculate", "Find", "Determine", "Compute", "Mr", "Mrs", "Ms", "Dr",
      "Prof"};
  return *words;
}

constexpr std::array<std::string_view, 5> kHonorifics = {"Mr", "Mrs", "Ms",
                                                         "Dr", "Prof"};

struct Word {
  std::size_t begin;
  std::size_t end;
  std::string text;  // possessive "'s" removed
};

std::vector<Word> Words(std::string_view text) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsAlpha(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() &&
           (IsAlpha(text[j]) ||
            ((text[j] == '\'' || text[j] == '-') && j + 1 < text.size() &&
             IsAlpha(text[j + 1])))) {
      ++j;
    }
    std::string w(text.substr(i, j - i));
    if (EndsWith(w, "'s")) w.resize(w.size() - 2);
    words.push_back({i, j, std::move(w)});
    i = j;
  }
  return words;
}

bool LooksLikeName(const std::string& w) {
  if (w.size() < 2 || !IsUpper(w[0])) return false;
  bool has_lower = false;
  for (char c : w) has_lower |= IsLower(c);
  return has_lower && !NonNameWords().count(w);
}

bool IsSentenceStart(std::string_view text, std::size_t pos) {
  std::size_t k = pos;
  while (k > 0 && (text[k - 1] == ' ' || text[k - 1] == '\t' ||
                   text[k - 1] == '\n' || text[k - 1] == '"')) {
    --k;
  }
  return k == 0 || text[k - 1] == '.' || text[k - 1] == '?' ||
         text[k - 1] == '!';
}

bool Contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

std::size_t CountOf(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::string InsertAt(std::string_view question, std::string_view sentence,
                     std::size_t index) {
  const auto spans = SplitSentences(question);
  std::string out;
  out.reserve(question.size() + sentence.size() + 1);
  if (index >= spans.size()) {
    out.append(question).append(" ").append(sentence);
  } else {
    const std::size_t k = spans[index].start;
    out.append(question.substr(0, k))
        .append(sentence)
        .append(" ")
        .append(question.substr(k));
  }
  return out;
}

struct Recovered {
  std::string question;
  std::size_t index;
};

// Every way of deleting sentence plus one joining space from perturbed that
// re-inserts to the same text. index_hint, when set, must match.
std::optional<Recovered> Recover(std::string_view perturbed,
                                 std::string_view sentence,
                                 std::optional<std::size_t> index_hint) {
  if (sentence.empty()) return std::nullopt;
  const std::size_t len = sentence.size();
  for (std::size_t k = perturbed.find(sentence); k != std::string_view::npos;
       k = perturbed.find(sentence, k + 1)) {
    std::vector<std::string> candidates;
    if (k + len < perturbed.size() && perturbed[k + len] == ' ') {
      std::string q(perturbed);
      q.erase(k, len + 1);
      candidates.push_back(std::move(q));
    }
    if (k > 0 && perturbed[k - 1] == ' ' && k + len == perturbed.size()) {
      std::string q(perturbed);
      q.erase(k - 1, len + 1);
      candidates.push_back(std::move(q));
    }
    for (std::string& q : candidates) {
      if (Trim(q).empty()) continue;
      const auto spans = SplitSentences(q);
      std::vector<std::size_t> indices;
      if (index_hint) {
        indices.push_back(*index_hint);
      } else {
        for (std::size_t i = 0; i <= spans.size(); ++i) indices.push_back(i);
      }
      for (std::size_t i : indices) {
        if (i > spans.size()) continue;
        if (InsertAt(q, sentence, i) == perturbed) {
          return Recovered{std::move(q), i};
        }
      }
    }
  }
  return std::nullopt;
}

std::string RenderNumber(TemplateKind kind, std::int64_t n) {
  switch (kind) {
    case TemplateKind::kNumericRatio:
      return std::to_string(n) + " times";
    case TemplateKind::kNumericPercentage:
      return std::to_string(n) + "%";
    case TemplateKind::kNumericInteger:
    case TemplateKind::kOpinion:
      return std::to_string(n);
  }
  return std::to_string(n);
}

std::int64_t AnchorOf(const std::vector<Rational>& numbers, Rng& rng) {
  if (numbers.empty()) return 10;
  Rational a = numbers[rng.Below(numbers.size())];
  if (a < 0) a = -a;
  boost::multiprecision::cpp_int whole =
      boost::multiprecision::numerator(a) /
      boost::multiprecision::denominator(a);
  if (whole > 100000000) return 100000000;
  if (whole < 1) return 1;
  return whole.convert_to<std::int64_t>();
}

bool HasUnfilledSlot(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[') continue;
    std::size_t j = i + 1;
    while (j < text.size() && (IsUpper(text[j]) || text[j] == '_')) ++j;
    if (j > i + 1 && j < text.size() && text[j] == ']') return true;
  }
  return false;
}

}  // namespace

std::span<const std::string_view> OpinionMarkers() { return kOpinionMarkers; }
std::span<const std::string_view> FallbackRoles() { return kFallbackRoles; }
std::span<const std::string_view> RelationNouns() { return kRelationNouns; }

void ValidateTemplate(const DistractorTemplate& tmpl) {
  if (CountOf(tmpl.pattern, kRoleSlot) != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "template must contain [ROLE] exactly once: " + tmpl.pattern);
  }
  if (CountOf(tmpl.pattern, kNumericSlot) != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "template must contain [NUMERIC_CONTENT] exactly once: " +
                    tmpl.pattern);
  }
  if (CountOf(tmpl.pattern, kItemSlot) > 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "template may contain [ITEM] at most once: " + tmpl.pattern);
  }
  if (tmpl.kind == TemplateKind::kOpinion) {
    const bool marked =
        std::any_of(kOpinionMarkers.begin(), kOpinionMarkers.end(),
                    [&](std::string_view m) { return Contains(tmpl.pattern, m); });
    if (!marked) {
      throw Error(ErrorCode::kInvalidArgument,
                  "opinion template lacks a judgment marker: " + tmpl.pattern);
    }
  }
}

const std::vector<DistractorTemplate>& BuiltinTemplates() {
  static const auto* templates = new std::vector<DistractorTemplate>{
      {TemplateKind::kNumericRatio,
       "[ROLE]'s cousin has [NUMERIC_CONTENT] as many [ITEM] as their "
       "neighbor."},
      {TemplateKind::kNumericRatio,
       "Last year, [ROLE] spent [NUMERIC_CONTENT] as long on a trip to "
       "the zoo."},
      {TemplateKind::kNumericInteger,
       "[ROLE]'s classmate keeps [NUMERIC_CONTENT] [ITEM] at home."},
      {TemplateKind::kNumericInteger,
       "Last week, [ROLE] read a book with [NUMERIC_CONTENT] pages about "
       "[ITEM]."},
      {TemplateKind::kNumericInteger,
       "[ROLE]'s teacher once owned [NUMERIC_CONTENT] [ITEM]."},
      {TemplateKind::kNumericPercentage,
       "About [NUMERIC_CONTENT] of [ROLE]'s friends also like [ITEM]."},
      {TemplateKind::kNumericPercentage,
       "[ROLE] heard that [NUMERIC_CONTENT] of people in town prefer "
       "[ITEM]."},
      {TemplateKind::kOpinion,
       "However, [ROLE] insists that having an average of [NUMERIC_CONTENT] "
       "[ITEM] per day is the best way to be happy."},
      {TemplateKind::kOpinion,
       "[ROLE] believes that [NUMERIC_CONTENT] [ITEM] would be the perfect "
       "amount."},
      {TemplateKind::kOpinion,
       "[ROLE] thinks that buying [NUMERIC_CONTENT] [ITEM] at once is a "
       "waste of money."},
  };
  return *templates;
}

std::vector<DistractorTemplate> LoadTemplates(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<DistractorTemplate> templates;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const auto row = nlohmann::json::parse(line);
      DistractorTemplate tmpl;
      tmpl.kind = ParseTemplateKind(row.at("kind").get<std::string>());
      tmpl.pattern = row.at("pattern").get<std::string>();
      ValidateTemplate(tmpl);
      templates.push_back(std::move(tmpl));
    } catch (const nlohmann::json::exception& e) {
      throw LineError(ErrorCode::kParse, line_no, "", e.what());
    } catch (const Error& e) {
      throw LineError(ErrorCode::kInvalidArgument, line_no, "pattern",
                      e.what());
    }
  }
  return templates;
}

std::vector<std::string> ExtractRoles(std::string_view question) {
  const std::vector<Word> words = Words(question);
  std::vector<std::string> roles;
  auto add = [&](std::string name) {
    if (std::find(roles.begin(), roles.end(), name) == roles.end()) {
      roles.push_back(std::move(name));
    }
  };
  const std::string lowered = ToLowerAscii(question);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    // "Mr. Smith" style.
    if (std::find(kHonorifics.begin(), kHonorifics.end(), w.text) !=
            kHonorifics.end() &&
        i + 1 < words.size() && LooksLikeName(words[i + 1].text)) {
      std::string_view gap =
          question.substr(w.end, words[i + 1].begin - w.end);
      if (gap == ". " || gap == " ") {
        add(std::string(question.substr(w.begin, words[i + 1].end - w.begin)));
        ++i;
        continue;
      }
    }
    if (!LooksLikeName(w.text)) continue;
    if (IsSentenceStart(question, w.begin)) {
      // A sentence-initial common noun usually shows up lowercased too.
      const std::string lower = ToLowerAscii(w.text);
      bool seen_lower = false;
      for (const Word& other : words) {
        seen_lower |= other.text == lower;
      }
      if (seen_lower) continue;
    }
    std::string name = w.text;
    std::size_t last = i;
    while (last + 1 < words.size() && LooksLikeName(words[last + 1].text) &&
           question.substr(words[last].end,
                           words[last + 1].begin - words[last].end) == " " &&
           words[last].text.size() == words[last].end - words[last].begin) {
      ++last;
      name += " " + words[last].text;
    }
    add(std::move(name));
    i = last;
  }
  if (roles.empty()) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : question) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    roles.emplace_back(kFallbackRoles[h % kFallbackRoles.size()]);
  }
  return roles;
}

std::string ChooseRole(std::span<const std::string> roles, std::uint64_t seed) {
  if (roles.empty()) return std::string(kFallbackRoles.front());
  Rng rng(seed);
  const std::string& name = roles[rng.Below(roles.size())];
  const bool generic =
      std::find(kFallbackRoles.begin(), kFallbackRoles.end(), name) !=
      kFallbackRoles.end();
  if (!generic && rng.Below(3) == 0) {
    return name + "'s " +
           std::string(kRelationNouns[rng.Below(kRelationNouns.size())]);
  }
  return name;
}

std::string ExtractItemNoun(std::string_view question) {
  static const std::unordered_set<std::string> kSkip = {
      "of",      "more",   "less",  "times", "per",    "and",   "or",
      "each",    "a",      "an",    "the",   "to",     "in",    "for",
      "at",      "on",     "by",    "with",  "is",     "are",   "was",
      "were",    "than",   "as",    "from",  "into",   "out",   "total",
      "left",    "extra",  "fewer", "every", "all",    "apiece", "hour",
      "hours",   "minute", "minutes", "day", "days",   "week",  "weeks",
      "month",   "months", "year",  "years", "percent", "degrees", "old"};
  std::string fallback;
  for (const NumberToken& token : ScanNumbers(question)) {
    std::size_t k = token.end;
    while (k < question.size() && question[k] == ' ') ++k;
    std::size_t e = k;
    while (e < question.size() && IsLower(question[e])) ++e;
    if (e == k || (e < question.size() && IsUpper(question[e]))) continue;
    std::string word(question.substr(k, e - k));
    if (word.size() < 3 || kSkip.count(word)) continue;
    if (word.back() == 's') return word;
    if (fallback.empty()) fallback = std::move(word);
  }
  return fallback.empty() ? std::string("items") : fallback;
}

bool ContainsNumberToken(std::string_view text, const Rational& value) {
  for (const NumberToken& token : ScanNumbers(text)) {
    if (GuardValue(token) == value) return true;
  }
  return false;
}

std::string FillTemplate(const DistractorTemplate& tmpl,
                         const FillOptions& options, std::uint64_t seed) {
  ValidateTemplate(tmpl);
  if (Trim(options.role).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "role must be non-empty");
  }
  Rng rng(seed);
  const std::int64_t anchor = AnchorOf(options.numbers_in_question, rng);
  std::int64_t lo = std::max<std::int64_t>(1, anchor / 10);
  std::int64_t hi = std::max<std::int64_t>(lo + 1, anchor * 10);
  auto clamp_to = [&](std::int64_t min, std::int64_t max) {
    const std::int64_t l = std::max(lo, min), h = std::min(hi, max);
    if (l <= h) {
      lo = l;
      hi = h;
    } else {
      lo = min;
      hi = max;
    }
  };
  if (tmpl.kind == TemplateKind::kNumericPercentage) clamp_to(1, 99);
  if (tmpl.kind == TemplateKind::kNumericRatio) clamp_to(2, 10);

  constexpr int kMaxDraws = 64;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const std::int64_t n = rng.Between(lo, hi);
    std::string out = tmpl.pattern;
    out = ReplaceAll(std::move(out), kRoleSlot, options.role);
    out = ReplaceAll(std::move(out), kNumericSlot, RenderNumber(tmpl.kind, n));
    out = ReplaceAll(std::move(out), kItemSlot, options.item);
    if (HasUnfilledSlot(out)) {
      throw Error(ErrorCode::kGeneration, "unfilled slot in: " + out);
    }
    out = std::string(Trim(out));
    if (!out.empty() && IsLower(out[0])) out[0] = char(out[0] - 'a' + 'A');
    if (!out.empty() && out.back() != '.' && out.back() != '?' &&
        out.back() != '!') {
      out.push_back('.');
    }
    if (options.gold_answer &&
        (Rational(n) == *options.gold_answer ||
         ContainsNumberToken(out, *options.gold_answer))) {
      continue;
    }
    return out;
  }
  throw Error(ErrorCode::kGeneration,
              "could not fill template without the gold answer: " +
                  tmpl.pattern);
}

std::size_t InsertionSlots(std::string_view question) {
  return SplitSentences(question).size() + 1;
}

PerturbedProblem InsertDistractor(const ProblemRecord& problem,
                                  std::string_view sentence,
                                  std::size_t insertion_index,
                                  TemplateKind kind, std::string role_used) {
  const std::string_view s = Trim(sentence);
  if (s.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty distractor sentence");
  }
  const std::size_t count = SplitSentences(problem.question).size();
  if (insertion_index > count) {
    throw Error(ErrorCode::kOutOfRange,
                "insertion index " + std::to_string(insertion_index) +
                    " outside [0, " + std::to_string(count) + "]");
  }
  if (ContainsNumberToken(s, problem.gold_answer)) {
    throw Error(ErrorCode::kInvalidArgument,
                "distractor contains the gold answer " +
                    FormatRational(problem.gold_answer) + ": " +
                    std::string(s));
  }
  PerturbedProblem out;
  out.base = problem;
  out.question = InsertAt(problem.question, s, insertion_index);
  out.distractor_sentence = std::string(s);
  out.insertion_index = insertion_index;
  out.template_kind = kind;
  out.role_used = std::move(role_used);
  return out;
}

ProblemRecord StripDistractor(const PerturbedProblem& perturbed) {
  auto recovered = Recover(perturbed.question, perturbed.distractor_sentence,
                           perturbed.insertion_index);
  if (!recovered || recovered->question != perturbed.base.question) {
    throw Error(ErrorCode::kCorruption,
                "distractor not found at sentence position " +
                    std::to_string(perturbed.insertion_index) + " of \"" +
                    perturbed.question + "\"");
  }
  return perturbed.base;
}

PerturbedProblem ShuffleDistractorPosition(const PerturbedProblem& perturbed,
                                           std::uint64_t seed) {
  const ProblemRecord base = StripDistractor(perturbed);
  Rng rng(seed);
  const std::size_t slot = rng.Below(InsertionSlots(base.question));
  PerturbedProblem out = perturbed;
  out.question = InsertAt(base.question, perturbed.distractor_sentence, slot);
  out.insertion_index = slot;
  return out;
}

PerturbedProblem PerturbedFromText(std::string_view question,
                                   std::string_view distractor,
                                   TemplateKind kind) {
  const std::string_view s = Trim(distractor);
  auto recovered = Recover(question, s, std::nullopt);
  if (!recovered) {
    throw Error(ErrorCode::kCorruption,
                "distractor \"" + std::string(s) +
                    "\" cannot be cleanly removed from \"" +
                    std::string(question) + "\"");
  }
  PerturbedProblem out;
  out.base.question = std::move(recovered->question);
  out.question = std::string(question);
  out.distractor_sentence = std::string(s);
  out.insertion_index = recovered->index;
  out.template_kind = kind;
  return out;
}

PerturbedProblem PerturbProblem(const ProblemRecord& problem,
                                std::span<const DistractorTemplate> templates,
                                std::uint64_t seed, Placement placement) {
  if (templates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no templates to choose from");
  }
  Rng rng(seed);
  const DistractorTemplate& tmpl = templates[rng.Below(templates.size())];
  const std::vector<std::string> roles = ExtractRoles(problem.question);

  FillOptions options;
  options.role = ChooseRole(roles, rng.Next());
  if (tmpl.pattern.find(std::string(kRoleSlot) + "'s") != std::string::npos) {
    if (auto pos = options.role.find("'s "); pos != std::string::npos) {
      options.role.resize(pos);
    }
  }
  for (const NumberToken& token : ScanNumbers(problem.question)) {
    options.numbers_in_question.push_back(token.value);
  }
  options.gold_answer = problem.gold_answer;
  options.item = ExtractItemNoun(problem.question);
  const std::string sentence = FillTemplate(tmpl, options, rng.Next());

  const std::size_t slots = InsertionSlots(problem.question);
  const std::size_t index =
      placement.shuffle ? static_cast<std::size_t>(rng.Below(slots))
                        : placement.index;
  return InsertDistractor(problem, sentence, index, tmpl.kind, options.role);
}

}  // namespace irbench
