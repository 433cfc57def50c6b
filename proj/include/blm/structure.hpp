#pragma once

// The 2x2x2 structure space (voice x overt arguments x sentence type) that
// indexes the template rows, plus the answer-label taxonomy derived from it.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "blm/error.hpp"

namespace blm {

enum class Voice : std::uint8_t { Active, Passive };
enum class ArgCount : std::uint8_t { One, Two };
enum class SentenceType : std::uint8_t { Question, Declarative };

struct StructureType {
  Voice voice = Voice::Active;
  ArgCount n_args = ArgCount::Two;
  SentenceType stype = SentenceType::Declarative;

  friend auto operator<=>(const StructureType&, const StructureType&) = default;

  bool is_question() const { return stype == SentenceType::Question; }
  bool is_passive() const { return voice == Voice::Passive; }
  bool has_two_args() const { return n_args == ArgCount::Two; }

  // Dense index 0..7 (voice major, then args, then type).
  int index() const {
    return static_cast<int>(voice) * 4 + static_cast<int>(n_args) * 2 + static_cast<int>(stype);
  }
};

inline constexpr StructureType kActTwoQ{Voice::Active, ArgCount::Two, SentenceType::Question};
inline constexpr StructureType kActTwoD{Voice::Active, ArgCount::Two, SentenceType::Declarative};
inline constexpr StructureType kActOneQ{Voice::Active, ArgCount::One, SentenceType::Question};
inline constexpr StructureType kActOneD{Voice::Active, ArgCount::One, SentenceType::Declarative};
inline constexpr StructureType kPassTwoQ{Voice::Passive, ArgCount::Two, SentenceType::Question};
inline constexpr StructureType kPassTwoD{Voice::Passive, ArgCount::Two, SentenceType::Declarative};
inline constexpr StructureType kPassOneQ{Voice::Passive, ArgCount::One, SentenceType::Question};
inline constexpr StructureType kPassOneD{Voice::Passive, ArgCount::One, SentenceType::Declarative};

// Context rows 1-7 in template order; row 8 (kPassOneD) is the hidden answer.
inline constexpr std::array<StructureType, 7> kContextRows{
    kActTwoQ, kActTwoD, kActOneQ, kActOneD, kPassTwoQ, kPassTwoD, kPassOneQ};

inline constexpr std::array<StructureType, 8> kAllStructures{
    kActTwoQ, kActTwoD, kActOneQ, kActOneD, kPassTwoQ, kPassTwoD, kPassOneQ, kPassOneD};

inline constexpr std::array<StructureType, 4> kQuestionStructures{kActTwoQ, kActOneQ, kPassTwoQ,
                                                                  kPassOneQ};

// Compact code, e.g. "Pass-1-D".
inline std::string to_string(const StructureType& st) {
  std::string s = st.voice == Voice::Active ? "Act" : "Pass";
  s += st.n_args == ArgCount::One ? "-1-" : "-2-";
  s += st.stype == SentenceType::Question ? "Q" : "D";
  return s;
}

// Accepts "Pass-1-D", "pass,1,decl", "Act-2-Q" ... (case-insensitive;
// separators '-' ',' or ' ').
inline std::optional<StructureType> parse_structure(std::string_view code) {
  std::array<std::string, 3> parts;
  std::size_t k = 0;
  for (char c : code) {
    if (c == '-' || c == ',' || c == ' ') {
      if (!parts[k].empty()) {
        if (++k == 3) return std::nullopt;
      }
      continue;
    }
    parts[k] += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  }
  if (k != 2 || parts[2].empty()) return std::nullopt;
  StructureType st;
  if (parts[0] == "act" || parts[0] == "active") {
    st.voice = Voice::Active;
  } else if (parts[0] == "pass" || parts[0] == "passive") {
    st.voice = Voice::Passive;
  } else {
    return std::nullopt;
  }
  if (parts[1] == "1" || parts[1] == "one") {
    st.n_args = ArgCount::One;
  } else if (parts[1] == "2" || parts[1] == "two") {
    st.n_args = ArgCount::Two;
  } else {
    return std::nullopt;
  }
  if (parts[2] == "q" || parts[2] == "question") {
    st.stype = SentenceType::Question;
  } else if (parts[2] == "d" || parts[2] == "decl" || parts[2] == "declarative") {
    st.stype = SentenceType::Declarative;
  } else {
    return std::nullopt;
  }
  return st;
}

inline StructureType structure_from_string(std::string_view code) {
  if (auto st = parse_structure(code)) return *st;
  throw InvalidArgument("unknown structure type '" + std::string(code) + "'");
}

enum class Language : std::uint8_t { FR, IT, EN };

inline std::string to_string(Language lang) {
  switch (lang) {
    case Language::FR: return "fr";
    case Language::IT: return "it";
    case Language::EN: return "en";
  }
  return "?";
}

inline Language language_from_string(std::string_view s) {
  if (s == "fr" || s == "FR") return Language::FR;
  if (s == "it" || s == "IT") return Language::IT;
  if (s == "en" || s == "EN") return Language::EN;
  throw InvalidArgument("unknown language '" + std::string(s) + "'");
}

enum class AnswerLabel : std::uint8_t {
  Correct,
  ErrVoice,
  ErrNumArgs,
  ErrVoiceAndArgs,
  ErrSentenceType,
};

inline constexpr std::array<AnswerLabel, 4> kErrorLabels{
    AnswerLabel::ErrVoice, AnswerLabel::ErrNumArgs, AnswerLabel::ErrVoiceAndArgs,
    AnswerLabel::ErrSentenceType};

inline std::string to_string(AnswerLabel label) {
  switch (label) {
    case AnswerLabel::Correct: return "Correct";
    case AnswerLabel::ErrVoice: return "ErrVoice";
    case AnswerLabel::ErrNumArgs: return "ErrNumArgs";
    case AnswerLabel::ErrVoiceAndArgs: return "ErrVoiceAndArgs";
    case AnswerLabel::ErrSentenceType: return "ErrSentenceType";
  }
  return "?";
}

inline AnswerLabel label_from_string(std::string_view s) {
  for (auto l : {AnswerLabel::Correct, AnswerLabel::ErrVoice, AnswerLabel::ErrNumArgs,
                 AnswerLabel::ErrVoiceAndArgs, AnswerLabel::ErrSentenceType}) {
    if (to_string(l) == s) return l;
  }
  throw InvalidArgument("unknown answer label '" + std::string(s) + "'");
}

// Label an answer candidate of the given structure would carry.
inline AnswerLabel label_for(const StructureType& st) {
  if (st.is_question()) return AnswerLabel::ErrSentenceType;
  if (st.is_passive()) {
    return st.has_two_args() ? AnswerLabel::ErrNumArgs : AnswerLabel::Correct;
  }
  return st.has_two_args() ? AnswerLabel::ErrVoiceAndArgs : AnswerLabel::ErrVoice;
}

// True when the label's candidate is in the active voice.
inline bool violates_voice(AnswerLabel label) {
  return label == AnswerLabel::ErrVoice || label == AnswerLabel::ErrVoiceAndArgs;
}

}  // namespace blm
