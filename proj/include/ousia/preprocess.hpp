#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ousia/lexicon.hpp"

namespace ousia {

// Ordered words of one document after cleanup; the unit every downstream
// stage (windowing, shuffling, coverage) operates on.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_id;
};

enum class BoilerplateFlag {
  markers_found,  // both start and end marker lines present
  no_markers,     // neither found; text returned unchanged
  no_end_marker,  // start found, end missing; tail kept to EOF
};

struct StripResult {
  std::string text;
  BoilerplateFlag flag = BoilerplateFlag::no_markers;
};

// Keep only the content strictly between the Project Gutenberg start marker
// line (containing "*** START OF", case-insensitive, with or without a space
// after the asterisks) and the matching "*** END OF" line. Missing markers
// are flagged, never fatal.
StripResult strip_boilerplate(std::string_view text);

// Expand unambiguous contractions (n't -> " not", 'll -> " will",
// 're -> " are", 've -> " have", 'm -> " am") and delete the ambiguous
// suffixes 's and 'd together with the apostrophe. Curly apostrophes
// (U+2019) are normalized to ASCII first so real-world files behave the
// same as the plain-ASCII form.
std::string expand_contractions(std::string_view text);

// Lowercase, split on whitespace, strip leading/trailing punctuation from
// each candidate, then drop any candidate still containing a digit or other
// non-letter character. Letters cover ASCII plus the Latin-1 and Latin
// Extended-A blocks.
TokenSequence tokenize(std::string_view text, std::string source_id = {});

struct CoverageStats {
  double unique_coverage = 0.0;  // |types in lexicon| / |types|
  double token_coverage = 0.0;   // lexicon-hit tokens / total tokens
  std::size_t total_tokens = 0;
  std::size_t unique_types = 0;
};

// Both coverage fractions for one document. Empty input has no defined
// coverage and raises.
CoverageStats coverage(const TokenSequence& tokens, const Lexicon& lex);

struct Eligibility {
  bool eligible = false;
  // Failed criteria, each one of "coverage" / "empty_window"; empty when eligible.
  std::vector<std::string> reasons;
};

inline constexpr double kMinUniqueCoverage = 0.60;

// A book enters the analysis iff unique coverage is at least 60% and every
// window of the active config contains at least one lexicon word.
// `window_has_hit` comes from the series module (one flag per window).
Eligibility eligible(const CoverageStats& stats, const std::vector<bool>& window_has_hit);

}  // namespace ousia
