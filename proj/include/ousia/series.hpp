#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ousia/lexicon.hpp"
#include "ousia/preprocess.hpp"

namespace ousia {

enum class Dimension { power, danger };

inline const char* dimension_name(Dimension d) {
  return d == Dimension::power ? "power" : "danger";
}

// Windowing scheme: scores are computed over window_size-word windows whose
// starts step by skip words. skip == window_size is the non-overlapping
// default; the large overlapping configuration (5000/200) is used only for
// coarse-series comparisons.
struct WindowConfig {
  int window_size = 50;  // N_w
  int skip = 50;         // N_s
  void validate() const;
  bool operator==(const WindowConfig&) const = default;
};

// Ousiometric time series in cumulative word-time. One value per window;
// windows with no lexicon words hold NaN, which marks the book ineligible
// rather than being interpolated.
struct OusioSeries {
  std::vector<double> values;
  Dimension dimension = Dimension::danger;
  WindowConfig config;
  std::string source_id;

  bool has_missing() const;
  // One flag per window: true iff the window contained a lexicon word.
  std::vector<bool> hit_flags() const;
};

// Number of full windows that fit in token_count tokens.
std::size_t window_count(std::size_t token_count, const WindowConfig& cfg);

// Per-token lexicon resolution, done once per book and reused across the
// hundred-odd shuffled surrogates (the lookup pass dwarfs the permutation).
struct ResolvedTokens {
  std::vector<double> power;
  std::vector<double> danger;
  std::vector<std::uint8_t> hit;
  std::string source_id;
  std::size_t size() const { return hit.size(); }
};

ResolvedTokens resolve_tokens(const TokenSequence& tokens, const Lexicon& lex);

// Window score per Eq.-style weighted mean: the average lexicon score over
// the window's lexicon-covered tokens (occurrence-weighted).
OusioSeries window_scores(const TokenSequence& tokens, const Lexicon& lex,
                          const WindowConfig& cfg, Dimension dim);
OusioSeries window_scores_resolved(const ResolvedTokens& resolved,
                                   const WindowConfig& cfg, Dimension dim);

// Uniform Fisher-Yates permutation, deterministic per seed.
TokenSequence shuffle(const TokenSequence& tokens, std::uint64_t seed);
std::vector<std::uint32_t> shuffle_permutation(std::size_t n, std::uint64_t seed);
ResolvedTokens apply_permutation(const ResolvedTokens& resolved,
                                 const std::vector<std::uint32_t>& perm);

// CSV columns: window_index, word_time_start (= index * skip), score.
void write_series_csv(std::ostream& out, const OusioSeries& series);
// Parse the same format; dimension/source must be supplied by the caller.
// The skip is inferred from consecutive word_time_start values (fallback:
// the default config) unless overridden.
OusioSeries read_series_csv(std::istream& in, Dimension dim, std::string source_id,
                            int skip_override = 0);

}  // namespace ousia
