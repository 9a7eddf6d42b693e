#pragma once

// Deterministic synthetic fixtures shared by the unit and acceptance tests:
// pseudo-word lexicons with plausible power/danger scores, and Zipf-distributed
// token streams with optional periodic topic drift (real word-order structure).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ousia/lexicon.hpp"
#include "ousia/preprocess.hpp"
#include "ousia/rng.hpp"

namespace testsupport {

// Pronounceable pseudo-word built from consonant-vowel syllables.
std::string make_word(ousia::Rng& rng, int min_syllables = 2, int max_syllables = 4);

struct SyntheticLexicon {
  std::vector<std::string> words;       // lexicon vocabulary, rank order
  std::vector<ousia::PdsPoint> scores;  // parallel to words
  std::vector<std::string> oov_words;   // disjoint vocabulary ("zz" prefix)
  std::string tsv;                      // serialized word/power/danger table
  ousia::Lexicon lexicon;               // parsed from tsv
};

// Deterministic lexicon of n pseudo-words. Danger and power scores are drawn
// from clipped normals so that books built on top have nonzero series means.
SyntheticLexicon make_lexicon(std::size_t n_words, std::uint64_t seed);

struct BookSpec {
  std::size_t n_words = 20000;
  double oov_rate = 0.2;            // per-token probability of an out-of-lexicon word
  double structure_period = 0.0;    // words; 0 disables periodic topic drift
  double structure_strength = 0.0;  // 0..1 pool-mixing amplitude
  double drift_strength = 0.0;      // 0..1 linear start-to-end pool drift
  std::uint64_t seed = 1;
  std::string source_id = "book";
};

// Zipf-distributed token stream over the lexicon vocabulary plus OOV noise.
// When structure_period > 0 the sampler alternates sinusoidally between a
// low-danger and a high-danger half of the vocabulary, planting genuine
// word-order structure at that period in the danger series.
ousia::TokenSequence make_book(const SyntheticLexicon& lex, const BookSpec& spec);

// Tokens joined into running text (line breaks every few words) for CLI tests.
std::string render_text(const ousia::TokenSequence& tokens, std::size_t words_per_line = 12);

// Fresh unique temporary directory; caller owns cleanup (or leaves it to the OS).
std::filesystem::path make_temp_dir(const std::string& tag);

}  // namespace testsupport
