#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "ousia/util.hpp"

namespace testsupport {
namespace {

constexpr const char* kConsonants = "bcdfghklmnprstvw";  // no 'z': reserved for OOV words
constexpr const char* kVowels = "aeiou";

double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

// Cumulative Zipf weights (P(rank r) proportional to 1/r, ranks 1..n).
std::vector<double> zipf_cumulative(std::size_t n) {
  std::vector<double> cum(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / static_cast<double>(r + 1);
    cum[r] = total;
  }
  return cum;
}

std::size_t sample_rank(const std::vector<double>& cum, ousia::Rng& rng) {
  const double u = rng.uniform01() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
}

}  // namespace

std::string make_word(ousia::Rng& rng, int min_syllables, int max_syllables) {
  const int syllables =
      min_syllables +
      static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_syllables - min_syllables + 1)));
  std::string word;
  for (int s = 0; s < syllables; ++s) {
    word.push_back(kConsonants[rng.bounded(16)]);
    word.push_back(kVowels[rng.bounded(5)]);
  }
  return word;
}

SyntheticLexicon make_lexicon(std::size_t n_words, std::uint64_t seed) {
  if (n_words == 0) throw std::invalid_argument("make_lexicon: n_words must be positive");
  SyntheticLexicon out;
  ousia::Rng word_rng = ousia::Rng::keyed(seed, 0);
  ousia::Rng score_rng = ousia::Rng::keyed(seed, 1);
  ousia::Rng oov_rng = ousia::Rng::keyed(seed, 2);

  std::unordered_set<std::string> seen;
  out.words.reserve(n_words);
  while (out.words.size() < n_words) {
    std::string w = make_word(word_rng);
    if (seen.insert(w).second) out.words.push_back(std::move(w));
  }

  out.scores.reserve(n_words);
  out.tsv = "word\tpower\tdanger\n";
  for (const std::string& w : out.words) {
    ousia::PdsPoint p;
    p.power = clip(0.06 + 0.22 * score_rng.gaussian(), -0.95, 0.95);
    p.danger = clip(-0.12 + 0.28 * score_rng.gaussian(), -0.95, 0.95);
    p.structure = 0.0;
    out.scores.push_back(p);
    out.tsv += w;
    out.tsv += '\t';
    out.tsv += ousia::format_g6(p.power);
    out.tsv += '\t';
    out.tsv += ousia::format_g6(p.danger);
    out.tsv += '\n';
  }

  const std::size_t n_oov = std::max<std::size_t>(4, n_words / 4);
  out.oov_words.reserve(n_oov);
  std::unordered_set<std::string> oov_seen;
  while (out.oov_words.size() < n_oov) {
    std::string w = "zz" + make_word(oov_rng, 1, 3);
    if (oov_seen.insert(w).second) out.oov_words.push_back(std::move(w));
  }

  out.lexicon = ousia::Lexicon::parse(out.tsv, "synthetic");
  return out;
}

ousia::TokenSequence make_book(const SyntheticLexicon& lex, const BookSpec& spec) {
  if (spec.n_words == 0) throw std::invalid_argument("make_book: n_words must be positive");
  ousia::Rng rng = ousia::Rng::keyed(spec.seed, 7);

  // Partition the vocabulary into low-danger and high-danger halves for the
  // topic-drift sampler; each half keeps its own Zipf ladder.
  std::vector<std::size_t> order(lex.words.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex.scores[a].danger < lex.scores[b].danger;
  });
  const std::size_t half = order.size() / 2;
  std::vector<std::size_t> low_pool(order.begin(), order.begin() + half);
  std::vector<std::size_t> high_pool(order.begin() + half, order.end());

  const std::vector<double> cum_all = zipf_cumulative(lex.words.size());
  const std::vector<double> cum_low = zipf_cumulative(low_pool.size());
  const std::vector<double> cum_high = zipf_cumulative(high_pool.size());
  const std::vector<double> cum_oov = zipf_cumulative(lex.oov_words.size());

  const bool periodic = spec.structure_period > 0.0 && spec.structure_strength > 0.0;
  const bool structured = (periodic || spec.drift_strength > 0.0) && !low_pool.empty() &&
                          !high_pool.empty();
  constexpr double kTau = 6.283185307179586;

  ousia::TokenSequence seq;
  seq.source_id = spec.source_id;
  seq.tokens.reserve(spec.n_words);
  for (std::size_t t = 0; t < spec.n_words; ++t) {
    if (rng.uniform01() < spec.oov_rate) {
      seq.tokens.push_back(lex.oov_words[sample_rank(cum_oov, rng)]);
      continue;
    }
    if (structured) {
      const double progress = spec.n_words > 1
                                  ? static_cast<double>(t) /
                                        static_cast<double>(spec.n_words - 1)
                                  : 0.5;
      double p_high = 0.5 + 0.5 * spec.drift_strength * (2.0 * progress - 1.0);
      if (periodic) {
        const double phase = kTau * static_cast<double>(t) / spec.structure_period;
        p_high += 0.5 * spec.structure_strength * std::sin(phase);
      }
      p_high = clip(p_high, 0.02, 0.98);
      if (rng.uniform01() < p_high) {
        seq.tokens.push_back(lex.words[high_pool[sample_rank(cum_high, rng)]]);
      } else {
        seq.tokens.push_back(lex.words[low_pool[sample_rank(cum_low, rng)]]);
      }
    } else {
      seq.tokens.push_back(lex.words[sample_rank(cum_all, rng)]);
    }
  }
  return seq;
}

std::string render_text(const ousia::TokenSequence& tokens, std::size_t words_per_line) {
  std::string text;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    text += tokens.tokens[i];
    text += ((i + 1) % words_per_line == 0) ? '\n' : ' ';
  }
  if (!text.empty() && text.back() == ' ') text.back() = '\n';
  return text;
}

std::filesystem::path make_temp_dir(const std::string& tag) {
  static std::atomic<std::uint64_t> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    const std::uint64_t id = counter.fetch_add(1);
    const auto dir = base / ("ousia_test_" + tag + "_" + std::to_string(id));
    std::error_code ec;
    // create_directory (not create_directories) claims the name atomically:
    // false without error means a leftover from an earlier run — skip past it.
    if (std::filesystem::create_directory(dir, ec)) return dir;
    if (ec) throw std::filesystem::filesystem_error("make_temp_dir", dir, ec);
  }
}

}  // namespace testsupport
