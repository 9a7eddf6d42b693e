#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "ousia/error.hpp"
#include "ousia/series.hpp"
#include "support/fixtures.hpp"

using namespace ousia;

namespace {

const Lexicon& two_word_lexicon() {
  static const Lexicon lex = Lexicon::parse(
      "word\tpower\tdanger\n"
      "a\t0.2\t0.3\n"
      "b\t0.8\t-0.1\n",
      "inline");
  return lex;
}

TokenSequence tokens_of(std::vector<std::string> words) {
  TokenSequence seq;
  seq.tokens = std::move(words);
  seq.source_id = "test";
  return seq;
}

}  // namespace

TEST_CASE("window_count floors to full windows") {
  WindowConfig cfg;  // 50/50
  CHECK(window_count(120, cfg) == 2);   // trailing 20 words discarded
  CHECK(window_count(100, cfg) == 2);
  CHECK(window_count(49, cfg) == 0);
  CHECK(window_count(50, cfg) == 1);

  WindowConfig overlapping{5000, 200};
  // Starts at 0,200,...; last full window start is n - 5000.
  CHECK(window_count(5000, overlapping) == 1);
  CHECK(window_count(5399, overlapping) == 2);
  CHECK(window_count(5400, overlapping) == 3);
  CHECK(window_count(4999, overlapping) == 0);
}

TEST_CASE("window config validation") {
  WindowConfig bad{0, 50};
  CHECK_THROWS_AS(bad.validate(), Error);
  WindowConfig bad2{50, 0};
  CHECK_THROWS_AS(bad2.validate(), Error);
  WindowConfig good{50, 50};
  CHECK_NOTHROW(good.validate());
}

TEST_CASE("window scores average lexicon hits only") {
  const TokenSequence seq = tokens_of({"a", "a", "b", "x"});
  const WindowConfig cfg{4, 4};
  const OusioSeries power = window_scores(seq, two_word_lexicon(), cfg, Dimension::power);
  REQUIRE(power.values.size() == 1);
  CHECK(power.values[0] == doctest::Approx((0.2 + 0.2 + 0.8) / 3.0));  // = 0.4
  const OusioSeries danger = window_scores(seq, two_word_lexicon(), cfg, Dimension::danger);
  CHECK(danger.values[0] == doctest::Approx((0.3 + 0.3 - 0.1) / 3.0));
  CHECK(power.dimension == Dimension::power);
  CHECK(power.config == cfg);
  CHECK(power.source_id == "test");
}

TEST_CASE("windows without lexicon words hold NaN") {
  const TokenSequence seq = tokens_of({"a", "b", "x", "y"});
  const WindowConfig cfg{2, 2};
  const OusioSeries s = window_scores(seq, two_word_lexicon(), cfg, Dimension::power);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == doctest::Approx(0.5));
  CHECK(std::isnan(s.values[1]));
  CHECK(s.has_missing());
  const auto hits = s.hit_flags();
  REQUIRE(hits.size() == 2);
  CHECK(hits[0]);
  CHECK_FALSE(hits[1]);
}

TEST_CASE("overlapping windows slide by the skip") {
  // Tokens: a a b b  with window 2, skip 1 -> windows [a,a],[a,b],[b,b].
  const TokenSequence seq = tokens_of({"a", "a", "b", "b"});
  const WindowConfig cfg{2, 1};
  const OusioSeries s = window_scores(seq, two_word_lexicon(), cfg, Dimension::power);
  REQUIRE(s.values.size() == 3);
  CHECK(s.values[0] == doctest::Approx(0.2));
  CHECK(s.values[1] == doctest::Approx(0.5));
  CHECK(s.values[2] == doctest::Approx(0.8));
}

TEST_CASE("window scoring errors") {
  CHECK_THROWS_AS(window_scores(TokenSequence{}, two_word_lexicon(), WindowConfig{50, 50},
                                Dimension::power),
                  Error);
  // 20 tokens cannot fill a 50-word window.
  const TokenSequence seq = tokens_of(std::vector<std::string>(20, "a"));
  CHECK_THROWS_AS(window_scores(seq, two_word_lexicon(), WindowConfig{50, 50}, Dimension::power),
                  Error);
}

TEST_CASE("resolved tokens reproduce the direct scoring path") {
  testsupport::SyntheticLexicon lex = testsupport::make_lexicon(200, 5);
  testsupport::BookSpec spec;
  spec.n_words = 700;
  spec.seed = 9;
  const TokenSequence book = testsupport::make_book(lex, spec);
  const ResolvedTokens resolved = resolve_tokens(book, lex.lexicon);
  REQUIRE(resolved.size() == book.tokens.size());
  const WindowConfig cfg{50, 50};
  for (Dimension dim : {Dimension::power, Dimension::danger}) {
    const OusioSeries direct = window_scores(book, lex.lexicon, cfg, dim);
    const OusioSeries via = window_scores_resolved(resolved, cfg, dim);
    REQUIRE(direct.values.size() == via.values.size());
    for (std::size_t i = 0; i < direct.values.size(); ++i)
      CHECK(direct.values[i] == via.values[i]);  // identical arithmetic path
  }
}

TEST_CASE("shuffle_permutation is a uniform-looking deterministic permutation") {
  const auto p1 = shuffle_permutation(1000, 42);
  const auto p2 = shuffle_permutation(1000, 42);
  const auto p3 = shuffle_permutation(1000, 43);
  CHECK(p1 == p2);
  CHECK(p1 != p3);
  std::vector<bool> seen(1000, false);
  for (std::uint32_t v : p1) {
    REQUIRE(v < 1000);
    REQUIRE_FALSE(seen[v]);
    seen[v] = true;
  }
  // Fixed points of a uniform 1000-permutation: ~1 expected, bound loosely.
  int fixed = 0;
  for (std::size_t i = 0; i < p1.size(); ++i) fixed += (p1[i] == i) ? 1 : 0;
  CHECK(fixed < 10);
}

TEST_CASE("shuffle preserves the multiset of tokens") {
  TokenSequence seq = tokens_of({"a", "b", "c", "d", "e", "f", "g", "h"});
  const TokenSequence shuffled = shuffle(seq, 7);
  CHECK(shuffled.source_id == seq.source_id);
  auto sorted_orig = seq.tokens;
  auto sorted_shuf = shuffled.tokens;
  std::sort(sorted_orig.begin(), sorted_orig.end());
  std::sort(sorted_shuf.begin(), sorted_shuf.end());
  CHECK(sorted_orig == sorted_shuf);
  CHECK(shuffle(seq, 7).tokens == shuffled.tokens);  // deterministic
}

TEST_CASE("apply_permutation matches shuffling the raw tokens") {
  testsupport::SyntheticLexicon lex = testsupport::make_lexicon(100, 3);
  testsupport::BookSpec spec;
  spec.n_words = 400;
  spec.seed = 21;
  const TokenSequence book = testsupport::make_book(lex, spec);
  const ResolvedTokens resolved = resolve_tokens(book, lex.lexicon);
  const auto perm = shuffle_permutation(book.tokens.size(), 99);
  const ResolvedTokens permuted = apply_permutation(resolved, perm);
  const ResolvedTokens direct = resolve_tokens(shuffle(book, 99), lex.lexicon);
  REQUIRE(permuted.size() == direct.size());
  for (std::size_t i = 0; i < permuted.size(); ++i) {
    CHECK(permuted.power[i] == direct.power[i]);
    CHECK(permuted.danger[i] == direct.danger[i]);
    CHECK(permuted.hit[i] == direct.hit[i]);
  }
}

TEST_CASE("series CSV round trip including missing windows") {
  OusioSeries s;
  s.values = {0.125, std::nan(""), -0.5};
  s.dimension = Dimension::danger;
  s.config = WindowConfig{50, 50};
  s.source_id = "demo";
  std::ostringstream out;
  write_series_csv(out, s);
  const std::string csv = out.str();
  CHECK(csv.find("window_index,word_time_start,score") == 0);
  CHECK(csv.find("1,50,nan") != std::string::npos);

  std::istringstream in(csv);
  const OusioSeries back = read_series_csv(in, Dimension::danger, "demo");
  REQUIRE(back.values.size() == 3);
  CHECK(back.values[0] == doctest::Approx(0.125));
  CHECK(std::isnan(back.values[1]));
  CHECK(back.values[2] == doctest::Approx(-0.5));
  CHECK(back.config.skip == 50);  // inferred from consecutive starts

  std::istringstream in2(csv);
  const OusioSeries forced = read_series_csv(in2, Dimension::danger, "demo", 25);
  CHECK(forced.config.skip == 25);
}
