#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ousia/error.hpp"
#include "ousia/lexicon.hpp"
#include "ousia/util.hpp"
#include "support/fixtures.hpp"

using namespace ousia;

namespace {

// Independent oracle for the VAD -> power/danger/structure map: apply the
// rotation matrix then the 45-degree change of basis, all spelled out.
PdsPoint reference_pds(double v, double a, double d) {
  const double goodness = 0.86 * v - 0.15 * a + 0.48 * d;
  const double energy = -0.16 * v + 0.83 * a + 0.54 * d;
  const double structure = 0.48 * v + 0.55 * a - 0.69 * d;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {(energy + goodness) * inv_sqrt2, (energy - goodness) * inv_sqrt2, structure};
}

}  // namespace

TEST_CASE("normalize_vad centers unit-interval ratings") {
  const VadPoint raw{0.9, 0.1, 0.6};
  const VadPoint c = normalize_vad(raw);
  CHECK(c.valence == doctest::Approx(0.4));
  CHECK(c.arousal == doctest::Approx(-0.4));
  CHECK(c.dominance == doctest::Approx(0.1));
  const VadPoint back = denormalize_vad(c);
  CHECK(back.valence == doctest::Approx(raw.valence));
  CHECK(back.arousal == doctest::Approx(raw.arousal));
  CHECK(back.dominance == doctest::Approx(raw.dominance));
  CHECK_THROWS_AS(normalize_vad(VadPoint{1.2, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(normalize_vad(VadPoint{0.5, -0.01, 0.0}), Error);
}

TEST_CASE("vad_to_pds on axis-aligned points") {
  // Pure valence +1/2: goodness 0.43, energy -0.08, structure 0.24.
  PdsPoint p = vad_to_pds(VadPoint{0.5, 0.0, 0.0});
  CHECK(p.power == doctest::Approx((0.43 - 0.08) / std::sqrt(2.0)));
  CHECK(p.danger == doctest::Approx((-0.08 - 0.43) / std::sqrt(2.0)));
  CHECK(p.structure == doctest::Approx(0.24));

  // Pure arousal +1/2: goodness -0.075, energy 0.415, structure 0.275.
  p = vad_to_pds(VadPoint{0.0, 0.5, 0.0});
  CHECK(p.power == doctest::Approx((0.415 - 0.075) / std::sqrt(2.0)));
  CHECK(p.danger == doctest::Approx((0.415 + 0.075) / std::sqrt(2.0)));
  CHECK(p.structure == doctest::Approx(0.275));
}

TEST_CASE("vad_to_pds matches the reference transform on a grid") {
  for (double v : {-0.5, -0.2, 0.0, 0.3, 0.5}) {
    for (double a : {-0.5, 0.0, 0.25, 0.5}) {
      for (double d : {-0.4, 0.0, 0.5}) {
        const PdsPoint got = vad_to_pds(VadPoint{v, a, d});
        const PdsPoint want = reference_pds(v, a, d);
        CHECK(got.power == doctest::Approx(want.power).epsilon(1e-12));
        CHECK(got.danger == doctest::Approx(want.danger).epsilon(1e-12));
        CHECK(got.structure == doctest::Approx(want.structure).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("calm-like and war-like ratings land on the expected quadrants") {
  // High valence, low arousal, mid dominance: powerful and safe.
  const VadPoint calm = normalize_vad(VadPoint{0.9, 0.1, 0.6});
  const PdsPoint calm_pds = vad_to_pds(calm);
  const PdsPoint calm_ref = reference_pds(0.4, -0.4, 0.1);
  CHECK(calm_pds.power == doctest::Approx(calm_ref.power).epsilon(1e-12));
  CHECK(calm_pds.danger == doctest::Approx(calm_ref.danger).epsilon(1e-12));
  CHECK(calm_pds.power > 0.0);
  CHECK(calm_pds.danger < -0.5);

  // Low valence, high arousal: strongly dangerous.
  const PdsPoint war = vad_to_pds(VadPoint{-0.1, 0.4, 0.0});
  CHECK(war.danger > 0.25);
  CHECK(std::fabs(war.power) < 0.25);
}

TEST_CASE("lexicon parses a VAD table and converts scores on load") {
  const std::string table =
      "Word\tValence\tArousal\tDominance\n"
      "Calm\t0.9\t0.1\t0.6\n"
      "war\t0.4\t0.9\t0.5\n";
  const Lexicon lex = Lexicon::parse(table, "inline");
  CHECK(lex.size() == 2);
  const PdsPoint* calm = lex.find("calm");  // header and words are case-folded
  REQUIRE(calm != nullptr);
  const PdsPoint want = reference_pds(0.4, -0.4, 0.1);
  CHECK(calm->power == doctest::Approx(want.power).epsilon(1e-12));
  CHECK(calm->danger == doctest::Approx(want.danger).epsilon(1e-12));
  CHECK(lex.find("peace") == nullptr);
}

TEST_CASE("lexicon parses power/danger tables verbatim") {
  const std::string table =
      "word,power,danger\n"
      "storm,-0.25,0.75\n"
      "hearth,0.5,-0.5\n";
  const Lexicon lex = Lexicon::parse(table, "inline");
  const PdsPoint* storm = lex.find("storm");
  REQUIRE(storm != nullptr);
  CHECK(storm->power == doctest::Approx(-0.25));
  CHECK(storm->danger == doctest::Approx(0.75));
  CHECK(storm->structure == doctest::Approx(0.0));
}

TEST_CASE("lexicon counts duplicates and keeps the last row") {
  const std::string table =
      "word\tpower\tdanger\n"
      "echo\t0.1\t0.2\n"
      "echo\t0.3\t0.4\n";
  const Lexicon lex = Lexicon::parse(table, "inline");
  CHECK(lex.size() == 1);
  CHECK(lex.duplicate_count() == 1);
  const PdsPoint* echo = lex.find("echo");
  REQUIRE(echo != nullptr);
  CHECK(echo->power == doctest::Approx(0.3));
  CHECK(echo->danger == doctest::Approx(0.4));
}

TEST_CASE("lexicon rejects malformed tables") {
  CHECK_THROWS_AS(Lexicon::parse("", "inline"), Error);
  CHECK_THROWS_AS(Lexicon::parse("word\tpower\tdanger\n", "inline"), Error);  // no data rows
  CHECK_THROWS_AS(Lexicon::parse("word\tjunk\tcolumns\nx\t1\t2\n", "inline"), Error);
  CHECK_THROWS_AS(Lexicon::parse("word\tpower\tdanger\nx\tnotanumber\t0.5\n", "inline"), Error);
  CHECK_THROWS_AS(Lexicon::parse("word\tvalence\tarousal\tdominance\nx\t1.5\t0.5\t0.5\n", "inline"),
                  Error);  // rating outside [0,1]
}

TEST_CASE("lexicon load reads from disk") {
  const auto dir = testsupport::make_temp_dir("lexicon");
  const auto lexfile = dir / "scores.tsv";
  write_text_file(lexfile.string(), "word\tpower\tdanger\nfoo\t0.25\t-0.125\n");
  const Lexicon lex = Lexicon::load(lexfile.string());
  REQUIRE(lex.find("foo") != nullptr);
  CHECK(lex.find("foo")->power == doctest::Approx(0.25));
  CHECK_THROWS_AS(Lexicon::load((dir / "absent.tsv").string()), Error);
  std::filesystem::remove_all(dir);
}
