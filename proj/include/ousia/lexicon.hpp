#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ousia {

// Raw valence/arousal/dominance ratings on the [0,1] scale used by the
// published annotation datasets.
struct VadPoint {
  double valence = 0.0;
  double arousal = 0.0;
  double dominance = 0.0;
};

// Ousiometric coordinates. Power and danger are the two essential-meaning
// axes; structure is the residual third axis, carried along for completeness.
struct PdsPoint {
  double power = 0.0;
  double danger = 0.0;
  double structure = 0.0;
};

// Shift [0,1] ratings to the centered [-1/2, 1/2] cube. Components outside
// [0,1] are rejected.
VadPoint normalize_vad(const VadPoint& raw);

// Inverse of normalize_vad (adds 1/2 back); handy for round-trip checks.
VadPoint denormalize_vad(const VadPoint& centered);

/**
 * Map a centered VAD point onto power/danger/structure.
 *
 * Two stages, both linear:
 *   1. the varimax rotation  g = M v  with
 *        M = |  0.86  -0.15   0.48 |
 *            | -0.16   0.83   0.54 |
 *            |  0.48   0.55  -0.69 |
 *      whose rows read as goodness, energy, structure;
 *   2. a 45-degree rotation in the goodness-energy plane,
 *        power  = (energy + goodness) / sqrt(2)
 *        danger = (energy - goodness) / sqrt(2)
 *      with structure passed through unchanged.
 */
PdsPoint vad_to_pds(const VadPoint& centered);

// Word-score table. Loads either a VAD file (columns word, valence, arousal,
// dominance — transformed on load) or a power/danger file (columns word,
// power, danger and optionally structure — stored verbatim). Separator is
// detected from the header line (tab wins over comma); header names are
// case-insensitive; words are lowercased. On duplicate words the last row
// wins and the collision is counted.
class Lexicon {
public:
  static Lexicon load(const std::string& path);

  // Parse from an in-memory table (same format); `origin` only labels errors.
  static Lexicon parse(std::string_view content, const std::string& origin);

  const PdsPoint* find(std::string_view word) const;
  std::size_t size() const { return scores_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }

  const std::unordered_map<std::string, PdsPoint>& entries() const { return scores_; }

private:
  std::unordered_map<std::string, PdsPoint> scores_;
  std::size_t duplicates_ = 0;
};

}  // namespace ousia
