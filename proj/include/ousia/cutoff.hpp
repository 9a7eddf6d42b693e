#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ousia/emd.hpp"
#include "ousia/series.hpp"

namespace ousia {

// How target IMF variances are normalized before comparison with the
// shuffled-text null distribution. The reference first-IMF statistic divides
// out the target's first-IMF variance; under NoRescaling the first IMF is
// excluded from the cutoff scan instead (its variance would trivially win).
enum class RescalingMode { MedianFirst, FirstPercentileFirst, NoRescaling };

inline const char* rescaling_mode_name(RescalingMode m) {
  switch (m) {
    case RescalingMode::MedianFirst: return "median";
    case RescalingMode::FirstPercentileFirst: return "p01";
    case RescalingMode::NoRescaling: return "none";
  }
  return "?";
}

// Uncentered variance Σx²/N — the zero-mean convention used for IMFs.
double imf_variance(std::span<const double> xs);

// Variance distributions of plain-EMD decompositions of shuffled surrogates.
struct NullEnsemble {
  int realizations_requested = 0;
  int realizations_ok = 0;
  // order_variances[o-1] = uncentered IMF variances at order o, one entry per
  // realization that produced that many IMFs.
  std::vector<std::vector<double>> order_variances;
  // Trend variances (about the trend's own mean — trends are not zero-mean),
  // one per successful realization regardless of its IMF count.
  std::vector<double> trend_variances;
  // Characteristic periods per order (same shape as order_variances); filled
  // only when diagnostics were requested. NaN where a period was undefined.
  std::vector<std::vector<double>> order_periods;
  std::vector<int> realization_imf_counts;

  int max_order() const { return static_cast<int>(order_variances.size()); }

  // Reference first-IMF statistics Var_{R,1}.
  double first_imf_median() const;
  double first_imf_p01() const;

  struct Threshold {
    double value = 0.0;
    bool fallback = false;  // pool at the requested order was too thin
    int order_used = 0;
  };
  // Percentile of the order-o variance pool, requiring at least
  // min(min_support, realizations_ok) values; otherwise the nearest lower
  // fully-supported order is used and the result is flagged.
  Threshold imf_percentile(int order, double percentile, int min_support) const;

  double trend_percentile(double percentile) const;
};

struct NullOptions {
  EmdOptions emd;
  bool compute_periods = false;  // per-realization HHT periods (diagnostics)
  double min_success = 0.9;      // required fraction of usable realizations
};

// Decompose `realizations` shuffled surrogates (seeds seed+1..seed+R) with
// plain EMD and collect their variance pools. Raises null_failed when fewer
// than min_success of the realizations produce a usable series+decomposition.
NullEnsemble build_null(const TokenSequence& tokens, const Lexicon& lex,
                        const WindowConfig& cfg, Dimension dim, int realizations,
                        std::uint64_t seed, const NullOptions& opts = {});
NullEnsemble build_null_resolved(const ResolvedTokens& resolved,
                                 const WindowConfig& cfg, Dimension dim,
                                 int realizations, std::uint64_t seed,
                                 const NullOptions& opts = {});

// Var_{R,1} / Var_{T,1} per mode (1 under NoRescaling). Raises
// rescaling_undefined when the target first-IMF variance is zero.
double rescale_factor(double target_first_variance, const NullEnsemble& null_ensemble,
                      RescalingMode mode);

// Multiply every per-order target variance by the mode's rescale factor.
std::vector<double> rescale(std::span<const double> target_variances,
                            const NullEnsemble& null_ensemble, RescalingMode mode);

struct CutoffResult {
  RescalingMode mode = RescalingMode::MedianFirst;
  bool trend_only = true;  // false ⟺ a proper IMF exceeded its null threshold
  int cutoff_order = 0;    // 1-based; 0 when trend_only
  double period_words = 0.0;  // NaN unless fluctuation
  double variance = 0.0;      // raw (unrescaled) cutoff-IMF variance; NaN unless fluctuation
  bool trend_exceeded = false;       // the trend itself cleared the null trend threshold
  bool percentile_fallback = false;  // some threshold came from a lower order's pool
  bool period_exceeds_length = false;  // logged sanity exception, not fatal
};

struct CutoffOptions {
  RescalingMode mode = RescalingMode::MedianFirst;
  double percentile = 99.0;
  int min_support = 50;
  int skip = 50;                // words per sample, sets the sampling rate
  std::size_t book_length = 0;  // total words; 0 disables the period sanity check
};

// Scan target orders ascending (from 2 under NoRescaling, else 1), trend
// last: the first order whose rescaled variance exceeds the null percentile
// is the cutoff. Only a proper IMF counts as a fluctuation; exceeding at the
// trend level alone is still trend_only (flagged trend_exceeded).
CutoffResult detect_cutoff(const Decomposition& target,
                           const NullEnsemble& null_ensemble,
                           const CutoffOptions& opts);

}  // namespace ousia
