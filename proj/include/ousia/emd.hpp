#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ousia {

// One intrinsic mode function: locally zero-mean oscillation whose extrema
// and zero-crossing counts differ by at most one.
struct Imf {
  std::vector<double> values;
  int order = 0;       // 1-based extraction order (1 = fastest oscillation)
  int sift_count = 0;  // sifts spent; for ensembles, the max across members
  bool converged = true;  // condition (a) held when sifting stopped
};

struct EmdOptions {
  int max_sifts = 100;        // hard cap per IMF; hitting it flags "unconverged"
  double sd_threshold = 0.2;  // Cauchy-style sifting stop criterion
  int max_imfs = 64;          // safety bound; ~log2(N) orders occur in practice
};

struct EemdConfig {
  int ensemble_size = 100;
  double noise_ratio = 0.2;  // noise std as a fraction of the input's std
  std::uint64_t seed = 0;
  EmdOptions emd;
};

// Bookkeeping for ensemble decompositions.
struct EnsembleInfo {
  int ensemble_size = 1;
  double noise_ratio = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> members_at_order;     // members that produced each order
  std::vector<int> unconverged_at_order; // members whose sift hit the cap there
  double mean_error = 0.0;               // |mean(sum of output) - mean(input)|
};

struct Decomposition {
  std::vector<Imf> imfs;
  std::vector<double> residual;  // the trend r_M
  std::size_t input_length = 0;
  std::optional<EnsembleInfo> ensemble;  // engaged for eemd results

  int order_count() const { return static_cast<int>(imfs.size()); }
};

// ===== building blocks =======================================================

struct ExtremaSet {
  std::vector<std::size_t> max_indices;
  std::vector<double> max_values;
  std::vector<std::size_t> min_indices;
  std::vector<double> min_values;
};

// Strict interior extrema; a plateau of equal values yields one extremum at
// the floor of its midpoint index. Endpoints never count.
ExtremaSet find_extrema(std::span<const double> x);

// Sign changes, ignoring exact zeros (a touch without sign change is no
// crossing; a crossing through zero counts once).
std::size_t count_zero_crossings(std::span<const double> x);

// IMF condition (a): extrema count and zero-crossing count differ by <= 1.
bool imf_condition_a(std::span<const double> x);

// Mean of the upper and lower natural-cubic-spline envelopes, each fitted
// through the extrema extended by mirroring two extrema across both ends.
// Returns nothing when either envelope has fewer than two support points,
// which is the sifting termination signal.
std::optional<std::vector<double>> envelope_mean(std::span<const double> x);

struct SiftResult {
  std::vector<double> values;
  int sifts = 0;
  bool converged = true;
};

// Iterate h <- h - envelope_mean(h) until condition (a) holds and the
// normalized step size Σ(h_prev-h)²/Σh_prev² drops below sd_threshold, or the
// cap is reached (flagged, not fatal). Requires >= 2 maxima and >= 2 minima.
SiftResult sift(std::span<const double> x, const EmdOptions& opts = {});

// ===== decompositions ========================================================

// Plain EMD: extract IMFs from successive residues until the residue has
// fewer than two maxima or two minima. Requires length >= 8.
Decomposition emd(std::span<const double> x, const EmdOptions& opts = {});

// Ensemble EMD: average of plain EMDs over noise-perturbed copies
// (noise std = noise_ratio * std(x)). Members with fewer IMFs than the
// ensemble maximum contribute zeros at the missing high orders and their
// residue folds into the averaged residual, so additivity to the mean input
// is preserved. Fails (decomposition_failed) when the mean of the summed
// output drifts more than 10% from the input mean.
Decomposition eemd(std::span<const double> x, const EemdConfig& cfg = {});

// Sum of IMFs with order >= from_order plus the residual.
// from_order = 1 rebuilds the input (exactly, for plain EMD);
// from_order = order_count()+1 returns the residual alone.
std::vector<double> partial_reconstruction(const Decomposition& d, int from_order);

// CSV export: window_index, imf_1..imf_M, residual.
void write_decomposition_csv(std::ostream& out, const Decomposition& d);

}  // namespace ousia
