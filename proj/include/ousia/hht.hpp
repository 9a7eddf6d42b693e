#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace ousia {

// Shared log-spaced frequency grid, word^-1. The same bins apply to every
// text so characteristic periods are comparable corpus-wide.
struct FrequencyBins {
  std::vector<double> edges;  // strictly increasing, count()+1 entries

  std::size_t count() const { return edges.empty() ? 0 : edges.size() - 1; }

  // 120 bins spanning [1e-6, 1] word^-1 at 20 per decade, endpoints exact.
  static const FrequencyBins& standard();
};

// x + i*H[x], Hilbert transform computed spectrally (positive-frequency
// doubling, DC and Nyquist kept at unit gain).
std::vector<std::complex<double>> analytic_signal(std::span<const double> x);

struct InstantaneousField {
  std::vector<double> frequency;  // word^-1; may be negative on noisy input
  std::vector<double> amplitude;  // analytic-signal modulus
};

// Frequency = unwrapped-phase derivative / 2π, scaled by the sampling rate
// (1/N_s word^-1 so a per-sample cycle maps to word units). Central
// differences inside, one-sided at the ends.
InstantaneousField instantaneous_frequency(std::span<const double> imf,
                                           double sampling_rate);

struct HhtSpectrum {
  std::vector<double> energy;  // Σ amplitude² per bin
  std::size_t dominant_bin = 0;
  double characteristic_period = 0.0;  // words; 1/geomean(dominant bin edges)
};

// Energy histogram of the instantaneous field over `bins`. Samples with
// non-positive frequency (edge/noise artifacts) are excluded. Dominant bin is
// the energy argmax with ties broken toward the lower frequency. Errors when
// the IMF is all-zero or no sample lands in the grid.
HhtSpectrum hht_spectrum(std::span<const double> imf, const FrequencyBins& bins,
                         double sampling_rate);

// Shorthand for hht_spectrum(...).characteristic_period.
double characteristic_period(std::span<const double> imf, const FrequencyBins& bins,
                             double sampling_rate);

// CSV export: bin_low, bin_high, energy.
void write_spectrum_csv(std::ostream& out, const HhtSpectrum& spectrum,
                        const FrequencyBins& bins);

}  // namespace ousia
