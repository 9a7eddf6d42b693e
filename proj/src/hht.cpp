#include "ousia/hht.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "ousia/error.hpp"
#include "ousia/util.hpp"

namespace ousia {

const FrequencyBins& FrequencyBins::standard() {
  static const FrequencyBins bins = [] {
    FrequencyBins b;
    b.edges.resize(121);
    for (std::size_t i = 0; i < b.edges.size(); ++i)
      b.edges[i] = std::pow(10.0, -6.0 + 0.05 * static_cast<double>(i));
    b.edges.front() = 1e-6;  // pin the endpoints exactly
    b.edges.back() = 1.0;
    return b;
  }();
  return bins;
}

namespace {

// FFTW planning is not thread-safe and ESTIMATE-planned transforms are cheap
// relative to the decompositions that produce the IMFs, so all spectral work
// runs serialized behind one mutex with per-length cached plans.
struct FftPlans {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

std::mutex g_fft_mutex;

FftPlans& plans_for(std::size_t n) {
  static std::unordered_map<std::size_t, FftPlans> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FftPlans p;
  p.in = fftw_alloc_complex(n);
  p.out = fftw_alloc_complex(n);
  const int ni = static_cast<int>(n);
  p.forward = fftw_plan_dft_1d(ni, p.in, p.out, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_1d(ni, p.out, p.in, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> z(n);
  if (n == 0) return z;
  if (n == 1) {
    z[0] = {x[0], 0.0};
    return z;
  }

  std::lock_guard<std::mutex> lock(g_fft_mutex);
  FftPlans& p = plans_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.in[i][0] = x[i];
    p.in[i][1] = 0.0;
  }
  fftw_execute(p.forward);

  // Analytic-signal gains: DC (and Nyquist for even n) unchanged, positive
  // frequencies doubled, negative frequencies zeroed.
  const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) {
    p.out[k][0] *= 2.0;
    p.out[k][1] *= 2.0;
  }
  for (std::size_t k = (n % 2 == 0) ? n / 2 + 1 : positive_end; k < n; ++k) {
    p.out[k][0] = 0.0;
    p.out[k][1] = 0.0;
  }

  fftw_execute(p.backward);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = {p.in[i][0] * scale, p.in[i][1] * scale};
  return z;
}

InstantaneousField instantaneous_frequency(std::span<const double> imf,
                                           double sampling_rate) {
  if (sampling_rate <= 0.0)
    raise(Errc::invalid_argument, "instantaneous_frequency: sampling rate must be > 0");
  const std::size_t n = imf.size();
  InstantaneousField field;
  field.frequency.assign(n, 0.0);
  field.amplitude.assign(n, 0.0);
  if (n == 0) return field;

  const auto z = analytic_signal(imf);
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    field.amplitude[i] = std::abs(z[i]);
    phase[i] = std::arg(z[i]);
  }

  // Unwrap: clamp successive phase steps into (-pi, pi].
  constexpr double pi = std::numbers::pi;
  for (std::size_t i = 1; i < n; ++i) {
    double step = phase[i] - phase[i - 1];
    step = std::fmod(step + pi, 2.0 * pi);
    if (step < 0.0) step += 2.0 * pi;
    step -= pi;
    phase[i] = phase[i - 1] + step;
  }

  if (n == 1) return field;
  const double to_freq = sampling_rate / (2.0 * pi);
  field.frequency[0] = (phase[1] - phase[0]) * to_freq;
  field.frequency[n - 1] = (phase[n - 1] - phase[n - 2]) * to_freq;
  for (std::size_t i = 1; i + 1 < n; ++i)
    field.frequency[i] = (phase[i + 1] - phase[i - 1]) * 0.5 * to_freq;
  return field;
}

HhtSpectrum hht_spectrum(std::span<const double> imf, const FrequencyBins& bins,
                         double sampling_rate) {
  if (bins.count() == 0) raise(Errc::invalid_argument, "hht_spectrum: empty bins");
  bool nonzero = false;
  for (double v : imf)
    if (v != 0.0) {
      nonzero = true;
      break;
    }
  if (!nonzero)
    raise(Errc::undefined_period, "hht_spectrum: all-zero input has no period");

  const InstantaneousField field = instantaneous_frequency(imf, sampling_rate);

  HhtSpectrum spec;
  spec.energy.assign(bins.count(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < field.frequency.size(); ++i) {
    const double f = field.frequency[i];
    if (f <= 0.0 || f < bins.edges.front() || f > bins.edges.back()) continue;
    // upper_bound gives the first edge above f; the bin is the one before it.
    auto it = std::upper_bound(bins.edges.begin(), bins.edges.end(), f);
    std::size_t bin = static_cast<std::size_t>(it - bins.edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= bins.count()) bin = bins.count() - 1;  // f == top edge
    const double e = field.amplitude[i] * field.amplitude[i];
    spec.energy[bin] += e;
    total += e;
  }
  if (total <= 0.0)
    raise(Errc::undefined_period,
          "hht_spectrum: no positive-frequency energy inside the bin range");

  std::size_t best = 0;
  for (std::size_t b = 1; b < spec.energy.size(); ++b)
    if (spec.energy[b] > spec.energy[best]) best = b;  // ties keep the lower bin
  spec.dominant_bin = best;
  spec.characteristic_period =
      1.0 / std::sqrt(bins.edges[best] * bins.edges[best + 1]);
  return spec;
}

double characteristic_period(std::span<const double> imf, const FrequencyBins& bins,
                             double sampling_rate) {
  return hht_spectrum(imf, bins, sampling_rate).characteristic_period;
}

void write_spectrum_csv(std::ostream& out, const HhtSpectrum& spectrum,
                        const FrequencyBins& bins) {
  out << "bin_low,bin_high,energy\n";
  for (std::size_t b = 0; b < spectrum.energy.size(); ++b)
    out << format_g6(bins.edges[b]) << ',' << format_g6(bins.edges[b + 1]) << ','
        << format_g6(spectrum.energy[b]) << '\n';
}

}  // namespace ousia
