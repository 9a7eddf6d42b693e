#include "support/naive_dft.hpp"

#include <cmath>

namespace testsupport {
namespace {
constexpr double kTau = 6.283185307179586;
}

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -kTau * static_cast<double>(k) * static_cast<double>(t) /
                           static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<std::complex<double>> naive_idft(const std::vector<std::complex<double>>& spectrum) {
  const std::size_t n = spectrum.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = kTau * static_cast<double>(k) * static_cast<double>(t) /
                           static_cast<double>(n);
      acc += spectrum[k] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<std::complex<double>> naive_analytic_signal(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (n == 1) return {std::complex<double>(x[0], 0.0)};
  auto spectrum = naive_dft(x);
  const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) spectrum[k] *= 2.0;
  for (std::size_t k = positive_end + (n % 2 == 0 ? 1 : 0); k < n; ++k)
    spectrum[k] = {0.0, 0.0};
  return naive_idft(spectrum);
}

std::vector<double> naive_bandpass(const std::vector<double>& x, double f_lo, double f_hi) {
  const std::size_t n = x.size();
  auto spectrum = naive_dft(x);
  for (std::size_t k = 0; k < n; ++k) {
    double f = static_cast<double>(k) / static_cast<double>(n);
    if (f > 0.5) f -= 1.0;  // negative-frequency half
    const double mag = std::fabs(f);
    if (mag < f_lo || mag > f_hi) spectrum[k] = {0.0, 0.0};
  }
  const auto back = naive_idft(spectrum);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = back[t].real();
  return out;
}

}  // namespace testsupport
