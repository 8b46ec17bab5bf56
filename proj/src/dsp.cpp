// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace eegsweep::dsp {

namespace {
constexpr double kPi = std::numbers::pi;

double sinc_lowpass_tap(double cutoff_norm, double n) {
  // 2 fc sinc(2 fc n), fc in cycles/sample
  if (n == 0.0) return 2.0 * cutoff_norm;
  return std::sin(2.0 * kPi * cutoff_norm * n) / (kPi * n);
}
}  // namespace

std::vector<double> hamming(std::size_t n, bool periodic) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  const double denom = periodic ? static_cast<double>(n) : static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / denom);
  return w;
}

std::size_t hamming_kernel_length(double transition_hz, double fs) {
  if (!(transition_hz > 0.0)) throw std::invalid_argument("transition width must be positive");
  auto n = static_cast<std::size_t>(std::ceil(3.3 / (transition_hz / fs)));
  if (n % 2 == 0) ++n;
  return n;
}

std::vector<double> windowed_sinc_bandpass(double fs, double low_cut, double high_cut,
                                           std::size_t length) {
  if (length % 2 == 0) throw std::invalid_argument("kernel length must be odd");
  const double nyq = fs / 2.0;
  const auto w = hamming(length, false);
  const double mid = static_cast<double>(length - 1) / 2.0;
  std::vector<double> h(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const double n = static_cast<double>(i) - mid;
    double tap = high_cut >= nyq ? (n == 0.0 ? 1.0 : 0.0) : sinc_lowpass_tap(high_cut / fs, n);
    if (low_cut > 0.0) tap -= sinc_lowpass_tap(low_cut / fs, n);
    h[i] = tap * w[i];
  }
  return h;
}

std::vector<double> reflect_pad(std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  if (pad >= n && pad > 0) throw std::invalid_argument("reflection pad longer than signal");
  std::vector<double> out;
  out.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) out.push_back(x[i]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) out.push_back(x[n - 1 - i]);
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> dft(std::span<const double> x) {
  Eigen::FFT<double> fft;
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

std::vector<double> idft_real(std::span<const std::complex<double>> spectrum) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  std::vector<std::complex<double>> out;
  fft.inv(out, in);
  std::vector<double> re(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
  return re;
}

std::vector<double> filter_zero_phase(std::span<const double> x, std::span<const double> kernel) {
  const std::size_t n = x.size();
  const std::size_t len = kernel.size();
  if (len % 2 == 0) throw std::invalid_argument("kernel length must be odd");
  if (n == 0) return {};
  const std::size_t pad = (len - 1) / 2;
  const auto xp = reflect_pad(x, pad);
  std::vector<double> y(n, 0.0);
  if (len <= 64) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < len; ++k) acc += kernel[len - 1 - k] * xp[i + k];
      y[i] = acc;
    }
    return y;
  }
  const std::size_t nfft = next_pow2(xp.size() + len - 1);
  std::vector<double> a(nfft, 0.0), b(nfft, 0.0);
  std::copy(xp.begin(), xp.end(), a.begin());
  std::copy(kernel.begin(), kernel.end(), b.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fa, fb;
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  for (std::size_t i = 0; i < nfft; ++i) fa[i] *= fb[i];
  std::vector<double> full;
  fft.inv(full, fa);
  // full[m] = sum_k h[k] xp[m-k]; sample i of the output sits at m = i + len - 1.
  for (std::size_t i = 0; i < n; ++i) y[i] = full[i + len - 1];
  return y;
}

double kernel_gain(std::span<const double> kernel, double freq_hz, double fs) {
  const double mid = static_cast<double>(kernel.size() - 1) / 2.0;
  const double w = 2.0 * kPi * freq_hz / fs;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < kernel.size(); ++i)
    acc += kernel[i] * std::polar(1.0, -w * (static_cast<double>(i) - mid));
  return acc.real();
}

Psd welch(std::span<const double> x, double fs, const WelchParams& params) {
  Psd out;
  const std::size_t n = x.size();
  if (n == 0) return out;
  const std::size_t nperseg = std::min(params.nperseg, n);
  auto noverlap = static_cast<std::size_t>(std::floor(params.overlap * static_cast<double>(nperseg)));
  if (noverlap >= nperseg) noverlap = nperseg - 1;
  const std::size_t step = nperseg - noverlap;
  const std::size_t nseg = (n - nperseg) / step + 1;
  const auto win = hamming(nperseg, true);
  double wss = 0.0;
  for (double v : win) wss += v * v;
  const std::size_t nbins = nperseg / 2 + 1;
  out.freqs.resize(nbins);
  out.power.assign(nbins, 0.0);
  out.df = fs / static_cast<double>(nperseg);
  for (std::size_t k = 0; k < nbins; ++k) out.freqs[k] = static_cast<double>(k) * out.df;

  Eigen::FFT<double> fft;
  std::vector<double> seg(nperseg);
  std::vector<std::complex<double>> spec;
  for (std::size_t s = 0; s < nseg; ++s) {
    const std::size_t start = s * step;
    double mean = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) mean += x[start + i];
    mean /= static_cast<double>(nperseg);
    for (std::size_t i = 0; i < nperseg; ++i) seg[i] = (x[start + i] - mean) * win[i];
    fft.fwd(spec, seg);
    for (std::size_t k = 0; k < nbins; ++k) out.power[k] += std::norm(spec[k]);
  }
  const double scale = 1.0 / (fs * wss * static_cast<double>(nseg));
  for (std::size_t k = 0; k < nbins; ++k) {
    double p = out.power[k] * scale;
    const bool is_nyquist = (nperseg % 2 == 0) && k == nbins - 1;
    if (k != 0 && !is_nyquist) p *= 2.0;
    out.power[k] = p;
  }
  return out;
}

}  // namespace eegsweep::dsp
