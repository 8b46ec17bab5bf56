// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace eegsweep::dsp {

/// Hamming window. `periodic` gives the DFT-even variant used for spectral
/// estimation; the symmetric variant is used for filter design.
std::vector<double> hamming(std::size_t n, bool periodic);

/// Windowed-sinc length for a Hamming design: ceil(3.3 * fs / transition), forced odd.
std::size_t hamming_kernel_length(double transition_hz, double fs);

/// Linear-phase Hamming windowed-sinc kernel passing [low_cut, high_cut] Hz.
/// low_cut <= 0 gives a low-pass; high_cut >= fs/2 gives a high-pass. `length` must be odd.
std::vector<double> windowed_sinc_bandpass(double fs, double low_cut, double high_cut,
                                           std::size_t length);

/// Even reflection about the end samples (edge sample not repeated). Requires pad < x.size().
std::vector<double> reflect_pad(std::span<const double> x, std::size_t pad);

/// Zero-phase application of a symmetric odd-length kernel: reflection-pad by
/// (L-1)/2, convolve, and keep the delay-compensated centre. Output length equals
/// input length. Uses direct convolution for short kernels, FFT otherwise.
std::vector<double> filter_zero_phase(std::span<const double> x, std::span<const double> kernel);

/// Complex frequency response of a real kernel at `freq_hz`, with the linear-phase
/// delay removed (so a symmetric kernel yields a real value).
double kernel_gain(std::span<const double> kernel, double freq_hz, double fs);

std::size_t next_pow2(std::size_t n);

/// Forward DFT of a real sequence (full spectrum).
std::vector<std::complex<double>> dft(std::span<const double> x);
/// Inverse DFT returning the real part, normalised by 1/n.
std::vector<double> idft_real(std::span<const std::complex<double>> spectrum);

struct WelchParams {
  std::size_t nperseg = 256;  // clamped to the signal length
  double overlap = 0.5;
};

struct Psd {
  std::vector<double> freqs;
  std::vector<double> power;  // one-sided density, units^2 / Hz
  double df = 0.0;
};

/// Welch estimate: periodic Hamming segments, per-segment mean removal, density scaling.
Psd welch(std::span<const double> x, double fs, const WelchParams& params = {});

}  // namespace eegsweep::dsp
