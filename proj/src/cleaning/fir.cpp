// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <sstream>

#include "eegsweep/cleaning.hpp"
#include "eegsweep/dsp.hpp"

namespace eegsweep {

std::string to_string(CleaningKind k) {
  switch (k) {
    case CleaningKind::Raw: return "Raw";
    case CleaningKind::Filtered: return "Filtered";
    case CleaningKind::ASR: return "ASR";
    case CleaningKind::ICA: return "ICA";
  }
  return "?";
}

CleaningKind cleaning_from_string(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "raw" || l == "none") return CleaningKind::Raw;
  if (l == "filtered" || l == "fir") return CleaningKind::Filtered;
  if (l == "asr" || l == "fir+asr") return CleaningKind::ASR;
  if (l == "ica" || l == "fir+asr+ica") return CleaningKind::ICA;
  throw ConfigError("unknown cleaning pipeline '" + std::string(s) + "'");
}

std::vector<double> design_fir(const FirParams& p, double fs) {
  const double nyq = fs / 2.0;
  if (!(p.low_hz > 0.0 && p.low_hz < p.high_hz && p.high_hz < nyq)) {
    std::ostringstream os;
    os << "FIR band [" << p.low_hz << ", " << p.high_hz << "] Hz must satisfy 0 < low < high < "
       << nyq;
    throw ConfigError(os.str());
  }
  if (!(p.transition_low_hz > 0.0 && p.transition_high_hz > 0.0))
    throw ConfigError("FIR transition widths must be positive");
  const double low_cut = std::max(p.low_hz - p.transition_low_hz / 2.0, 0.0);
  const double high_cut = std::min(p.high_hz + p.transition_high_hz / 2.0, nyq);
  const std::size_t len =
      dsp::hamming_kernel_length(std::min(p.transition_low_hz, p.transition_high_hz), fs);
  return dsp::windowed_sinc_bandpass(fs, low_cut, high_cut, len);
}

Recording fir_bandpass(const Recording& r, const FirParams& p) {
  const auto kernel = design_fir(p, r.sample_rate_hz);
  if (static_cast<std::size_t>(r.n_samples()) < kernel.size()) {
    throw DataError("subject " + r.subject_id + ": recording too short for filter order (" +
                    std::to_string(r.n_samples()) + " samples < " +
                    std::to_string(kernel.size()) + " taps)");
  }
  SignalMatrix out(r.n_channels(), r.n_samples());
  for (Eigen::Index c = 0; c < r.n_channels(); ++c) {
    auto y = dsp::filter_zero_phase(r.channel(c), kernel);
    std::copy(y.begin(), y.end(), out.data() + c * out.cols());
  }
  return r.with_samples(std::move(out));
}

}  // namespace eegsweep
