// Copyright 2026 The eegsweep Authors.
// SPDX-License-Identifier: Apache-2.0

#include "eegsweep/cleaning.hpp"

namespace eegsweep {

Recording run_pipeline(const Recording& r, const CleaningPipeline& p, CleaningReport* report) {
  CleaningReport rep;
  if (p.kind == CleaningKind::Raw) {
    if (report) *report = rep;
    return r;
  }
  Recording x = fir_bandpass(r, p.fir);
  if (p.kind != CleaningKind::Filtered) {
    const AsrModel model = asr_calibrate(x, p.asr);
    AsrProcessStats st;
    x = asr_process(x, model, p.asr, &st);
    rep.asr_calib_windows = model.n_windows;
    rep.asr_calib_accepted = model.n_accepted;
    rep.asr_windows_modified = st.n_windows_modified;
  }
  if (p.kind == CleaningKind::ICA) {
    IcaDecomposition d = ica_decompose(x, p.ica);
    d.labels = label_components(d, Montage::standard_1020(), x.sample_rate_hz, p.ica.labeler);
    rep.ica_labels = d.labels;
    rep.ica_converged = d.converged;
    x = ica_reconstruct(d, [](std::size_t, ComponentLabel l) { return l == ComponentLabel::Brain; });
  }
  if (report) *report = std::move(rep);
  return x;
}

}  // namespace eegsweep
