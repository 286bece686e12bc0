// Copyright 2026 The memdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMDEC_PIPELINE_H
#define MEMDEC_PIPELINE_H

#include <iosfwd>
#include <string>
#include <vector>

#include "memdec/config.h"
#include "memdec/evaluation.h"

namespace memdec {

struct PipelineOptions {
    /// Reuse artifacts listed in an existing manifest written for the same config.
    bool resume = true;
    /// Progress lines; null for silence.
    std::ostream *log = nullptr;
};

/// generate -> train_fp -> retrain (hwa/ds as the scheme list needs) -> evaluate.
/// Writes into config.output_dir:
///   config.txt, manifest.json, train.mdds, val.mdds, fp_<run>.mdck, hwa_<run>.mdck,
///   ds_<run>.mdck, ds_<run>.mdfm, report.json, curve.csv
/// The manifest is updated after every stage so an interrupted run can resume.
std::vector<EvalReport> run_pipeline(const RunConfig &config, const PipelineOptions &options = {});

/// The serialized config without output_dir: what the results depend on.
std::string experiment_text(const RunConfig &config);
/// FNV-1a of experiment_text, as hex.
std::string config_digest(const RunConfig &config);

}  // namespace memdec

#endif
