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

#ifndef MEMDEC_VARIABILITY_FIT_H
#define MEMDEC_VARIABILITY_FIT_H

#include <iosfwd>
#include <string>
#include <vector>

#include "memdec/crossbar.h"

namespace memdec {

struct ProgrammingRecord {
    double target = 0.0;      // uS
    double programmed = 0.0;  // uS
    long device_id = 0;
    long cycle_id = 0;
};

/// Reads the characterization CSV (target_conductance_uS, programmed_conductance_uS,
/// device_id, cycle_id). Columns are located by header name. Throws CorruptFileError.
std::vector<ProgrammingRecord> read_programming_csv(std::istream &in);
std::vector<ProgrammingRecord> read_programming_csv(const std::string &path);

struct SpreadPoint {
    double target = 0.0;
    double sigma = 0.0;
    std::size_t count = 0;
};

/// Sample standard deviation of the programming error per distinct target level.
/// Levels with fewer than two records are dropped.
std::vector<SpreadPoint> spread_by_target(const std::vector<ProgrammingRecord> &records);

/// Least-squares polynomial sigma(G) of the given degree. Throws InsufficientDataError when
/// there are not more usable levels than the degree.
VariabilityModel fit_variability_model(const std::vector<ProgrammingRecord> &records, int degree);

}  // namespace memdec

#endif
