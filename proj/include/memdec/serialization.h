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

#ifndef MEMDEC_SERIALIZATION_H
#define MEMDEC_SERIALIZATION_H

#include <cstdint>
#include <string>
#include <vector>

#include "memdec/crossbar.h"
#include "memdec/dataset.h"
#include "memdec/decoder_params.h"
#include "memdec/evaluation.h"

namespace memdec {

// Binary files are little-endian: 4-byte magic, u32 format version, payload. A bad magic or
// a short/overlong payload raises CorruptFileError; a newer version raises
// VersionMismatchError.

inline constexpr std::uint32_t kFormatVersion = 1;

std::string encode_dataset(const Dataset &data);
Dataset decode_dataset(const std::string &bytes);
void save_dataset(const std::string &path, const Dataset &data);
Dataset load_dataset(const std::string &path);
/// One row per sample: p, label, then one 0/1 column per detection event.
void write_dataset_csv(const std::string &path, const Dataset &data);

struct Checkpoint {
    DecoderParams params;
    std::string kind;  // "fp", "hwa", "ds"
    std::uint64_t seed = 0;
    double val_accuracy = 0.0;
    friend bool operator==(const Checkpoint &, const Checkpoint &) = default;
};

std::string encode_checkpoint(const Checkpoint &ckpt);
Checkpoint decode_checkpoint(const std::string &bytes);
void save_checkpoint(const std::string &path, const Checkpoint &ckpt);
Checkpoint load_checkpoint(const std::string &path);

std::string encode_fault_map(const FaultMap &map);
FaultMap decode_fault_map(const std::string &bytes);
void save_fault_map(const std::string &path, const FaultMap &map);
FaultMap load_fault_map(const std::string &path);

std::string encode_programmed(const ProgrammedDecoder &units);
ProgrammedDecoder decode_programmed(const std::string &bytes);
void save_programmed(const std::string &path, const ProgrammedDecoder &units);
ProgrammedDecoder load_programmed(const std::string &path);

/// JSON with sorted keys and round-trip precision; identical inputs give identical bytes.
std::string reports_to_json(const std::vector<EvalReport> &reports, const std::string &config_text);
std::vector<EvalReport> reports_from_json(const std::string &text);
/// scheme,stuck_rate,p_drop,p,accuracy_mean,accuracy_std,lfr_mean,lfr_std
std::string reports_to_csv(const std::vector<EvalReport> &reports);

std::string read_file(const std::string &path);
/// Writes to a temporary sibling and renames, so readers never see a partial file.
void write_file(const std::string &path, const std::string &bytes);

}  // namespace memdec

#endif
