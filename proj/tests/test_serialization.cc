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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "memdec/errors.h"
#include "memdec/serialization.h"

using namespace memdec;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("memdec_test_" + name)).string();
}

}  // namespace

TEST(dataset_io, round_trip_large) {
    const std::vector<double> ps = {1e-3, 1e-2};
    const Dataset d = generate_dataset(ps, 50000, 3, 77, Split::Test);
    const std::string path = temp_path("ds.mdds");
    save_dataset(path, d);
    EXPECT_EQ(load_dataset(path), d);
    std::filesystem::remove(path);
}

TEST(dataset_io, corrupt_inputs) {
    const double ps[] = {1e-2};
    const std::string bytes = encode_dataset(generate_dataset(ps, 100, 3, 1));
    std::string bad_magic = bytes;
    bad_magic[0] ^= 0x20;
    EXPECT_THROW(decode_dataset(bad_magic), CorruptFileError);
    EXPECT_THROW(decode_dataset(bytes.substr(0, bytes.size() - 3)), CorruptFileError);
    EXPECT_THROW(decode_dataset(bytes + "x"), CorruptFileError);
    EXPECT_THROW(decode_dataset(""), CorruptFileError);
    std::string newer = bytes;
    newer[4] = 2;
    EXPECT_THROW(decode_dataset(newer), VersionMismatchError);
}

TEST(dataset_io, csv_export) {
    const double ps[] = {1e-2};
    const Dataset d = generate_dataset(ps, 10, 3, 1);
    const std::string path = temp_path("ds.csv");
    write_dataset_csv(path, d);
    const std::string text = read_file(path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "p,label,d0_0,d0_1,d0_2,d0_3,d1_0,d1_1,d1_2,d1_3,d2_0,d2_1,d2_2,d2_3,"
                                                "d3_0,d3_1,d3_2,d3_3");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
    std::filesystem::remove(path);
}

TEST(checkpoint_io, round_trip_is_bit_exact) {
    Checkpoint c{DecoderParams::random_init({}, 3), "hwa", 12345, 0.91234567890123};
    c.params.recurrent.data[0] = -0.0;
    c.params.recurrent.data[1] = 1e-310;
    const Checkpoint back = decode_checkpoint(encode_checkpoint(c));
    EXPECT_EQ(back, c);
    EXPECT_TRUE(std::signbit(back.params.recurrent.data[0]));
    const std::string path = temp_path("c.mdck");
    save_checkpoint(path, c);
    EXPECT_EQ(load_checkpoint(path), c);
    std::filesystem::remove(path);
}

TEST(checkpoint_io, corrupt_inputs) {
    const std::string bytes = encode_checkpoint({DecoderParams::random_init({}, 3), "fp", 1, 0.5});
    std::string flipped = bytes;
    flipped[1] ^= 1;
    EXPECT_THROW(decode_checkpoint(flipped), CorruptFileError);
    EXPECT_THROW(decode_checkpoint(bytes.substr(0, 40)), CorruptFileError);
    EXPECT_THROW(load_checkpoint(temp_path("does_not_exist")), std::runtime_error);
}

TEST(fault_map_io, round_trip) {
    Rng rng(4);
    const FaultMap m = sample_fault_map(DecoderShape{}, 0.3, rng);
    EXPECT_EQ(decode_fault_map(encode_fault_map(m)), m);
    EXPECT_THROW(decode_fault_map(encode_dataset(Dataset{{}, {1e-2}, 3, 0, Split::Train})), CorruptFileError);
}

TEST(programmed_io, round_trip) {
    CrossbarConfig cfg;
    Rng rng(1);
    const ProgrammedDecoder d = program_decoder(DecoderParams::random_init({}, 2), cfg, nullptr, rng);
    EXPECT_EQ(decode_programmed(encode_programmed(d)), d);
}

TEST(report_io, json_round_trip_and_stability) {
    EvalReport r;
    r.scheme = Scheme::DsMnd;
    r.stuck_rate = 0.1;
    r.per_p.push_back(summarize(1e-2, {0.9, 0.91, 0.925}));
    r.per_p.push_back(summarize(1e-3, {0.999, 0.998, 0.9995}));
    r.fit = CurveFit{1000.0, 2.0, 0.1, 2, 0};
    r.pseudo = PseudoThreshold{1e-3, true};
    EvalReport b;
    b.scheme = Scheme::Baseline;
    b.per_p.push_back(summarize(1e-2, {0.93}));
    const std::string json = reports_to_json({r, b}, "epochs = 3\n");
    EXPECT_EQ(json, reports_to_json({r, b}, "epochs = 3\n"));
    const auto back = reports_from_json(json);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(reports_to_json(back, "epochs = 3\n"), json);
    EXPECT_EQ(back[0].per_p[0].runs, r.per_p[0].runs);
    EXPECT_FALSE(back[1].fit.has_value());
    // Keys are sorted.
    EXPECT_LT(json.find("\"config\""), json.find("\"format_version\""));
    EXPECT_LT(json.find("\"format_version\""), json.find("\"reports\""));
    EXPECT_THROW(reports_from_json("{not json"), CorruptFileError);
}

TEST(report_io, csv_has_lfr_columns) {
    EvalReport r;
    r.per_p.push_back(summarize(1e-2, {0.75}));
    const std::string csv = reports_to_csv({r});
    EXPECT_NE(csv.find("baseline,0,0,0.01,0.75,0,0.25,0"), std::string::npos);
}
