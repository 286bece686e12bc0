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

#include <string>

#include "gtest/gtest.h"
#include "memdec/config.h"
#include "memdec/errors.h"

using namespace memdec;

TEST(config, empty_text_gives_defaults) {
    const RunConfig c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_EQ(c.experiment.train.learning_rate, 0.001);
    EXPECT_EQ(c.experiment.train.batch_size, 32);
    EXPECT_EQ(c.experiment.train.hidden, 16);
    EXPECT_EQ(c.experiment.crossbar.adc_bound, 6.0);
    EXPECT_EQ(c.experiment.crossbar.levels, 256);
    EXPECT_EQ(c.experiment.crossbar.g_hcs, 200.0);
    EXPECT_EQ(c.experiment.crossbar.g_lcs, 60.0);
    EXPECT_EQ(c.experiment.retrain.epochs, 10);
    EXPECT_EQ(c.experiment.retrain.noise_relative, 0.008);
    EXPECT_EQ(c.experiment.protocol.n_train_runs, 10);
    EXPECT_EQ(c.experiment.protocol.n_infer_runs, 100);
    EXPECT_EQ(c.experiment.protocol.p_values.size(), 8u);
    EXPECT_FALSE(c.experiment.hwa_p_drop.has_value());
}

TEST(config, comments_and_whitespace) {
    const RunConfig c = parse_config("# header\n\n  epochs   =  7   # trailing\nschemes = ds, baseline\n");
    EXPECT_EQ(c.experiment.train.epochs, 7);
    EXPECT_EQ(c.schemes, (std::vector<Scheme>{Scheme::DsMnd, Scheme::Baseline}));
}

TEST(config, range_error_names_line_and_key) {
    try {
        parse_config("epochs = 3\np_drop = 1.5\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        ASSERT_EQ(e.problems().size(), 1u);
        EXPECT_NE(e.problems()[0].find("line 2"), std::string::npos);
        EXPECT_NE(e.problems()[0].find("p_drop"), std::string::npos);
    }
}

TEST(config, all_problems_reported_at_once) {
    try {
        parse_config("learning_rate = -1\nbogus = 2\nlevels = 1\nepochs = many\nepochs = 3\nnot a pair\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        const auto &p = e.problems();
        ASSERT_EQ(p.size(), 6u);
        EXPECT_NE(p[0].find("line 1"), std::string::npos);
        EXPECT_NE(p[1].find("unknown key 'bogus'"), std::string::npos);
        EXPECT_NE(p[2].find("line 3"), std::string::npos);
        EXPECT_NE(p[3].find("line 4"), std::string::npos);
        EXPECT_NE(p[4].find("duplicate key 'epochs'"), std::string::npos);
        EXPECT_NE(p[5].find("line 6"), std::string::npos);
    }
}

TEST(config, duplicate_key_is_an_error) {
    EXPECT_THROW(parse_config("epochs = 3\nepochs = 4\n"), ConfigError);
}

TEST(config, cross_field_check) {
    EXPECT_THROW(parse_config("g_hcs = 50\n"), ConfigError);
}

TEST(config, round_trip) {
    RunConfig c;
    c.experiment.master_seed = 0xFFFFFFFFFFFFFFFFull;
    c.experiment.data.train_p_values = {1e-5, 0.1 + 0.2, 1.0 / 3.0};
    c.experiment.train.learning_rate = 3e-4;
    c.experiment.hwa_p_drop = 0.15;
    c.experiment.retrain.clip_scale = 2.5;
    c.experiment.retrain.io_discretize = true;
    c.experiment.crossbar.variability.coefficients = {0.1, -1e-3, 2.5e-6};
    c.experiment.crossbar.quantize_io = false;
    c.experiment.protocol.p_values = {1e-3};
    c.schemes = {Scheme::HwaMnd};
    c.output_dir = "some/dir";
    const RunConfig back = parse_config(serialize_config(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(parse_config(serialize_config(RunConfig{})), RunConfig{});
}

TEST(config, serializes_every_key) {
    const std::string text = serialize_config(RunConfig{});
    for (const auto &k : config_keys()) {
        EXPECT_NE(text.find(k + " = "), std::string::npos) << k;
    }
}
