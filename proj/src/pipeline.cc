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

#include "memdec/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>

#include "json.hpp"
#include "memdec/errors.h"
#include "memdec/serialization.h"

namespace memdec {

namespace fs = std::filesystem;

std::string experiment_text(const RunConfig &config) {
    const std::string full = serialize_config(config);
    std::string out;
    std::size_t start = 0;
    while (start < full.size()) {
        const std::size_t end = full.find('\n', start);
        const std::string line = full.substr(start, end - start + 1);
        if (line.rfind("output_dir ", 0) != 0) {
            out += line;
        }
        start = end + 1;
    }
    return out;
}

std::string config_digest(const RunConfig &config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : experiment_text(config)) {
        h = (h ^ c) * 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

class Manifest {
   public:
    Manifest(fs::path path, std::string digest) : path_(std::move(path)), digest_(std::move(digest)) {
    }

    void load() {
        if (!fs::exists(path_)) {
            return;
        }
        try {
            const auto j = nlohmann::json::parse(read_file(path_.string()));
            if (j.at("config_digest").get<std::string>() != digest_) {
                return;
            }
            for (const auto &s : j.at("completed")) {
                done_.insert(s.get<std::string>());
            }
        } catch (const nlohmann::json::exception &) {
            done_.clear();
        }
    }
    bool done(const std::string &stage) const {
        return done_.count(stage) > 0;
    }
    void mark(const std::string &stage) {
        done_.insert(stage);
        nlohmann::json j;
        j["config_digest"] = digest_;
        j["completed"] = std::vector<std::string>(done_.begin(), done_.end());
        write_file(path_.string(), j.dump(2) + "\n");
    }

   private:
    fs::path path_;
    std::string digest_;
    std::set<std::string> done_;
};

bool uses(const RunConfig &c, Scheme s) {
    return std::find(c.schemes.begin(), c.schemes.end(), s) != c.schemes.end();
}

void prepare_output_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory " + dir.string() +
                                 (ec ? ": " + ec.message() : std::string()));
    }
    const fs::path probe = dir / ".write_probe";
    write_file(probe.string(), "");
    fs::remove(probe, ec);
}

}  // namespace

std::vector<EvalReport> run_pipeline(const RunConfig &config, const PipelineOptions &options) {
    try {
        config.experiment.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError({e.what()});
    }
    const fs::path dir(config.output_dir);
    prepare_output_dir(dir);
    auto log = [&](const std::string &msg) {
        if (options.log) {
            *options.log << msg << std::endl;
        }
    };
    auto path = [&](const std::string &name) { return (dir / name).string(); };
    auto run_file = [&](const char *prefix, int run, const char *ext) {
        return path(std::string(prefix) + "_" + std::to_string(run) + ext);
    };

    write_file(path("config.txt"), serialize_config(config));
    const std::string config_text = experiment_text(config);
    Manifest manifest(dir / "manifest.json", config_digest(config));
    if (options.resume) {
        manifest.load();
    }

    Experiment exp(config.experiment);
    const int n_runs = config.experiment.protocol.n_train_runs;
    const double rate = config.experiment.crossbar.stuck_rate;
    const double p_drop = exp.hwa_p_drop(rate);

    if (manifest.done("data")) {
        log("data: reusing saved datasets");
        exp.adopt_datasets(load_dataset(path("train.mdds")), load_dataset(path("val.mdds")));
    } else {
        log("data: generating");
        save_dataset(path("train.mdds"), exp.train_set());
        save_dataset(path("val.mdds"), exp.val_set());
        manifest.mark("data");
    }

    if (manifest.done("train_fp")) {
        log("train_fp: reusing checkpoints");
        for (int r = 0; r < n_runs; r++) {
            exp.adopt_fp(r, load_checkpoint(run_file("fp", r, ".mdck")).params);
        }
    } else {
        log("train_fp: " + std::to_string(n_runs) + " runs");
        for (int r = 0; r < n_runs; r++) {
            save_checkpoint(run_file("fp", r, ".mdck"), {exp.fp_params(r), "fp", exp.fp_seed(r), 0.0});
        }
        manifest.mark("train_fp");
    }

    if (uses(config, Scheme::HwaMnd)) {
        if (manifest.done("retrain_hwa")) {
            log("retrain_hwa: reusing checkpoints");
            for (int r = 0; r < n_runs; r++) {
                exp.adopt_hwa(r, p_drop, load_checkpoint(run_file("hwa", r, ".mdck")).params);
            }
        } else {
            log("retrain_hwa: p_drop " + std::to_string(p_drop));
            exp.prepare(Scheme::HwaMnd, rate, p_drop);
            for (int r = 0; r < n_runs; r++) {
                save_checkpoint(run_file("hwa", r, ".mdck"),
                                {exp.hwa_params(r, p_drop), "hwa", exp.retrain_seed(r, Scheme::HwaMnd, p_drop), 0.0});
            }
            manifest.mark("retrain_hwa");
        }
    }

    if (uses(config, Scheme::DsMnd)) {
        if (manifest.done("retrain_ds")) {
            log("retrain_ds: reusing checkpoints");
            for (int r = 0; r < n_runs; r++) {
                if (load_fault_map(run_file("ds", r, ".mdfm")) != exp.device_faults(r, rate)) {
                    throw CorruptFileError("fault map " + run_file("ds", r, ".mdfm") + " does not match the config");
                }
                exp.adopt_ds(r, rate, load_checkpoint(run_file("ds", r, ".mdck")).params);
            }
        } else {
            log("retrain_ds: stuck rate " + std::to_string(rate));
            exp.prepare(Scheme::DsMnd, rate, p_drop);
            for (int r = 0; r < n_runs; r++) {
                save_fault_map(run_file("ds", r, ".mdfm"), exp.device_faults(r, rate));
                save_checkpoint(run_file("ds", r, ".mdck"),
                                {exp.ds_params(r, rate), "ds", exp.retrain_seed(r, Scheme::DsMnd, rate), 0.0});
            }
            manifest.mark("retrain_ds");
        }
    }

    std::vector<EvalReport> reports;
    for (Scheme s : config.schemes) {
        log(std::string("evaluate: ") + scheme_name(s));
        reports.push_back(exp.lfr_curve(s, rate));
    }
    write_file(path("report.json"), reports_to_json(reports, config_text));
    write_file(path("curve.csv"), reports_to_csv(reports));
    manifest.mark("evaluate");
    return reports;
}

}  // namespace memdec
