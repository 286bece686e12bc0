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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memdec/config.h"
#include "memdec/crossbar.h"
#include "memdec/errors.h"
#include "memdec/evaluation.h"
#include "memdec/hwa.h"
#include "memdec/pipeline.h"
#include "memdec/rnn.h"
#include "memdec/serialization.h"
#include "memdec/training.h"
#include "memdec/variability_fit.h"

using namespace memdec;

namespace {

enum Exit { kOk = 0, kConfig = 2, kData = 3, kNumeric = 4 };

RunConfig config_or_default(const std::string &path) {
    return path.empty() ? RunConfig{} : load_config(path);
}

Scheme scheme_arg(const std::string &name) {
    auto s = parse_scheme(name);
    if (!s) {
        throw ConfigError({"unknown scheme '" + name + "'"});
    }
    return *s;
}

void emit_reports(const std::vector<EvalReport> &reports, const RunConfig &cfg, const std::string &json_out,
                  const std::string &csv_out) {
    for (const auto &rep : reports) {
        for (const auto &s : rep.per_p) {
            std::printf("%-8s stuck=%.3g p_drop=%.3g p=%.4g accuracy=%.6f std=%.6f\n", scheme_name(rep.scheme),
                        rep.stuck_rate, rep.p_drop, s.p, s.mean, s.std);
        }
        if (rep.fit) {
            std::printf("%-8s fit a=%.6g b=%.6g residual=%.4g", scheme_name(rep.scheme), rep.fit->a, rep.fit->b,
                        rep.fit->residual);
            if (rep.pseudo) {
                std::printf(" pseudo_threshold=%.6g%s", rep.pseudo->value, rep.pseudo->in_range ? "" : " (out of range)");
            }
            std::printf("\n");
        }
    }
    if (!json_out.empty()) {
        write_file(json_out, reports_to_json(reports, experiment_text(cfg)));
    }
    if (!csv_out.empty()) {
        write_file(csv_out, reports_to_csv(reports));
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"memdec: memristive neural decoder for the distance-3 surface code"};
    app.require_subcommand(1);

    // generate
    auto *gen = app.add_subcommand("generate", "Sample a syndrome dataset");
    std::vector<double> gen_p;
    std::size_t gen_shots = 1000;
    int gen_rounds = 3;
    std::uint64_t gen_seed = 1;
    std::string gen_split = "train", gen_out, gen_csv;
    gen->add_option("--p", gen_p, "Physical fault rates")->required()->delimiter(',');
    gen->add_option("--shots", gen_shots, "Shots per fault rate");
    gen->add_option("--rounds", gen_rounds, "Stabilizer rounds");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--split", gen_split)->check(CLI::IsMember({"train", "validation", "test"}));
    gen->add_option("--out", gen_out, "Binary dataset file")->required();
    gen->add_option("--csv", gen_csv, "Also write a CSV export");

    // train
    auto *train = app.add_subcommand("train", "Floating-point training");
    std::string tr_train, tr_val, tr_out, tr_config;
    std::optional<std::uint64_t> tr_seed;
    std::optional<int> tr_epochs;
    train->add_option("--train", tr_train)->required();
    train->add_option("--val", tr_val)->required();
    train->add_option("--config", tr_config, "Config file for optimizer settings");
    train->add_option("--epochs", tr_epochs);
    train->add_option("--seed", tr_seed);
    train->add_option("--out-ckpt", tr_out)->required();

    // retrain
    auto *retrain = app.add_subcommand("retrain", "Hardware-aware or device-specific retraining");
    std::string rt_mode = "hwa", rt_train, rt_val, rt_in, rt_out, rt_faults, rt_config;
    double rt_pdrop = 0.1, rt_noise = 0.008;
    bool rt_discretize = false;
    std::optional<double> rt_clip;
    int rt_epochs = 10;
    std::uint64_t rt_seed = 1;
    retrain->add_option("--mode", rt_mode)->check(CLI::IsMember({"hwa", "ds"}));
    retrain->add_option("--train", rt_train)->required();
    retrain->add_option("--val", rt_val)->required();
    retrain->add_option("--config", rt_config, "Config file for optimizer settings");
    retrain->add_option("--pdrop", rt_pdrop);
    retrain->add_option("--noise", rt_noise);
    retrain->add_flag("--discretize", rt_discretize);
    retrain->add_option("--clip", rt_clip);
    retrain->add_option("--epochs", rt_epochs);
    retrain->add_option("--seed", rt_seed);
    retrain->add_option("--fault-map", rt_faults, "Required for --mode ds");
    retrain->add_option("--in-ckpt", rt_in)->required();
    retrain->add_option("--out-ckpt", rt_out)->required();

    // fault-map
    auto *fmap = app.add_subcommand("fault-map", "Sample a stuck-device map for a decoder");
    double fm_rate = 0.1;
    int fm_hidden = 16;
    std::uint64_t fm_seed = 1;
    std::string fm_out;
    fmap->add_option("--stuck-rate", fm_rate);
    fmap->add_option("--hidden", fm_hidden);
    fmap->add_option("--seed", fm_seed);
    fmap->add_option("--out", fm_out)->required();

    // eval
    auto *eval = app.add_subcommand("eval", "Accuracy of one scheme, or of one checkpoint");
    std::string ev_config, ev_scheme = "fp_mnd", ev_json, ev_csv, ev_ckpt, ev_test, ev_faults;
    std::optional<double> ev_rate;
    std::vector<double> ev_p;
    int ev_runs = 100;
    bool ev_digital = false;
    std::uint64_t ev_seed = 1;
    eval->add_option("--config", ev_config);
    eval->add_option("--scheme", ev_scheme);
    eval->add_option("--stuck-rate", ev_rate);
    eval->add_option("--p", ev_p, "Fault rates (default 1e-2)")->delimiter(',');
    eval->add_option("--out", ev_json, "Report JSON");
    eval->add_option("--csv", ev_csv);
    eval->add_option("--ckpt", ev_ckpt, "Evaluate this checkpoint on --test instead of a scheme");
    eval->add_option("--test", ev_test);
    eval->add_option("--fault-map", ev_faults, "Fixed fault map for --ckpt");
    eval->add_option("--runs", ev_runs, "Inference runs for --ckpt");
    eval->add_option("--seed", ev_seed);
    eval->add_flag("--digital", ev_digital, "Skip the analog model for --ckpt");

    // curve
    auto *curve = app.add_subcommand("curve", "Logical fault rate curve, monomial fit and pseudo-threshold");
    std::string cv_config, cv_json, cv_csv;
    std::vector<std::string> cv_schemes = {"baseline"};
    std::optional<double> cv_rate;
    curve->add_option("--config", cv_config);
    curve->add_option("--scheme", cv_schemes)->delimiter(',');
    curve->add_option("--stuck-rate", cv_rate);
    curve->add_option("--out", cv_json);
    curve->add_option("--csv", cv_csv);

    // stuck-sweep
    auto *sweep = app.add_subcommand("stuck-sweep", "Accuracy at p=1e-2 versus stuck rate");
    std::string sw_config, sw_scheme = "fp_mnd", sw_csv;
    std::vector<double> sw_rates = {0.0, 0.05, 0.1, 0.15, 0.2}, sw_pdrops;
    sweep->add_option("--config", sw_config);
    sweep->add_option("--scheme", sw_scheme);
    sweep->add_option("--rates", sw_rates)->delimiter(',');
    sweep->add_option("--pdrops", sw_pdrops, "p_drop values (hwa_mnd only)")->delimiter(',');
    sweep->add_option("--csv", sw_csv);

    // fit-variability
    auto *fitv = app.add_subcommand("fit-variability", "Fit sigma(G) from programming characterization data");
    std::string fv_csv, fv_out;
    int fv_degree = 2;
    fitv->add_option("--csv", fv_csv)->required();
    fitv->add_option("--degree", fv_degree);
    fitv->add_option("--out", fv_out, "Write a config fragment");

    // report
    auto *report = app.add_subcommand("report", "Summarize a report file");
    std::string rp_in, rp_csv;
    report->add_option("--in", rp_in)->required();
    report->add_option("--csv", rp_csv);

    // pipeline
    auto *pipe = app.add_subcommand("pipeline", "generate, train, retrain and evaluate from one config");
    std::string pp_config, pp_outdir;
    bool pp_fresh = false;
    pipe->add_option("--config", pp_config);
    pipe->add_option("--out-dir", pp_outdir);
    pipe->add_flag("--fresh", pp_fresh, "Ignore artifacts from an earlier run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*gen) {
            const Split split = gen_split == "train" ? Split::Train
                                : gen_split == "validation" ? Split::Validation
                                                            : Split::Test;
            Dataset d = generate_dataset(gen_p, gen_shots, gen_rounds, gen_seed, split);
            save_dataset(gen_out, d);
            if (!gen_csv.empty()) {
                write_dataset_csv(gen_csv, d);
            }
            std::printf("wrote %zu samples to %s (label rate %.6f)\n", d.size(), gen_out.c_str(),
                        PatternTable::from(d).label_rate());
        } else if (*train) {
            TrainConfig tc = config_or_default(tr_config).experiment.train;
            if (tr_epochs) {
                tc.epochs = *tr_epochs;
            }
            if (tr_seed) {
                tc.seed = *tr_seed;
            }
            const Dataset tset = load_dataset(tr_train);
            const Dataset vset = load_dataset(tr_val);
            TrainResult r = train_fp(tset, vset, tc);
            save_checkpoint(tr_out, {r.params, "fp", tc.seed, r.best_val_accuracy});
            std::printf("best validation accuracy %.6f at epoch %d\n", r.best_val_accuracy, r.best_epoch);
        } else if (*retrain) {
            const RunConfig base = config_or_default(rt_config);
            RetrainConfig rc = base.experiment.retrain;
            rc.base = base.experiment.train;
            rc.io = base.experiment.crossbar.io();
            rc.p_drop = rt_mode == "hwa" ? rt_pdrop : 0.0;
            rc.noise_relative = rt_noise;
            rc.io_discretize = rt_discretize;
            rc.clip_scale = rt_clip;
            rc.epochs = rt_epochs;
            rc.seed = rt_seed;
            const Checkpoint in = load_checkpoint(rt_in);
            const Dataset tset = load_dataset(rt_train);
            const Dataset vset = load_dataset(rt_val);
            RetrainResult r;
            if (rt_mode == "ds") {
                if (rt_faults.empty()) {
                    throw ConfigError({"--mode ds needs --fault-map"});
                }
                rc.ds_mask = load_fault_map(rt_faults);
                r = retrain_ds(in.params, tset, vset, rc);
            } else {
                r = retrain_hwa(in.params, tset, vset, rc);
            }
            save_checkpoint(rt_out, {r.params, rt_mode, rt_seed, r.best_val_accuracy});
            std::printf("best validation accuracy %.6f at epoch %d\n", r.best_val_accuracy, r.best_epoch);
        } else if (*fmap) {
            Rng rng(fm_seed);
            FaultMap m = sample_fault_map({kChecks, fm_hidden, 2}, fm_rate, rng);
            save_fault_map(fm_out, m);
            std::printf("%zu of %zu pairs stuck\n", m.count(), m.size());
        } else if (*eval) {
            if (!ev_ckpt.empty()) {
                if (ev_test.empty()) {
                    throw ConfigError({"--ckpt needs --test"});
                }
                const RunConfig cfg = config_or_default(ev_config);
                const DecoderParams params = load_checkpoint(ev_ckpt).params;
                const PatternTable table = PatternTable::from(load_dataset(ev_test));
                if (ev_digital) {
                    std::printf("digital accuracy %.6f\n", accuracy(params, table));
                    return kOk;
                }
                CrossbarConfig cc = cfg.experiment.crossbar;
                if (ev_rate) {
                    cc.stuck_rate = *ev_rate;
                }
                std::optional<FaultMap> fixed;
                if (!ev_faults.empty()) {
                    fixed = load_fault_map(ev_faults);
                }
                std::vector<double> accs;
                for (int i = 0; i < ev_runs; i++) {
                    Rng rng(derive_seed(ev_seed, {stream::kInference, static_cast<std::uint64_t>(i)}));
                    FaultMap m = fixed ? *fixed : sample_fault_map(params.shape(), cc.stuck_rate, rng);
                    accs.push_back(AnalogDecoder(program_decoder(params, cc, &m, rng), cc).accuracy(table));
                }
                const AccuracyStats s = summarize(0.0, accs);
                std::printf("analog accuracy %.6f std %.6f over %d runs\n", s.mean, s.std, ev_runs);
            } else {
                const RunConfig cfg = config_or_default(ev_config);
                Experiment exp(cfg.experiment);
                if (ev_p.empty()) {
                    ev_p = {1e-2};
                }
                const double rate = ev_rate.value_or(cfg.experiment.crossbar.stuck_rate);
                emit_reports({exp.evaluate_scheme(scheme_arg(ev_scheme), rate, ev_p)}, cfg, ev_json, ev_csv);
            }
        } else if (*curve) {
            const RunConfig cfg = config_or_default(cv_config);
            Experiment exp(cfg.experiment);
            const double rate = cv_rate.value_or(cfg.experiment.crossbar.stuck_rate);
            std::vector<EvalReport> reports;
            for (const auto &s : cv_schemes) {
                reports.push_back(exp.lfr_curve(scheme_arg(s), rate));
            }
            emit_reports(reports, cfg, cv_json, cv_csv);
        } else if (*sweep) {
            const RunConfig cfg = config_or_default(sw_config);
            Experiment exp(cfg.experiment);
            const auto rows = exp.stuck_sweep(scheme_arg(sw_scheme), sw_rates, sw_pdrops);
            std::string csv = "scheme,stuck_rate,p_drop,accuracy_mean,accuracy_std\n";
            for (const auto &r : rows) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n", scheme_name(r.scheme), r.stuck_rate,
                              r.p_drop, r.stats.mean, r.stats.std);
                csv += buf;
                std::printf("%-8s stuck=%.3g p_drop=%.3g accuracy=%.6f std=%.6f\n", scheme_name(r.scheme),
                            r.stuck_rate, r.p_drop, r.stats.mean, r.stats.std);
            }
            if (!sw_csv.empty()) {
                write_file(sw_csv, csv);
            }
        } else if (*fitv) {
            const auto records = read_programming_csv(fv_csv);
            const VariabilityModel m = fit_variability_model(records, fv_degree);
            std::string fragment = "variability_coefficients = ";
            for (std::size_t i = 0; i < m.coefficients.size(); i++) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", m.coefficients[i]);
                fragment += buf;
            }
            fragment += "\n";
            std::printf("%s", fragment.c_str());
            for (double g : {60.0, 100.0, 150.0, 200.0}) {
                std::printf("  sigma(%g uS) = %.4f uS\n", g, m.sigma(g));
            }
            if (!fv_out.empty()) {
                write_file(fv_out, fragment);
            }
        } else if (*report) {
            const auto reports = reports_from_json(read_file(rp_in));
            emit_reports(reports, RunConfig{}, "", rp_csv);
        } else if (*pipe) {
            RunConfig cfg = config_or_default(pp_config);
            if (!pp_outdir.empty()) {
                cfg.output_dir = pp_outdir;
            }
            PipelineOptions opts;
            opts.resume = !pp_fresh;
            opts.log = &std::cerr;
            const auto reports = run_pipeline(cfg, opts);
            emit_reports(reports, cfg, "", "");
            std::printf("artifacts in %s\n", cfg.output_dir.c_str());
        }
    } catch (const ConfigError &e) {
        std::cerr << e.what() << "\n";
        return kConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericError &e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const DegenerateError &e) {
        std::cerr << "degenerate configuration: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kOk;
}
