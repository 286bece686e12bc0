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

#include "memdec/config.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "memdec/errors.h"

namespace memdec {

namespace {

std::string join_problems(const std::vector<std::string> &problems) {
    std::string out = "invalid configuration";
    for (const auto &p : problems) {
        out += "\n  " + p;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string fmt_real(double v) {
    // Shortest text that parses back to the same double.
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

bool parse_real(const std::string &s, double &out) {
    if (s.empty()) {
        return false;
    }
    errno = 0;
    char *end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno == 0 && std::isfinite(out);
}

bool parse_u64(const std::string &s, std::uint64_t &out) {
    if (s.empty() || s[0] == '-' || s[0] == '+') {
        return false;
    }
    errno = 0;
    char *end = nullptr;
    out = std::strtoull(s.c_str(), &end, 10);
    return end == s.c_str() + s.size() && errno == 0;
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    if (trim(s).empty()) {
        return out;
    }
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

struct Range {
    double lo = -kInf;
    double hi = kInf;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const {
        return (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    }
    std::string describe() const {
        std::string s = lo_open ? "(" : "[";
        s += lo == -kInf ? "-inf" : fmt_real(lo);
        s += ", ";
        s += hi == kInf ? "inf" : fmt_real(hi);
        s += hi_open || hi == kInf ? ")" : "]";
        return s;
    }
};

const Range kPositive{0.0, kInf, true, false};
const Range kNonNegative{0.0, kInf, false, false};
const Range kProbability{0.0, 1.0, false, false};
const Range kBeta{0.0, 1.0, false, true};

// Returns an empty string on success, otherwise the problem.
using Setter = std::function<std::string(RunConfig &, const std::string &)>;
using Getter = std::function<std::string(const RunConfig &)>;

struct Field {
    std::string name;
    Setter set;
    Getter get;
};

template <class T>
using Ref = std::function<T &(RunConfig &)>;

template <class T>
T &read(const Ref<T> &ref, const RunConfig &c) {
    return ref(const_cast<RunConfig &>(c));
}

Field real_field(std::string name, Ref<double> ref, Range range) {
    return {name,
            [ref, range](RunConfig &c, const std::string &v) -> std::string {
                double x;
                if (!parse_real(v, x)) {
                    return "expected a number, got '" + v + "'";
                }
                if (!range.contains(x)) {
                    return "value " + v + " outside " + range.describe();
                }
                ref(c) = x;
                return {};
            },
            [ref](const RunConfig &c) { return fmt_real(read(ref, c)); }};
}

template <class Int>
Field int_field(std::string name, Ref<Int> ref, std::uint64_t lo, std::uint64_t hi) {
    return {name,
            [ref, lo, hi](RunConfig &c, const std::string &v) -> std::string {
                std::uint64_t x;
                if (!parse_u64(v, x)) {
                    return "expected a non-negative integer, got '" + v + "'";
                }
                if (x < lo || x > hi) {
                    return "value " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
                }
                ref(c) = static_cast<Int>(x);
                return {};
            },
            [ref](const RunConfig &c) { return std::to_string(read(ref, c)); }};
}

Field bool_field(std::string name, Ref<bool> ref) {
    return {name,
            [ref](RunConfig &c, const std::string &v) -> std::string {
                if (v == "true") {
                    ref(c) = true;
                } else if (v == "false") {
                    ref(c) = false;
                } else {
                    return "expected true or false, got '" + v + "'";
                }
                return {};
            },
            [ref](const RunConfig &c) { return std::string(read(ref, c) ? "true" : "false"); }};
}

Field list_field(std::string name, Ref<std::vector<double>> ref, Range range, bool allow_empty) {
    return {name,
            [ref, range, allow_empty](RunConfig &c, const std::string &v) -> std::string {
                std::vector<double> xs;
                for (const auto &item : split_list(v)) {
                    double x;
                    if (!parse_real(item, x)) {
                        return "expected a comma-separated list of numbers, got '" + item + "'";
                    }
                    if (!range.contains(x)) {
                        return "entry " + item + " outside " + range.describe();
                    }
                    xs.push_back(x);
                }
                if (xs.empty() && !allow_empty) {
                    return "list must not be empty";
                }
                ref(c) = std::move(xs);
                return {};
            },
            [ref](const RunConfig &c) {
                std::string out;
                for (double x : read(ref, c)) {
                    out += (out.empty() ? "" : ",") + fmt_real(x);
                }
                return out;
            }};
}

Field optional_field(std::string name, Ref<std::optional<double>> ref, Range range, std::string none_word) {
    return {name,
            [ref, range, none_word](RunConfig &c, const std::string &v) -> std::string {
                if (v == none_word) {
                    ref(c).reset();
                    return {};
                }
                double x;
                if (!parse_real(v, x)) {
                    return "expected a number or '" + none_word + "', got '" + v + "'";
                }
                if (!range.contains(x)) {
                    return "value " + v + " outside " + range.describe();
                }
                ref(c) = x;
                return {};
            },
            [ref, none_word](const RunConfig &c) {
                const auto &o = read(ref, c);
                return o ? fmt_real(*o) : none_word;
            }};
}

const std::vector<Field> &fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(int_field<std::uint64_t>(
            "master_seed", [](RunConfig &c) -> std::uint64_t & { return c.experiment.master_seed; }, 0,
            std::numeric_limits<std::uint64_t>::max()));
        f.push_back({"output_dir",
                     [](RunConfig &c, const std::string &v) -> std::string {
                         if (v.empty()) {
                             return "output_dir must not be empty";
                         }
                         c.output_dir = v;
                         return {};
                     },
                     [](const RunConfig &c) { return c.output_dir; }});
        f.push_back({"schemes",
                     [](RunConfig &c, const std::string &v) -> std::string {
                         std::vector<Scheme> out;
                         for (const auto &item : split_list(v)) {
                             auto s = parse_scheme(item);
                             if (!s) {
                                 return "unknown scheme '" + item + "'";
                             }
                             out.push_back(*s);
                         }
                         if (out.empty()) {
                             return "list must not be empty";
                         }
                         c.schemes = std::move(out);
                         return {};
                     },
                     [](const RunConfig &c) {
                         std::string out;
                         for (Scheme s : c.schemes) {
                             out += (out.empty() ? "" : ",") + std::string(scheme_name(s));
                         }
                         return out;
                     }});
        // data
        f.push_back(int_field<int>(
            "rounds", [](RunConfig &c) -> int & { return c.experiment.data.rounds; }, 1, kMaxEventRows - 1));
        f.push_back(list_field(
            "train_p_values", [](RunConfig &c) -> std::vector<double> & { return c.experiment.data.train_p_values; },
            kProbability, false));
        f.push_back(int_field<std::size_t>(
            "train_shots_per_p", [](RunConfig &c) -> std::size_t & { return c.experiment.data.train_shots_per_p; },
            1, std::numeric_limits<std::uint32_t>::max()));
        f.push_back(int_field<std::size_t>(
            "val_shots_per_p", [](RunConfig &c) -> std::size_t & { return c.experiment.data.val_shots_per_p; }, 1,
            std::numeric_limits<std::uint32_t>::max()));
        // training
        f.push_back(int_field<int>(
            "hidden", [](RunConfig &c) -> int & { return c.experiment.train.hidden; }, 1, 4096));
        f.push_back(real_field(
            "learning_rate", [](RunConfig &c) -> double & { return c.experiment.train.learning_rate; }, kPositive));
        f.push_back(int_field<int>(
            "batch_size", [](RunConfig &c) -> int & { return c.experiment.train.batch_size; }, 1, 1 << 24));
        f.push_back(int_field<int>(
            "epochs", [](RunConfig &c) -> int & { return c.experiment.train.epochs; }, 1, 1 << 20));
        f.push_back(real_field(
            "adam_beta1", [](RunConfig &c) -> double & { return c.experiment.train.adam_beta1; }, kBeta));
        f.push_back(real_field(
            "adam_beta2", [](RunConfig &c) -> double & { return c.experiment.train.adam_beta2; }, kBeta));
        f.push_back(real_field(
            "adam_eps", [](RunConfig &c) -> double & { return c.experiment.train.adam_eps; }, kPositive));
        // retraining
        f.push_back(int_field<int>(
            "retrain_epochs", [](RunConfig &c) -> int & { return c.experiment.retrain.epochs; }, 1, 1 << 20));
        f.push_back(optional_field(
            "p_drop", [](RunConfig &c) -> std::optional<double> & { return c.experiment.hwa_p_drop; },
            Range{0.0, 1.0, false, true}, "auto"));
        f.push_back(real_field(
            "noise_relative", [](RunConfig &c) -> double & { return c.experiment.retrain.noise_relative; },
            kNonNegative));
        f.push_back(bool_field(
            "io_discretize", [](RunConfig &c) -> bool & { return c.experiment.retrain.io_discretize; }));
        f.push_back(optional_field(
            "clip_scale", [](RunConfig &c) -> std::optional<double> & { return c.experiment.retrain.clip_scale; },
            kPositive, "none"));
        f.push_back(int_field<int>(
            "val_draws", [](RunConfig &c) -> int & { return c.experiment.retrain.val_draws; }, 1, 1 << 16));
        // crossbar
        f.push_back(real_field(
            "g_hcs", [](RunConfig &c) -> double & { return c.experiment.crossbar.g_hcs; }, kPositive));
        f.push_back(real_field(
            "g_lcs", [](RunConfig &c) -> double & { return c.experiment.crossbar.g_lcs; }, kPositive));
        f.push_back(real_field(
            "variability_relative",
            [](RunConfig &c) -> double & { return c.experiment.crossbar.variability.fallback_relative; },
            kNonNegative));
        f.push_back(list_field(
            "variability_coefficients",
            [](RunConfig &c) -> std::vector<double> & { return c.experiment.crossbar.variability.coefficients; },
            Range{}, true));
        f.push_back(real_field(
            "stuck_rate", [](RunConfig &c) -> double & { return c.experiment.crossbar.stuck_rate; }, kProbability));
        f.push_back(real_field(
            "adc_bound", [](RunConfig &c) -> double & { return c.experiment.crossbar.adc_bound; }, kPositive));
        f.push_back(real_field(
            "dac_bound", [](RunConfig &c) -> double & { return c.experiment.crossbar.dac_bound; }, kPositive));
        f.push_back(int_field<int>(
            "levels", [](RunConfig &c) -> int & { return c.experiment.crossbar.levels; }, 2, 1 << 24));
        f.push_back(bool_field(
            "quantize_io", [](RunConfig &c) -> bool & { return c.experiment.crossbar.quantize_io; }));
        // protocol
        f.push_back(int_field<int>(
            "n_train_runs", [](RunConfig &c) -> int & { return c.experiment.protocol.n_train_runs; }, 1, 1 << 16));
        f.push_back(int_field<int>(
            "n_infer_runs", [](RunConfig &c) -> int & { return c.experiment.protocol.n_infer_runs; }, 1, 1 << 20));
        f.push_back(int_field<std::size_t>(
            "test_shots", [](RunConfig &c) -> std::size_t & { return c.experiment.protocol.test_shots; }, 1,
            std::numeric_limits<std::uint32_t>::max()));
        f.push_back(list_field(
            "eval_p_values", [](RunConfig &c) -> std::vector<double> & { return c.experiment.protocol.p_values; },
            kProbability, false));
        return f;
    }();
    return table;
}

}  // namespace

const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &f : fields()) {
            k.push_back(f.name);
        }
        return k;
    }();
    return keys;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, const Field *> by_name;
    for (const auto &f : fields()) {
        by_name[f.name] = &f;
    }
    RunConfig config;
    std::vector<std::string> problems;
    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            problems.push_back(where + "unknown key '" + name + "'");
            continue;
        }
        if (auto prev = seen.find(name); prev != seen.end()) {
            problems.push_back(where + "duplicate key '" + name + "' (first set on line " +
                               std::to_string(prev->second) + ")");
            continue;
        }
        seen[name] = line_no;
        std::string err = it->second->set(config, value);
        if (!err.empty()) {
            problems.push_back(where + name + ": " + err);
        }
    }
    const auto &cb = config.experiment.crossbar;
    if (!(cb.g_hcs > cb.g_lcs)) {
        const int line = seen.count("g_lcs") ? seen["g_lcs"] : (seen.count("g_hcs") ? seen["g_hcs"] : 0);
        problems.push_back((line ? "line " + std::to_string(line) + ": " : std::string()) +
                           "g_hcs must exceed g_lcs");
    }
    if (!problems.empty()) {
        throw ConfigError(std::move(problems));
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({"cannot read config file " + path});
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig &config) {
    std::string out;
    for (const auto &f : fields()) {
        out += f.name + " = " + f.get(config) + "\n";
    }
    return out;
}

}  // namespace memdec
