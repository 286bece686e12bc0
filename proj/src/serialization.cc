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

#include "memdec/serialization.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "memdec/errors.h"

namespace memdec {

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

class Writer {
   public:
    explicit Writer(const char (&magic)[5]) {
        buf_.append(magic, 4);
        u32(kFormatVersion);
    }
    template <class T>
    void put(T v) {
        char raw[sizeof(T)];
        std::memcpy(raw, &v, sizeof(T));
        buf_.append(raw, sizeof(T));
    }
    void u8(std::uint8_t v) {
        put(v);
    }
    void u16(std::uint16_t v) {
        put(v);
    }
    void u32(std::uint32_t v) {
        put(v);
    }
    void u64(std::uint64_t v) {
        put(v);
    }
    void f64(double v) {
        put(v);
    }
    void str(const std::string &s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_ += s;
    }
    void matrix(const Matrix &m) {
        u32(static_cast<std::uint32_t>(m.rows));
        u32(static_cast<std::uint32_t>(m.cols));
        for (double v : m.data) {
            f64(v);
        }
    }
    void mask(const Mask &m) {
        u32(static_cast<std::uint32_t>(m.rows));
        u32(static_cast<std::uint32_t>(m.cols));
        std::vector<std::uint8_t> packed((m.bits.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < m.bits.size(); i++) {
            if (m.bits[i]) {
                packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
            }
        }
        buf_.append(reinterpret_cast<const char *>(packed.data()), packed.size());
    }
    std::string take() {
        return std::move(buf_);
    }

   private:
    std::string buf_;
};

class Reader {
   public:
    Reader(const std::string &bytes, const char (&magic)[5], const char *what) : bytes_(bytes), what_(what) {
        if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
            throw CorruptFileError(std::string(what) + ": bad magic");
        }
        pos_ = 4;
        const std::uint32_t version = u32();
        if (version > kFormatVersion) {
            throw VersionMismatchError(std::string(what) + ": format version " + std::to_string(version) +
                                       " is newer than supported version " + std::to_string(kFormatVersion) +
                                       "; upgrade memdec");
        }
        if (version == 0) {
            throw CorruptFileError(std::string(what) + ": invalid format version 0");
        }
    }
    template <class T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::uint8_t u8() {
        return get<std::uint8_t>();
    }
    std::uint16_t u16() {
        return get<std::uint16_t>();
    }
    std::uint32_t u32() {
        return get<std::uint32_t>();
    }
    std::uint64_t u64() {
        return get<std::uint64_t>();
    }
    double f64() {
        return get<double>();
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::pair<int, int> dims(std::size_t elem_bytes_num, std::size_t elem_bytes_den) {
        const std::uint32_t r = u32();
        const std::uint32_t c = u32();
        if (r > (1u << 20) || c > (1u << 20)) {
            fail("implausible matrix shape");
        }
        need((static_cast<std::size_t>(r) * c * elem_bytes_num + elem_bytes_den - 1) / elem_bytes_den);
        return {static_cast<int>(r), static_cast<int>(c)};
    }
    Matrix matrix() {
        const auto [r, c] = dims(8, 1);
        Matrix m(r, c);
        for (double &v : m.data) {
            v = f64();
        }
        return m;
    }
    Mask mask() {
        const auto [r, c] = dims(1, 8);
        Mask m(r, c);
        const std::size_t n = m.bits.size();
        for (std::size_t byte = 0; byte < (n + 7) / 8; byte++) {
            const std::uint8_t b = u8();
            for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < n; bit++) {
                m.bits[byte * 8 + bit] = (b >> bit) & 1;
            }
        }
        return m;
    }
    void finish() const {
        if (pos_ != bytes_.size()) {
            fail("trailing bytes");
        }
    }
    [[noreturn]] void fail(const std::string &msg) const {
        throw CorruptFileError(std::string(what_) + ": " + msg);
    }

   private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            fail("truncated");
        }
    }
    const std::string &bytes_;
    const char *what_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + path);
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + path);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("cannot write " + path + ": " + ec.message());
    }
}

// ---- dataset ----

std::string encode_dataset(const Dataset &data) {
    data.validate();
    Writer w("MDDS");
    w.u32(static_cast<std::uint32_t>(data.rounds));
    w.u64(data.seed);
    w.u8(static_cast<std::uint8_t>(data.split));
    w.u32(static_cast<std::uint32_t>(data.p_values.size()));
    for (double p : data.p_values) {
        w.f64(p);
    }
    w.u64(data.samples.size());
    for (const auto &s : data.samples) {
        w.u64(s.events);
        w.u8(s.label);
        w.u16(s.p_index);
    }
    return w.take();
}

Dataset decode_dataset(const std::string &bytes) {
    Reader r(bytes, "MDDS", "dataset");
    Dataset d;
    d.rounds = static_cast<int>(r.u32());
    d.seed = r.u64();
    const std::uint8_t split = r.u8();
    if (split > 2) {
        r.fail("bad split tag");
    }
    d.split = static_cast<Split>(split);
    const std::uint32_t np = r.u32();
    if (np > (1u << 16)) {
        r.fail("implausible p count");
    }
    for (std::uint32_t i = 0; i < np; i++) {
        d.p_values.push_back(r.f64());
    }
    const std::uint64_t n = r.u64();
    if (n > (bytes.size() / 11)) {
        r.fail("truncated");
    }
    d.samples.resize(n);
    for (auto &s : d.samples) {
        s.events = r.u64();
        s.label = r.u8();
        s.p_index = r.u16();
    }
    r.finish();
    try {
        d.validate();
    } catch (const std::invalid_argument &e) {
        r.fail(e.what());
    }
    return d;
}

void save_dataset(const std::string &path, const Dataset &data) {
    write_file(path, encode_dataset(data));
}

Dataset load_dataset(const std::string &path) {
    return decode_dataset(read_file(path));
}

void write_dataset_csv(const std::string &path, const Dataset &data) {
    std::string out = "p,label";
    const int rows = data.event_rows();
    for (int t = 0; t < rows; t++) {
        for (int k = 0; k < kChecks; k++) {
            out += ",d" + std::to_string(t) + "_" + std::to_string(k);
        }
    }
    out += "\n";
    char buf[32];
    for (const auto &s : data.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", data.p_values.at(s.p_index));
        out += buf;
        out += s.label ? ",1" : ",0";
        for (int t = 0; t < rows; t++) {
            for (int k = 0; k < kChecks; k++) {
                out += s.event(t, k) ? ",1" : ",0";
            }
        }
        out += "\n";
    }
    write_file(path, out);
}

// ---- checkpoint ----

std::string encode_checkpoint(const Checkpoint &ckpt) {
    ckpt.params.validate();
    Writer w("MDCK");
    w.str(ckpt.kind);
    w.u64(ckpt.seed);
    w.f64(ckpt.val_accuracy);
    w.matrix(ckpt.params.recurrent);
    w.matrix(ckpt.params.evaluation);
    return w.take();
}

Checkpoint decode_checkpoint(const std::string &bytes) {
    Reader r(bytes, "MDCK", "checkpoint");
    Checkpoint c;
    c.kind = r.str();
    c.seed = r.u64();
    c.val_accuracy = r.f64();
    c.params.recurrent = r.matrix();
    c.params.evaluation = r.matrix();
    r.finish();
    try {
        c.params.validate();
    } catch (const std::invalid_argument &e) {
        r.fail(e.what());
    }
    return c;
}

void save_checkpoint(const std::string &path, const Checkpoint &ckpt) {
    write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string &path) {
    return decode_checkpoint(read_file(path));
}

// ---- fault map ----

std::string encode_fault_map(const FaultMap &map) {
    Writer w("MDFM");
    w.u32(DecoderParams::kLayers);
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        w.mask(map.layer(l));
    }
    return w.take();
}

FaultMap decode_fault_map(const std::string &bytes) {
    Reader r(bytes, "MDFM", "fault map");
    if (r.u32() != DecoderParams::kLayers) {
        r.fail("unexpected unit count");
    }
    FaultMap m;
    for (int l = 0; l < DecoderParams::kLayers; l++) {
        m.layer(l) = r.mask();
    }
    r.finish();
    return m;
}

void save_fault_map(const std::string &path, const FaultMap &map) {
    write_file(path, encode_fault_map(map));
}

FaultMap load_fault_map(const std::string &path) {
    return decode_fault_map(read_file(path));
}

// ---- programmed units ----

std::string encode_programmed(const ProgrammedDecoder &units) {
    Writer w("MDPU");
    for (const ProgrammedUnit *u : {&units.recurrent, &units.evaluation}) {
        w.f64(u->scale);
        w.matrix(u->g_plus);
        w.matrix(u->g_minus);
    }
    return w.take();
}

ProgrammedDecoder decode_programmed(const std::string &bytes) {
    Reader r(bytes, "MDPU", "programmed units");
    ProgrammedDecoder d;
    for (ProgrammedUnit *u : {&d.recurrent, &d.evaluation}) {
        u->scale = r.f64();
        u->g_plus = r.matrix();
        u->g_minus = r.matrix();
        if (!u->g_plus.same_shape(u->g_minus)) {
            r.fail("G+ and G- shapes differ");
        }
    }
    r.finish();
    return d;
}

void save_programmed(const std::string &path, const ProgrammedDecoder &units) {
    write_file(path, encode_programmed(units));
}

ProgrammedDecoder load_programmed(const std::string &path) {
    return decode_programmed(read_file(path));
}

// ---- reports ----

std::string reports_to_json(const std::vector<EvalReport> &reports, const std::string &config_text) {
    nlohmann::json root;
    root["format_version"] = kFormatVersion;
    root["config"] = config_text;
    root["reports"] = nlohmann::json::array();
    for (const auto &rep : reports) {
        nlohmann::json j;
        j["scheme"] = scheme_name(rep.scheme);
        j["stuck_rate"] = rep.stuck_rate;
        j["p_drop"] = rep.p_drop;
        j["points"] = nlohmann::json::array();
        for (const auto &s : rep.per_p) {
            j["points"].push_back({{"p", s.p},
                                   {"accuracy_mean", s.mean},
                                   {"accuracy_std", s.std},
                                   {"lfr_mean", 1.0 - s.mean},
                                   {"runs", s.runs}});
        }
        if (rep.fit) {
            j["fit"] = {{"a", rep.fit->a},
                        {"b", rep.fit->b},
                        {"residual", rep.fit->residual},
                        {"used", rep.fit->used},
                        {"excluded", rep.fit->excluded}};
        } else {
            j["fit"] = nullptr;
        }
        if (rep.pseudo) {
            j["pseudo_threshold"] = {{"value", rep.pseudo->value}, {"in_range", rep.pseudo->in_range}};
        } else {
            j["pseudo_threshold"] = nullptr;
        }
        root["reports"].push_back(std::move(j));
    }
    return root.dump(2) + "\n";
}

std::vector<EvalReport> reports_from_json(const std::string &text) {
    std::vector<EvalReport> out;
    try {
        const auto root = nlohmann::json::parse(text);
        if (root.at("format_version").get<std::uint32_t>() > kFormatVersion) {
            throw VersionMismatchError("report format is newer than supported; upgrade memdec");
        }
        for (const auto &j : root.at("reports")) {
            EvalReport rep;
            const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
            if (!scheme) {
                throw CorruptFileError("report: unknown scheme");
            }
            rep.scheme = *scheme;
            rep.stuck_rate = j.at("stuck_rate").get<double>();
            rep.p_drop = j.at("p_drop").get<double>();
            for (const auto &pt : j.at("points")) {
                AccuracyStats s;
                s.p = pt.at("p").get<double>();
                s.mean = pt.at("accuracy_mean").get<double>();
                s.std = pt.at("accuracy_std").get<double>();
                s.runs = pt.at("runs").get<std::vector<double>>();
                rep.per_p.push_back(std::move(s));
            }
            if (!j.at("fit").is_null()) {
                const auto &f = j.at("fit");
                rep.fit = CurveFit{f.at("a").get<double>(), f.at("b").get<double>(), f.at("residual").get<double>(),
                                   f.at("used").get<int>(), f.at("excluded").get<int>()};
            }
            if (!j.at("pseudo_threshold").is_null()) {
                const auto &t = j.at("pseudo_threshold");
                rep.pseudo = PseudoThreshold{t.at("value").get<double>(), t.at("in_range").get<bool>()};
            }
            out.push_back(std::move(rep));
        }
    } catch (const nlohmann::json::exception &e) {
        throw CorruptFileError(std::string("report: ") + e.what());
    }
    return out;
}

std::string reports_to_csv(const std::vector<EvalReport> &reports) {
    std::string out = "scheme,stuck_rate,p_drop,p,accuracy_mean,accuracy_std,lfr_mean,lfr_std\n";
    char buf[256];
    for (const auto &rep : reports) {
        for (const auto &s : rep.per_p) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", scheme_name(rep.scheme),
                          rep.stuck_rate, rep.p_drop, s.p, s.mean, s.std, 1.0 - s.mean, s.std);
            out += buf;
        }
    }
    return out;
}

}  // namespace memdec
