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

#include "memdec/variability_fit.h"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "memdec/errors.h"

namespace memdec {

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        std::size_t start = cell.find_first_not_of(' ');
        cells.push_back(start == std::string::npos ? std::string() : cell.substr(start));
    }
    return cells;
}

double parse_number(const std::string &s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw CorruptFileError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

std::vector<ProgrammingRecord> read_programming_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw CorruptFileError("empty characterization file");
    }
    const auto header = split_csv_line(line);
    const char *names[] = {"target_conductance_uS", "programmed_conductance_uS", "device_id", "cycle_id"};
    int col[4];
    for (int i = 0; i < 4; i++) {
        col[i] = -1;
        for (std::size_t c = 0; c < header.size(); c++) {
            if (header[c] == names[i]) {
                col[i] = static_cast<int>(c);
            }
        }
        if (col[i] < 0) {
            throw CorruptFileError(std::string("missing column ") + names[i]);
        }
    }
    std::vector<ProgrammingRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_csv_line(line);
        for (int c : col) {
            if (static_cast<std::size_t>(c) >= cells.size()) {
                throw CorruptFileError("line " + std::to_string(line_no) + ": too few columns");
            }
        }
        ProgrammingRecord r;
        r.target = parse_number(cells[col[0]], line_no);
        r.programmed = parse_number(cells[col[1]], line_no);
        r.device_id = static_cast<long>(parse_number(cells[col[2]], line_no));
        r.cycle_id = static_cast<long>(parse_number(cells[col[3]], line_no));
        out.push_back(r);
    }
    return out;
}

std::vector<ProgrammingRecord> read_programming_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_programming_csv(in);
}

std::vector<SpreadPoint> spread_by_target(const std::vector<ProgrammingRecord> &records) {
    std::map<double, std::vector<double>> by_target;
    for (const auto &r : records) {
        by_target[r.target].push_back(r.programmed - r.target);
    }
    std::vector<SpreadPoint> out;
    for (const auto &[target, errs] : by_target) {
        if (errs.size() < 2) {
            continue;
        }
        double mean = 0.0;
        for (double e : errs) {
            mean += e;
        }
        mean /= static_cast<double>(errs.size());
        double ss = 0.0;
        for (double e : errs) {
            ss += (e - mean) * (e - mean);
        }
        out.push_back({target, std::sqrt(ss / static_cast<double>(errs.size() - 1)), errs.size()});
    }
    return out;
}

VariabilityModel fit_variability_model(const std::vector<ProgrammingRecord> &records, int degree) {
    if (degree < 0) {
        throw std::invalid_argument("polynomial degree must be >= 0");
    }
    const auto points = spread_by_target(records);
    if (points.size() <= static_cast<std::size_t>(degree)) {
        throw InsufficientDataError("need more than " + std::to_string(degree) +
                                    " conductance levels with repeated programming");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd vander(n, degree + 1);
    Eigen::VectorXd sigma(n);
    for (Eigen::Index i = 0; i < n; i++) {
        double pw = 1.0;
        for (int d = 0; d <= degree; d++) {
            vander(i, d) = pw;
            pw *= points[i].target;
        }
        sigma(i) = points[i].sigma;
    }
    const Eigen::VectorXd c = vander.colPivHouseholderQr().solve(sigma);
    VariabilityModel model;
    model.coefficients.assign(c.data(), c.data() + c.size());
    return model;
}

}  // namespace memdec
