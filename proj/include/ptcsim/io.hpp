// Copyright 2026 The ptcsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PTCSIM_IO_HPP
#define PTCSIM_IO_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "ptcsim/error.hpp"
#include "ptcsim/matrix.hpp"
#include "ptcsim/quantizer.hpp"
#include "ptcsim/scheduler.hpp"

namespace ptc
{

inline Matrix parse_csv_matrix(std::string_view text, const std::string &origin = "csv")
{
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') {
            continue;
        }
        std::size_t count = 0;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            const std::string tok = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
                throw SchemaError(origin + ":" + std::to_string(line_no) + ": not a number: '" + tok + "'");
            }
            data.push_back(v);
            ++count;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw ShapeError(origin + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols)
                             + " columns, found " + std::to_string(count));
        }
        ++rows;
    }
    if (rows == 0) {
        throw ShapeError(origin + ": no data rows");
    }
    return Matrix(rows, cols, std::move(data));
}

inline Matrix load_csv_matrix(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("matrix file not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_matrix(buf.str(), path.string());
}

inline std::string to_csv(const Matrix &m)
{
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            os << (j ? "," : "") << m(i, j);
        }
        os << "\n";
    }
    return os.str();
}

struct RandomWorkloadSpec
{
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t q = 0;
    std::uint64_t seed = 0;
};

// "rand:MxNxQ:seedS" with entries uniform in [-1, 1].
inline RandomWorkloadSpec parse_workload_spec(const std::string &spec)
{
    static const std::regex re(R"(rand:(\d+)x(\d+)x(\d+)(?::seed(\d+))?)");
    std::smatch mt;
    if (!std::regex_match(spec, mt, re)) {
        throw SchemaError("bad workload spec '" + spec + "' (expected rand:MxNxQ:seedS)");
    }
    RandomWorkloadSpec w{std::stoull(mt[1]), std::stoull(mt[2]), std::stoull(mt[3]),
                         mt[4].matched ? std::stoull(mt[4]) : 0};
    if (w.m == 0 || w.n == 0 || w.q == 0) {
        throw SchemaError("workload dimensions must be positive: '" + spec + "'");
    }
    return w;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream)
{
    auto rng = make_stream(seed, stream);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(rows, cols);
    for (double &v : a.flat()) {
        v = u(rng);
    }
    return a;
}

inline GemmWorkload make_workload(const RandomWorkloadSpec &s)
{
    return {random_matrix(s.m, s.n, s.seed, 10), random_matrix(s.n, s.q, s.seed, 11)};
}

inline void write_text(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

} // namespace ptc

#endif
