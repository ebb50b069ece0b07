// Copyright 2026 The kglauber Authors
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

#include "kglauber/io.hpp"

#include "kglauber/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace kglauber::io {

namespace {

bool skip_line(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, std::size_t line_no) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" + t + "'");
  return v;
}

long long parse_int(const std::string& token, std::size_t line_no) {
  const std::string t = trim(token);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse integer '" + t + "'");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

Matrix read_dense(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("line " + std::to_string(line_no) + ": ragged dense matrix row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("dense matrix: no data");
  if (rows.size() != rows.front().size())
    throw ParseError("dense matrix is " + std::to_string(rows.size()) + "x" +
                     std::to_string(rows.front().size()) + ", expected square");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix J(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) J(i, j) = rows[i][j];
  return J;
}

// Sparse triplets land in a dense matrix; the sampler works on dense blocks.
// A "# n=<size>" comment (as written by write_sparse_matrix) fixes the size
// when the caller does not.
Matrix read_sparse(std::istream& in, std::size_t size) {
  std::vector<std::tuple<long long, long long, double>> entries;
  long long max_index = -1;
  long long declared = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const std::string t = trim(line); t.rfind("# n=", 0) == 0) {
      declared = parse_int(t.substr(4), line_no);
      continue;
    }
    if (skip_line(line)) continue;
    std::stringstream ss(line);
    std::string a, b, v, extra;
    if (!(ss >> a >> b >> v) || (ss >> extra))
      throw ParseError("line " + std::to_string(line_no) + ": expected 'i j value'");
    const long long i = parse_int(a, line_no), j = parse_int(b, line_no);
    if (i < 0 || j < 0) throw ParseError("line " + std::to_string(line_no) + ": negative index");
    entries.emplace_back(i, j, parse_double(v, line_no));
    max_index = std::max({max_index, i, j});
  }
  const auto n = size != 0 ? static_cast<long long>(size) : declared > 0 ? declared : max_index + 1;
  if (n <= 0) throw ParseError("sparse matrix: no data and no size given");
  if (max_index >= n) throw ParseError("sparse matrix: index outside the given size");
  Matrix J = Matrix::Zero(n, n);
  for (const auto& [i, j, v] : entries) {
    J(i, j) = v;
    J(j, i) = v;
  }
  return J;
}

}  // namespace

Matrix read_matrix(std::istream& in, MatrixFormat format, std::size_t sparse_size) {
  if (format == MatrixFormat::kAuto) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::stringstream probe(text);
    std::string line;
    format = MatrixFormat::kDense;
    while (std::getline(probe, line)) {
      if (skip_line(line)) continue;
      if (line.find(',') == std::string::npos) format = MatrixFormat::kSparse;
      break;
    }
    std::stringstream again(text);
    return format == MatrixFormat::kDense ? read_dense(again) : read_sparse(again, sparse_size);
  }
  return format == MatrixFormat::kDense ? read_dense(in) : read_sparse(in, sparse_size);
}

Matrix load_matrix(const std::string& path, MatrixFormat format, std::size_t sparse_size) {
  auto in = open_in(path);
  return read_matrix(in, format, sparse_size);
}

void write_dense_matrix(std::ostream& out, const Matrix& J) {
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    for (Eigen::Index j = 0; j < J.cols(); ++j) {
      if (j) out << ',';
      out << format_double(J(i, j));
    }
    out << '\n';
  }
}

void write_sparse_matrix(std::ostream& out, const Matrix& J) {
  out << "# n=" << J.rows() << '\n';
  for (Eigen::Index i = 0; i < J.rows(); ++i)
    for (Eigen::Index j = i; j < J.cols(); ++j)
      if (J(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(J(i, j)) << '\n';
}

Vector read_vector(std::istream& in) {
  std::vector<double> vals;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!skip_line(line)) vals.push_back(parse_double(line, line_no));
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Vector load_vector(const std::string& path) {
  auto in = open_in(path);
  return read_vector(in);
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
}

void write_spins(std::ostream& out, const SpinVector& x) {
  for (const Spin s : x.values()) out << static_cast<int>(s) << '\n';
}

std::vector<Spin> read_spins(std::istream& in) {
  std::vector<Spin> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const long long v = parse_int(line, line_no);
    if (v != 1 && v != -1)
      throw ParseError("line " + std::to_string(line_no) + ": spin must be 1 or -1");
    out.push_back(static_cast<Spin>(v));
  }
  return out;
}

std::string telemetry_to_json(const RunTelemetry& tel) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["node_count"] = tel.node_count;
  j["max_depth_seen"] = tel.max_depth_seen;
  j["leaf_count"] = tel.leaf_count;
  j["total_rejection_tries"] = tel.total_rejection_tries;
  j["wall_time_s"] = tel.wall_time_s;
  j["seed"] = tel.seed;
  j["root_outer_steps"] = tel.root_outer_steps;
  j["root_subset_size"] = tel.root_subset_size;
  j["nonroot_children"] = tel.nonroot_children;
  j["nonroot_nodes"] = tel.nonroot_nodes;
  j["level_frobenius_sum"] = tel.level_frobenius_sum;
  j["level_nodes"] = tel.level_nodes;
  return j.dump(2) + "\n";
}

RunTelemetry telemetry_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("telemetry JSON: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ParseError("telemetry JSON: unsupported schema_version " + std::to_string(version));
    RunTelemetry t;
    t.node_count = j.at("node_count").get<std::uint64_t>();
    t.max_depth_seen = j.at("max_depth_seen").get<std::uint64_t>();
    t.leaf_count = j.at("leaf_count").get<std::uint64_t>();
    t.total_rejection_tries = j.at("total_rejection_tries").get<std::uint64_t>();
    t.wall_time_s = j.at("wall_time_s").get<double>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.root_outer_steps = j.value("root_outer_steps", std::uint64_t{0});
    t.root_subset_size = j.value("root_subset_size", std::uint64_t{0});
    t.nonroot_children = j.value("nonroot_children", std::uint64_t{0});
    t.nonroot_nodes = j.value("nonroot_nodes", std::uint64_t{0});
    t.level_frobenius_sum = j.value("level_frobenius_sum", std::vector<double>{});
    t.level_nodes = j.value("level_nodes", std::vector<std::uint64_t>{});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("telemetry JSON: ") + e.what());
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("CSV: no column named '" + name + "'");
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\"\n") != std::string::npos)
        throw InvalidArgument("CSV cell may not contain commas, quotes or newlines");
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  out << "# schema_version=" << kSchemaVersion << '\n';
  line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw InvalidArgument("CSV row width differs from header");
    line(r);
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError("CSV line " + std::to_string(line_no) + ": row width differs from header");
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ParseError("CSV: no header row");
  return t;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvalidArgument("format_double: conversion failed");
  return std::string(buf, ptr);
}

}  // namespace kglauber::io
