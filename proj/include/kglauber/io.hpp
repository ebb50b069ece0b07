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

// File formats.
//
//   dense matrix   one row per line, comma separated
//   sparse matrix  "i j value" triplets, 0-indexed, whitespace separated;
//                  the symmetric entry is filled in on load. An optional
//                  "# n=N" line fixes the size.
//   vector         one value per line
//   spins          one of -1 / 1 per line
//   telemetry      one JSON object per file
//   tables         CSV with a "# schema_version=N" line then a header row
//
// Blank lines and lines starting with '#' are skipped by every reader.

#pragma once

#include "kglauber/model.hpp"
#include "kglauber/parallel.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kglauber::io {

inline constexpr int kSchemaVersion = 1;

enum class MatrixFormat { kAuto, kDense, kSparse };

/// kAuto picks dense when the first data line contains a comma.
Matrix read_matrix(std::istream& in, MatrixFormat format = MatrixFormat::kAuto,
                   std::size_t sparse_size = 0);
Matrix load_matrix(const std::string& path, MatrixFormat format = MatrixFormat::kAuto,
                   std::size_t sparse_size = 0);
void write_dense_matrix(std::ostream& out, const Matrix& J);
void write_sparse_matrix(std::ostream& out, const Matrix& J);

Vector read_vector(std::istream& in);
Vector load_vector(const std::string& path);
void write_vector(std::ostream& out, const Vector& v);

void write_spins(std::ostream& out, const SpinVector& x);
std::vector<Spin> read_spins(std::istream& in);

std::string telemetry_to_json(const RunTelemetry& tel);
RunTelemetry telemetry_from_json(const std::string& text);

/// Minimal CSV table: a header and string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ParseError when absent.
  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace kglauber::io
