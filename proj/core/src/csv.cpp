// Copyright 2026 The distest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "distest/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace distest {

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  if (header_written_) {
    throw std::logic_error("CsvWriter: metadata must precede the header");
  }
  buf_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (header_written_) {
    throw std::logic_error("CsvWriter: header already written");
  }
  columns_ = columns.size();
  header_written_ = true;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    buf_ << (i ? "," : "") << columns[i];
  }
  buf_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (!header_written_ || cells.size() != columns_) {
    throw std::logic_error("CsvWriter: row shape does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    buf_ << (i ? "," : "") << cells[i];
  }
  buf_ << "\n";
}

std::string CsvWriter::fmt(double value) {
  char out[40];
  std::snprintf(out, sizeof out, "%.17g", value);
  return out;
}

std::string CsvWriter::fmt(std::uint64_t value) {
  char out[24];
  std::snprintf(out, sizeof out, "%llu",
                static_cast<unsigned long long>(value));
  return out;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("CsvWriter: cannot open output file: " + path);
  }
  out << buf_.str();
}

}  // namespace distest
