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

#ifndef DISTEST_CSV_HPP_
#define DISTEST_CSV_HPP_

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace distest {

inline constexpr const char* kCsvSchemaVersion = "1";

// CSV emitter with a leading '#'-prefixed metadata block. Numeric
// formatting is fixed-width shortest round-trip ("%.17g"), so identical
// inputs produce byte-identical files on any platform.
class CsvWriter {
 public:
  void metadata(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string fmt(double value);
  static std::string fmt(std::uint64_t value);

  std::string str() const { return buf_.str(); }
  void write_file(const std::string& path) const;

 private:
  std::ostringstream buf_;
  std::size_t columns_ = 0;
  bool header_written_ = false;
};

}  // namespace distest

#endif  // DISTEST_CSV_HPP_
