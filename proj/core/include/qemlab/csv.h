// Copyright 2026 The qemlab Authors
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

#ifndef QEMLAB_CSV_H
#define QEMLAB_CSV_H

#include <string>
#include <string_view>
#include <vector>

namespace qemlab {

/// Shortest representation that parses back to the same double.
void append_double(std::string &out, double x);
std::string format_double(double x);

/// Splits on commas; no quoting.
std::vector<std::string_view> split_csv_fields(std::string_view line);
/// Splits text into lines, dropping a trailing '\r' and the empty tail after a final newline.
std::vector<std::string_view> split_lines(std::string_view text);

/// Whole-field parse; throws std::invalid_argument otherwise.
double parse_double(std::string_view field);

}  // namespace qemlab

#endif
