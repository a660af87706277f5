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

#ifndef QEMLAB_PLOT_H
#define QEMLAB_PLOT_H

#include <string>
#include <string_view>

namespace qemlab {

inline constexpr std::string_view kMetricsHeader = "tier,regime,method,bucket,mean_l2,ci_low,ci_high,n";
inline constexpr std::string_view kErrorsHeader = "tier,regime,method,bucket,circuit_id,l2";
inline constexpr std::string_view kVqeHeader =
    "bond,exact,unmitigated,zne,rf,abs_zne_rf,converged_unmitigated,converged_zne,converged_rf";

enum class PlotKind { Line, Box };

PlotKind parse_plot_kind(std::string_view name);

/// Renders a benchmark CSV as a standalone SVG. Recognized inputs: metric tables (line chart with
/// CI bands), per-circuit error tables (box chart, or per-bucket mean lines) and VQE tables
/// (energy lines). Throws FormatError for any other header. Output is a pure function of the
/// input text.
std::string render_plot(std::string_view csv_text, PlotKind kind);

}  // namespace qemlab

#endif
