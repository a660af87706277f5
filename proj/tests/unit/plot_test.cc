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

#include "qemlab/plot.h"

#include <gtest/gtest.h>

#include <string>

#include "qemlab/errors.h"

namespace qemlab {
namespace {

std::size_t count_of(const std::string &text, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        n++;
    }
    return n;
}

const std::string kMetrics = std::string(kMetricsHeader) +
                             "\nt,interp,unmitigated,1,0.30,0.28,0.32,30"
                             "\nt,interp,unmitigated,2,0.40,0.37,0.43,30"
                             "\nt,interp,rf,1,0.10,0.09,0.11,30"
                             "\nt,interp,rf,2,0.12,0.10,0.14,30\n";

const std::string kErrors = std::string(kErrorsHeader) +
                            "\nt,test,rf,2,c0,0.1\nt,test,rf,2,c1,0.2\nt,test,rf,2,c2,0.3"
                            "\nt,test,zne,2,c0,0.3\nt,test,zne,2,c1,0.5\nt,test,zne,2,c2,0.4\n";

TEST(Plot, MetricTableGivesOneLinePerMethodWithBands) {
    auto svg = render_plot(kMetrics, PlotKind::Line);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(count_of(svg, "<polyline"), 2u);
    EXPECT_EQ(count_of(svg, "fill-opacity"), 2u);
}

TEST(Plot, ByteIdenticalOnRerun) {
    EXPECT_EQ(render_plot(kMetrics, PlotKind::Line), render_plot(kMetrics, PlotKind::Line));
    EXPECT_EQ(render_plot(kErrors, PlotKind::Box), render_plot(kErrors, PlotKind::Box));
}

TEST(Plot, EmptyMetricTableIsAxesOnly) {
    auto svg = render_plot(std::string(kMetricsHeader) + "\n", PlotKind::Line);
    EXPECT_NE(svg.find("<line"), std::string::npos);
    EXPECT_EQ(count_of(svg, "<polyline"), 0u);
    EXPECT_EQ(count_of(svg, "<path"), 0u);
}

TEST(Plot, ErrorTableBoxAndLine) {
    auto box = render_plot(kErrors, PlotKind::Box);
    EXPECT_GE(count_of(box, "<rect"), 3u);
    auto line = render_plot(kErrors, PlotKind::Line);
    EXPECT_EQ(count_of(line, "<polyline"), 2u);
}

TEST(Plot, VqeTable) {
    std::string csv = std::string(kVqeHeader) + "\n0.5,-1.0,-0.9,-0.98,-0.99,0.01,1,1,1\n0.7,-1.1,-1.0,-1.08,-1.09,0.01,1,0,1\n";
    auto svg = render_plot(csv, PlotKind::Line);
    EXPECT_GE(count_of(svg, "<polyline"), 4u);
    EXPECT_THROW(render_plot(csv, PlotKind::Box), FormatError);
}

TEST(Plot, UnknownSchemaRejected) {
    EXPECT_THROW(render_plot("a,b,c\n1,2,3\n", PlotKind::Line), FormatError);
    EXPECT_THROW(render_plot("", PlotKind::Line), FormatError);
    EXPECT_THROW(render_plot(kMetrics, PlotKind::Box), FormatError);
}

TEST(Plot, MalformedRowRejected) {
    EXPECT_THROW(render_plot(std::string(kMetricsHeader) + "\nt,x,rf,1,0.1\n", PlotKind::Line), FormatError);
    EXPECT_THROW(render_plot(std::string(kMetricsHeader) + "\nt,x,rf,one,0.1,0,0,1\n", PlotKind::Line), FormatError);
}

TEST(Plot, KindNames) {
    EXPECT_EQ(parse_plot_kind("line"), PlotKind::Line);
    EXPECT_EQ(parse_plot_kind("box"), PlotKind::Box);
    EXPECT_THROW(parse_plot_kind("pie"), ConfigError);
}

}  // namespace
}  // namespace qemlab
