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

#ifndef QEMLAB_METRICS_H
#define QEMLAB_METRICS_H

#include <cstdint>
#include <span>

namespace qemlab {

/// Euclidean distance between an estimate vector and the ideal one.
double l2_error(std::span<const double> estimate, std::span<const double> ideal);

double mean_of(std::span<const double> values);

struct ConfidenceInterval {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Percentile bootstrap interval of the mean. The interval is widened to contain the sample
/// mean if resampling alone would miss it.
ConfidenceInterval bootstrap_ci(std::span<const double> values, std::uint64_t seed, int resamples = 1000,
                                double level = 0.95);

/// One-tailed paired bootstrap p-value for mean(a) < mean(b): the share of resampled mean
/// differences a - b that are >= 0, with the usual +1 correction.
double paired_bootstrap_pvalue(std::span<const double> a, std::span<const double> b, std::uint64_t seed,
                               int resamples = 10000);

}  // namespace qemlab

#endif
