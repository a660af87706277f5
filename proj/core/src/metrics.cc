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

#include "qemlab/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qemlab/rng.h"

namespace qemlab {

double l2_error(std::span<const double> estimate, std::span<const double> ideal) {
    if (estimate.size() != ideal.size()) {
        throw std::invalid_argument("l2_error: vectors differ in length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < estimate.size(); i++) {
        double d = estimate[i] - ideal[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double mean_of(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty sample");
    }
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s / static_cast<double>(values.size());
}

namespace {

double resampled_mean(std::span<const double> values, Rng &rng) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); i++) {
        s += values[rng.below(values.size())];
    }
    return s / static_cast<double>(values.size());
}

}  // namespace

ConfidenceInterval bootstrap_ci(std::span<const double> values, std::uint64_t seed, int resamples, double level) {
    if (resamples < 1 || !(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("bootstrap needs resamples >= 1 and level in (0, 1)");
    }
    ConfidenceInterval ci;
    ci.mean = mean_of(values);
    Rng rng(seed);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto &m : means) {
        m = resampled_mean(values, rng);
    }
    std::sort(means.begin(), means.end());
    const double alpha = (1.0 - level) / 2.0;
    auto rank = [&](double q) {
        auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(means.size() - 1) + 0.5));
        return means[std::min(k, means.size() - 1)];
    };
    ci.low = std::min(rank(alpha), ci.mean);
    ci.high = std::max(rank(1.0 - alpha), ci.mean);
    return ci;
}

double paired_bootstrap_pvalue(std::span<const double> a, std::span<const double> b, std::uint64_t seed,
                               int resamples) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("paired bootstrap needs two equally sized, non-empty samples");
    }
    if (resamples < 1) {
        throw std::invalid_argument("bootstrap needs resamples >= 1");
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        diff[i] = a[i] - b[i];
    }
    Rng rng(seed);
    int not_better = 0;
    for (int r = 0; r < resamples; r++) {
        if (resampled_mean(diff, rng) >= 0.0) {
            not_better++;
        }
    }
    return (not_better + 1.0) / (resamples + 1.0);
}

}  // namespace qemlab
