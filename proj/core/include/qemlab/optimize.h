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

#ifndef QEMLAB_OPTIMIZE_H
#define QEMLAB_OPTIMIZE_H

#include <functional>
#include <span>
#include <vector>

namespace qemlab {

struct NelderMeadOptions {
    /// Total objective evaluations across all restarts.
    int max_evals = 2000;
    /// Extra runs, each started from the best point so far with a fresh simplex.
    int restarts = 2;
    double initial_step = 0.5;
    /// A run converges when the simplex spread in f and in every coordinate is below these.
    double ftol = 1e-8;
    double xtol = 1e-6;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    /// The last run met both tolerances before the budget ran out.
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)> &f, std::vector<double> x0,
                             const NelderMeadOptions &options = {});

}  // namespace qemlab

#endif
