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

#include "qemlab/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qemlab {

namespace {

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

class Run {
   public:
    Run(const std::function<double(std::span<const double>)> &f, int &evals, int budget)
        : f_(f), evals_(evals), budget_(budget) {
    }

    bool exhausted() const {
        return evals_ >= budget_;
    }

    Vertex eval(std::vector<double> x) {
        evals_++;
        double v = f_(x);
        return {std::move(x), std::isfinite(v) ? v : std::numeric_limits<double>::infinity()};
    }

   private:
    const std::function<double(std::span<const double>)> &f_;
    int &evals_;
    int budget_;
};

std::vector<double> affine(const std::vector<double> &a, const std::vector<double> &b, double t) {
    // a + t (b - a)
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        out[i] = a[i] + t * (b[i] - a[i]);
    }
    return out;
}

bool converged(const std::vector<Vertex> &s, const NelderMeadOptions &o) {
    if (std::abs(s.back().f - s.front().f) > o.ftol) {
        return false;
    }
    for (std::size_t v = 1; v < s.size(); v++) {
        for (std::size_t i = 0; i < s[v].x.size(); i++) {
            if (std::abs(s[v].x[i] - s[0].x[i]) > o.xtol) {
                return false;
            }
        }
    }
    return true;
}

/// One simplex run from `start`; returns the best vertex and whether it converged.
std::pair<Vertex, bool> run_once(Run &run, const Vertex &start, const NelderMeadOptions &o) {
    const std::size_t n = start.x.size();
    std::vector<Vertex> s{start};
    for (std::size_t i = 0; i < n && !run.exhausted(); i++) {
        auto x = start.x;
        x[i] += o.initial_step;
        s.push_back(run.eval(std::move(x)));
    }
    auto by_f = [](const Vertex &a, const Vertex &b) { return a.f < b.f; };
    while (true) {
        std::stable_sort(s.begin(), s.end(), by_f);
        if (s.size() == n + 1 && converged(s, o)) {
            return {s.front(), true};
        }
        if (run.exhausted() || s.size() < n + 1) {
            return {s.front(), false};
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; v++) {
            for (std::size_t i = 0; i < n; i++) {
                centroid[i] += s[v].x[i] / static_cast<double>(n);
            }
        }
        Vertex &worst = s.back();
        Vertex r = run.eval(affine(centroid, worst.x, -1.0));
        if (r.f < s.front().f) {
            if (run.exhausted()) {
                worst = std::move(r);
                continue;
            }
            Vertex e = run.eval(affine(centroid, worst.x, -2.0));
            worst = e.f < r.f ? std::move(e) : std::move(r);
            continue;
        }
        if (r.f < s[n - 1].f) {
            worst = std::move(r);
            continue;
        }
        if (run.exhausted()) {
            continue;
        }
        bool outside = r.f < worst.f;
        Vertex c = run.eval(affine(centroid, outside ? r.x : worst.x, 0.5));
        if (c.f < (outside ? r.f : worst.f)) {
            worst = std::move(c);
            continue;
        }
        for (std::size_t v = 1; v <= n && !run.exhausted(); v++) {
            s[v] = run.eval(affine(s[0].x, s[v].x, 0.5));
        }
    }
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)> &f, std::vector<double> x0,
                             const NelderMeadOptions &options) {
    if (x0.empty()) {
        throw std::invalid_argument("nelder_mead needs at least one parameter");
    }
    if (options.max_evals < 1 || options.restarts < 0 || !(options.initial_step > 0.0)) {
        throw std::invalid_argument("nelder_mead needs max_evals >= 1, restarts >= 0, initial_step > 0");
    }
    NelderMeadResult result;
    Run run(f, result.evals, options.max_evals);
    Vertex best = run.eval(std::move(x0));
    for (int r = 0; r <= options.restarts && !run.exhausted(); r++) {
        auto [v, ok] = run_once(run, best, options);
        if (v.f <= best.f) {
            best = std::move(v);
        }
        result.converged = ok;
    }
    result.x = std::move(best.x);
    result.f = best.f;
    return result;
}

}  // namespace qemlab
