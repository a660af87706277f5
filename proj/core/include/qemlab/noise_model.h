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

#ifndef QEMLAB_NOISE_MODEL_H
#define QEMLAB_NOISE_MODEL_H

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace qemlab {

/// Converts an average gate infidelity r on a d-dimensional subsystem into the depolarizing
/// probability p of rho -> (1 - p) rho + p I / d with the same infidelity: p = r d / (d - 1).
double infidelity_to_depolarizing(double r, int d);

/// Average gate infidelity of the depolarizing channel with probability p (inverse of the above).
double depolarizing_to_infidelity(double p, int d);

/// Per-gate-type error channels of the simulated device. Times are in microseconds.
///
/// Noisy gates are X, SX and CX; RZ is virtual and never picks up noise. Each channel has an
/// enable flag so tiers of a benchmark can share one parameter set.
struct NoiseModel {
    std::string name = "custom";

    double dep_1q = 0.0;
    double dep_2q = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
    double dur_1q = 0.035;
    double dur_2q = 0.30;
    /// Symmetric bit-flip probability per qubit at measurement, used when `readout_flip_per_qubit` is empty.
    double readout_flip = 0.0;
    std::vector<double> readout_flip_per_qubit;
    /// Angle of the controlled-RX over-rotation appended to every CX.
    double coherent_cx_angle = 0.0;
    /// Standard deviation of a per-gate Gaussian spread around `coherent_cx_angle`. Zero disables it.
    double coherent_cx_spread = 0.0;
    std::uint64_t coherent_spread_seed = 0;

    bool depolarizing_enabled = true;
    bool relaxation_enabled = true;
    bool readout_enabled = true;
    bool coherent_enabled = false;

    /// Throws std::invalid_argument when a probability is outside [0, 1], t2 > 2 t1, or an angle is not finite.
    void validate() const;

    double readout_flip_for(int qubit) const;
    bool has_readout_error() const;

    /// No channel active (all flags off).
    static NoiseModel ideal();
    /// Named presets with the averaged device parameters: "lima-like", "belem-like", "ideal".
    static NoiseModel preset(std::string_view name);
    static std::vector<std::string> preset_names();
};

std::string noise_model_to_json(const NoiseModel &noise);
NoiseModel noise_model_from_json(std::string_view text);

}  // namespace qemlab

#endif
