// Copyright 2026 The qscatter Authors
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

#ifndef QSCATTER_TOMOGRAPHY_H
#define QSCATTER_TOMOGRAPHY_H

#include <array>
#include <string>
#include <vector>

#include "qscatter/scattering.h"

/// Linear-inversion tomography of the target Bloch vector from three
/// scattering probabilities.
///
/// Every scheme is an affine map probs = B (F v) + offset, where the rows of
/// F are an orthonormal frame and B is 3x3. Three families are provided:
///  - frame: fixed incident spin n_i, detection along n1, n_i x n1, n_i
///    (reflection flips all three detection axes);
///  - parallel: detection along the incident spin for three orthogonal
///    incident axes (reflection detects along -n_i);
///  - momentum: fixed n_i, n_f with n_f orthogonal to n_i, and data
///    (P^r(k1), P^t(k1), P^t(k2)) from two wave numbers.
namespace qscatter {

enum class Strategy { kFrame, kParallel, kMomentum };

std::string_view to_string(Strategy strategy);

/// Accepts "frame", "parallel", "momentum".
Strategy parse_strategy(std::string_view text);

struct SchemeProvenance {
    Strategy strategy;
    std::vector<Channel> channels;
    std::vector<double> kappas;
    std::array<Vec3, 3> frame;

    std::string describe() const;
};

struct SchemeMatrix {
    Eigen::Matrix3d matrix;
    Vec3 offset;
    /// Row k is the axis whose Bloch component enters column k.
    Eigen::Matrix3d frame;
    /// The measurement that produces each row's probability.
    std::vector<MeasurementSetup> setups;
    SchemeProvenance provenance;

    Vec3 frame_components(const Vec3 &v) const {
        return frame * v;
    }
    Vec3 predict(const BlochVector &v) const {
        return matrix * frame_components(v.vec()) + offset;
    }
};

struct ReconstructionResult {
    Vec3 raw;
    BlochVector clipped;
    double condition_number;
    bool was_clipped;
};

/// Frame scheme of Strategy I. Throws std::invalid_argument if `first_axis`
/// is not orthogonal to `incident` within 1e-10.
SchemeMatrix strategy1_frame_scheme(
    const UnitDirection &incident, const UnitDirection &first_axis, Kappa kappa, Channel channel);

/// Parallel scheme of Strategy I written as a diagonal SchemeMatrix over the
/// three incident axes.
SchemeMatrix strategy1_parallel_scheme(const std::array<UnitDirection, 3> &axes, Kappa kappa, Channel channel);

/// Momentum scheme of Strategy II. Throws DegenerateSchemeError when the two
/// wave numbers coincide within 1e-9 relative.
SchemeMatrix strategy2_scheme(
    const UnitDirection &incident, const UnitDirection &detected, Kappa first, Kappa second);

/// Solves B (F v) + offset = probs with LU (partial pivoting). Throws
/// DegenerateSchemeError when cond(B) >= 1e12.
ReconstructionResult invert_scheme(const SchemeMatrix &scheme, const Vec3 &probs);

/// n_i . v from one parallel-scheme probability. Transmission detects along
/// n_i, reflection along -n_i.
double strategy1_parallel_component(double probability, double omega, Channel channel);

/// Assembles v from three parallel-scheme components. The axes must be
/// mutually orthogonal within 1e-10.
ReconstructionResult reconstruct_parallel(
    const std::array<UnitDirection, 3> &axes, const Vec3 &probs, double omega, Channel channel);

/// Wraps a raw estimate: radial projection onto the ball when |raw| > 1.
ReconstructionResult make_reconstruction(const Vec3 &raw, double condition_number);

struct RankReport {
    int rank;
    Eigen::Matrix3d matrix;
    Vec3 singular_values;
    /// Smallest and largest ratio column0/column1 over the rows.
    double min_column_ratio;
    double max_column_ratio;
};

/// Transmission-only momentum data (P^t(k1), P^t(k2), P^t(k3)) never form a
/// complete scheme; this reports the numerical rank of its matrix.
RankReport strategy2_transmission_only_rank(Kappa first, Kappa second, Kappa third);

}  // namespace qscatter

#endif
