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

#include "qscatter/tomography.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qscatter/errors.h"

namespace qscatter {

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;
constexpr double kMaxConditionNumber = 1e12;
constexpr double kSameKappaRelative = 1e-9;
constexpr double kRankTolerance = 1e-10;

// P = offset + gradient . v for one measurement setup.
struct AffineResponse {
    Vec3 gradient;
    double offset;
};

AffineResponse affine_response(const MeasurementSetup &setup) {
    auto k = probability_coefficients(setup.channel, setup.kappa.omega());
    const Vec3 &ni = setup.incident.vec();
    const Vec3 &nf = setup.detected.vec();
    Vec3 spin = setup.channel == Channel::kTransmission ? Vec3(3 * nf + ni) : Vec3(nf - ni);
    return {k.b * spin + k.c * nf.cross(ni), k.a + k.a_prime * nf.dot(ni)};
}

void require_orthogonal(const Vec3 &a, const Vec3 &b, const char *what) {
    if (std::abs(a.dot(b)) > kOrthogonalityTolerance) {
        throw std::invalid_argument(std::string(what) + " must be orthogonal (|dot| <= 1e-10)");
    }
}

bool same_kappa(double a, double b) {
    return std::abs(a - b) < kSameKappaRelative * std::max(std::abs(a), std::abs(b));
}

SchemeMatrix assemble(std::vector<MeasurementSetup> setups, const std::array<Vec3, 3> &axes, SchemeProvenance provenance) {
    SchemeMatrix scheme;
    for (int k = 0; k < 3; ++k) {
        scheme.frame.row(k) = axes[k].transpose();
    }
    for (int row = 0; row < 3; ++row) {
        auto response = affine_response(setups[row]);
        scheme.matrix.row(row) = (scheme.frame * response.gradient).transpose();
        scheme.offset[row] = response.offset;
    }
    scheme.setups = std::move(setups);
    provenance.frame = axes;
    scheme.provenance = std::move(provenance);
    return scheme;
}

double condition_number(const Eigen::Matrix3d &m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    const Vec3 &s = svd.singularValues();
    if (s[2] == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return s[0] / s[2];
}

std::string format_vec(const Vec3 &v) {
    std::ostringstream out;
    out.precision(17);
    out << "(" << v.x() << "," << v.y() << "," << v.z() << ")";
    return out.str();
}

}  // namespace

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::kFrame:
            return "frame";
        case Strategy::kParallel:
            return "parallel";
        case Strategy::kMomentum:
            return "momentum";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view text) {
    if (text == "frame") {
        return Strategy::kFrame;
    }
    if (text == "parallel") {
        return Strategy::kParallel;
    }
    if (text == "momentum") {
        return Strategy::kMomentum;
    }
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "' (expected frame, parallel or momentum)");
}

std::string SchemeProvenance::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << to_string(strategy) << " scheme; channels=";
    for (size_t i = 0; i < channels.size(); ++i) {
        out << (i ? "," : "") << to_string(channels[i]);
    }
    out << "; kappas=";
    for (size_t i = 0; i < kappas.size(); ++i) {
        out << (i ? "," : "") << kappas[i];
    }
    out << "; frame=" << format_vec(frame[0]) << format_vec(frame[1]) << format_vec(frame[2]);
    return out.str();
}

SchemeMatrix strategy1_frame_scheme(
    const UnitDirection &incident, const UnitDirection &first_axis, Kappa kappa, Channel channel) {
    require_orthogonal(incident.vec(), first_axis.vec(), "incident spin and first frame axis");
    UnitDirection second = UnitDirection::normalized(incident.vec().cross(first_axis.vec()));
    std::array<UnitDirection, 3> axes{first_axis, second, incident};

    // Reflection with detection along +n_a carries no information on the n_i
    // component, so the reflected variant detects along -n_a.
    std::vector<MeasurementSetup> setups;
    for (const auto &axis : axes) {
        UnitDirection detected = channel == Channel::kTransmission ? axis : -axis;
        setups.push_back({incident, detected, kappa, channel});
    }
    return assemble(
        std::move(setups), {axes[0].vec(), axes[1].vec(), axes[2].vec()},
        {Strategy::kFrame, {channel}, {kappa.value()}, {}});
}

SchemeMatrix strategy1_parallel_scheme(const std::array<UnitDirection, 3> &axes, Kappa kappa, Channel channel) {
    require_orthogonal(axes[0].vec(), axes[1].vec(), "parallel-scheme axes");
    require_orthogonal(axes[0].vec(), axes[2].vec(), "parallel-scheme axes");
    require_orthogonal(axes[1].vec(), axes[2].vec(), "parallel-scheme axes");
    std::vector<MeasurementSetup> setups;
    for (const auto &axis : axes) {
        UnitDirection detected = channel == Channel::kTransmission ? axis : -axis;
        setups.push_back({axis, detected, kappa, channel});
    }
    return assemble(
        std::move(setups), {axes[0].vec(), axes[1].vec(), axes[2].vec()},
        {Strategy::kParallel, {channel}, {kappa.value()}, {}});
}

SchemeMatrix strategy2_scheme(
    const UnitDirection &incident, const UnitDirection &detected, Kappa first, Kappa second) {
    require_orthogonal(incident.vec(), detected.vec(), "incident and detected spin");
    SchemeProvenance provenance{
        Strategy::kMomentum,
        {Channel::kReflection, Channel::kTransmission, Channel::kTransmission},
        {first.value(), second.value()},
        {}};
    if (same_kappa(first.value(), second.value())) {
        throw DegenerateSchemeError("momentum scheme needs two different wave numbers; " + provenance.describe());
    }
    UnitDirection perpendicular = UnitDirection::normalized(detected.vec().cross(incident.vec()));
    std::vector<MeasurementSetup> setups{
        {incident, detected, first, Channel::kReflection},
        {incident, detected, first, Channel::kTransmission},
        {incident, detected, second, Channel::kTransmission},
    };
    return assemble(std::move(setups), {detected.vec(), incident.vec(), perpendicular.vec()}, std::move(provenance));
}

ReconstructionResult make_reconstruction(const Vec3 &raw, double condition_number) {
    double norm = raw.norm();
    if (norm > 1) {
        return {raw, BlochVector(raw / norm), condition_number, true};
    }
    return {raw, BlochVector(raw), condition_number, false};
}

ReconstructionResult invert_scheme(const SchemeMatrix &scheme, const Vec3 &probs) {
    double cond = condition_number(scheme.matrix);
    if (!std::isfinite(cond) || cond >= kMaxConditionNumber) {
        throw DegenerateSchemeError(
            "condition number " + std::to_string(cond) + " for " + scheme.provenance.describe());
    }
    Vec3 components = scheme.matrix.partialPivLu().solve(probs - scheme.offset);
    return make_reconstruction(scheme.frame.transpose() * components, cond);
}

double strategy1_parallel_component(double probability, double omega, Channel channel) {
    require_positive_omega(omega);
    if (channel == Channel::kTransmission) {
        double w2 = omega * omega;
        return (probability * (1 + w2) * (1 + 9 * w2) - (1 + 5 * w2)) / (4 * w2);
    }
    auto k = reflection_coefficients(omega);
    return (k.a - k.a_prime - probability) / (2 * k.b);
}

ReconstructionResult reconstruct_parallel(
    const std::array<UnitDirection, 3> &axes, const Vec3 &probs, double omega, Channel channel) {
    require_orthogonal(axes[0].vec(), axes[1].vec(), "parallel-scheme axes");
    require_orthogonal(axes[0].vec(), axes[2].vec(), "parallel-scheme axes");
    require_orthogonal(axes[1].vec(), axes[2].vec(), "parallel-scheme axes");
    Vec3 raw = Vec3::Zero();
    for (int k = 0; k < 3; ++k) {
        raw += strategy1_parallel_component(probs[k], omega, channel) * axes[k].vec();
    }
    // The scheme matrix is a multiple of the identity.
    return make_reconstruction(raw, 1.0);
}

RankReport strategy2_transmission_only_rank(Kappa first, Kappa second, Kappa third) {
    if (same_kappa(first.value(), second.value()) || same_kappa(first.value(), third.value()) ||
        same_kappa(second.value(), third.value())) {
        throw std::invalid_argument("transmission-only rank check needs three distinct wave numbers");
    }
    RankReport report{};
    std::array<Kappa, 3> kappas{first, second, third};
    for (int row = 0; row < 3; ++row) {
        auto k = transmission_coefficients(kappas[row].omega());
        report.matrix.row(row) << 3 * k.b, k.b, k.c;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(report.matrix);
    report.singular_values = svd.singularValues();
    report.rank = 0;
    for (int k = 0; k < 3; ++k) {
        if (report.singular_values[k] > kRankTolerance * report.singular_values[0]) {
            ++report.rank;
        }
    }
    Vec3 ratios = report.matrix.col(0).cwiseQuotient(report.matrix.col(1));
    report.min_column_ratio = ratios.minCoeff();
    report.max_column_ratio = ratios.maxCoeff();
    return report;
}

}  // namespace qscatter
