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

#include "qscatter/scattering.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qscatter {

namespace {

constexpr double kImaginaryResidueLimit = 1e-10;

// (1 + omega^2)(1 + 9 omega^2), the common denominator of every coefficient.
double coefficient_denominator(double omega) {
    double w2 = omega * omega;
    return (1 + w2) * (1 + 9 * w2);
}

}  // namespace

std::string_view to_string(Channel channel) {
    return channel == Channel::kTransmission ? "transmission" : "reflection";
}

Channel parse_channel(std::string_view text) {
    if (text == "t" || text == "transmission") {
        return Channel::kTransmission;
    }
    if (text == "r" || text == "reflection") {
        return Channel::kReflection;
    }
    throw std::invalid_argument("unknown channel '" + std::string(text) + "' (expected t or r)");
}

Kappa::Kappa(double value) : value_(value) {
    if (!std::isfinite(value) || value <= 0) {
        throw std::invalid_argument("kappa must be finite and positive, got " + std::to_string(value));
    }
}

double omega(double kappa) {
    return Kappa(kappa).omega();
}

void require_positive_omega(double omega) {
    if (!std::isfinite(omega) || omega <= 0) {
        throw std::invalid_argument("omega must be finite and positive, got " + std::to_string(omega));
    }
}

ChannelAmplitudes channel_amplitudes(double omega) {
    require_positive_omega(omega);
    const Complex i(0, 1);
    Complex singlet = 1.0 - 3.0 * i * omega;
    Complex triplet = 1.0 + i * omega;
    return {
        .t1 = 1.0 / singlet,
        .r1 = 3.0 * i * omega / singlet,
        .t3 = 1.0 / triplet,
        .r3 = -i * omega / triplet,
    };
}

Complex4x4 reflection_operator(double omega) {
    auto amp = channel_amplitudes(omega);
    auto proj = singlet_triplet_projectors();
    return amp.r1 * proj.singlet + amp.r3 * proj.triplet;
}

Complex4x4 transmission_operator(double omega) {
    return Complex4x4::Identity() + reflection_operator(omega);
}

Complex4x4 scattering_operator(Channel channel, double omega) {
    return channel == Channel::kTransmission ? transmission_operator(omega) : reflection_operator(omega);
}

ProbabilityCoefficients transmission_coefficients(double omega) {
    require_positive_omega(omega);
    double d = coefficient_denominator(omega);
    double w2 = omega * omega;
    return {
        .channel = Channel::kTransmission,
        .a = (1 + 7 * w2) / (2 * d),
        .a_prime = (1 + 3 * w2) / (2 * d),
        .b = w2 / d,
        .c = -omega / d,
    };
}

ProbabilityCoefficients reflection_coefficients(double omega) {
    require_positive_omega(omega);
    double d = coefficient_denominator(omega);
    double w2 = omega * omega;
    return {
        .channel = Channel::kReflection,
        .a = 3 * w2 * (1 + 3 * w2) / (2 * d),
        .a_prime = -w2 * (1 - 9 * w2) / (2 * d),
        .b = w2 / d,
        .c = 3 * w2 * omega / d,
    };
}

ProbabilityCoefficients probability_coefficients(Channel channel, double omega) {
    return channel == Channel::kTransmission ? transmission_coefficients(omega) : reflection_coefficients(omega);
}

double checked_probability(double p) {
    if (!(p >= -kAlgebraTolerance && p <= 1 + kAlgebraTolerance)) {
        throw std::logic_error("probability out of range: " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

double probability_trace(const MeasurementSetup &setup, const Complex2x2 &rho_target) {
    Complex4x4 s = scattering_operator(setup.channel, setup.kappa.omega());
    Complex4x4 initial = kron(spin_projector(setup.incident), rho_target);
    Complex4x4 detector = kron(spin_projector(setup.detected), Complex2x2::Identity());
    Complex p = (detector * s * initial * s.adjoint()).trace();
    if (std::abs(p.imag()) > kImaginaryResidueLimit) {
        throw std::logic_error("scattering probability has imaginary part " + std::to_string(p.imag()));
    }
    return checked_probability(p.real());
}

double probability_closed_form(const MeasurementSetup &setup, const BlochVector &v) {
    auto k = probability_coefficients(setup.channel, setup.kappa.omega());
    const Vec3 &ni = setup.incident.vec();
    const Vec3 &nf = setup.detected.vec();
    const Vec3 &bloch = v.vec();
    double along_final = nf.dot(bloch);
    double along_initial = ni.dot(bloch);
    double spin_term = setup.channel == Channel::kTransmission ? 3 * along_final + along_initial
                                                               : along_final - along_initial;
    double p = k.a + k.a_prime * nf.dot(ni) + k.b * spin_term + k.c * bloch.dot(nf.cross(ni));
    return checked_probability(p);
}

OutcomeProbabilities outcome_probabilities(
    const UnitDirection &incident, const UnitDirection &detected, Kappa kappa, const BlochVector &v) {
    auto p = [&](const UnitDirection &nf, Channel channel) {
        return probability_closed_form({incident, nf, kappa, channel}, v);
    };
    return {
        .transmitted_parallel = p(detected, Channel::kTransmission),
        .transmitted_antiparallel = p(-detected, Channel::kTransmission),
        .reflected_parallel = p(detected, Channel::kReflection),
        .reflected_antiparallel = p(-detected, Channel::kReflection),
    };
}

ProbeTransfer probe_state_after_transmission(const Complex2x2 &rho_target, double omega, const UnitDirection &incident) {
    Complex4x4 t = transmission_operator(omega);
    Complex2x2 lab = trace_out_target(t * kron(spin_projector(incident), rho_target) * t.adjoint());
    Complex2x2 frame = spin_frame(incident);
    Complex2x2 state = frame.adjoint() * lab * frame;
    return {state, state.trace().real()};
}

}  // namespace qscatter
