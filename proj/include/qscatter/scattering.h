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

#ifndef QSCATTER_SCATTERING_H
#define QSCATTER_SCATTERING_H

#include <string>
#include <string_view>

#include "qscatter/spin_algebra.h"

/// Scattering of a probe qubit off a fixed target qubit through the contact
/// interaction g (sigma_X . sigma_A) delta(x), g > 0.
///
/// Momenta are dimensionless: kappa = hbar^2 k / (m g), and the interaction
/// strength seen by the probe is omega = 1 / kappa. Small omega is the fast,
/// weakly scattered limit; large omega is the slow, fully reflected limit.
///
/// Probabilities are available by two independent routes: the exact operator
/// trace over the 4x4 joint spin space, and closed-form coefficient
/// expressions linear in the target Bloch vector. The closed form is the
/// production path; the trace path exists to check it.
namespace qscatter {

enum class Channel { kTransmission, kReflection };

std::string_view to_string(Channel channel);

/// Accepts "t", "r", "transmission", "reflection".
Channel parse_channel(std::string_view text);

/// Dimensionless incident wave number, 0 < kappa < inf.
class Kappa {
   public:
    explicit Kappa(double value);

    double value() const {
        return value_;
    }
    double omega() const {
        return 1 / value_;
    }

   private:
    double value_;
};

/// omega = 1/kappa. Throws std::invalid_argument for kappa <= 0 or non-finite.
double omega(double kappa);

/// Throws std::invalid_argument unless 0 < omega < inf.
void require_positive_omega(double omega);

/// Singlet (1) and triplet (3) sector amplitudes.
struct ChannelAmplitudes {
    Complex t1;
    Complex r1;
    Complex t3;
    Complex r3;
};

ChannelAmplitudes channel_amplitudes(double omega);

/// R = r1 P1 + r3 P3.
Complex4x4 reflection_operator(double omega);

/// T = 1 + R = t1 P1 + t3 P3.
Complex4x4 transmission_operator(double omega);

Complex4x4 scattering_operator(Channel channel, double omega);

/// P = a + a' (nf.ni) + b [...] + c v.(nf x ni), where the bracket is
/// 3(nf.v) + (ni.v) for transmission and (nf.v) - (ni.v) for reflection.
struct ProbabilityCoefficients {
    Channel channel;
    double a;
    double a_prime;
    double b;
    double c;
};

ProbabilityCoefficients transmission_coefficients(double omega);
ProbabilityCoefficients reflection_coefficients(double omega);
ProbabilityCoefficients probability_coefficients(Channel channel, double omega);

/// Probe polarized along `incident`, sent with wave number `kappa`, and
/// detected in `channel` with spin along `detected`.
struct MeasurementSetup {
    UnitDirection incident;
    UnitDirection detected;
    Kappa kappa;
    Channel channel;
};

/// Tr{ |f><f| S (|i><i| (x) rho_target) S^dagger } over the joint spin space.
/// Throws std::logic_error if the trace picks up an imaginary part above 1e-10.
double probability_trace(const MeasurementSetup &setup, const Complex2x2 &rho_target);

double probability_closed_form(const MeasurementSetup &setup, const BlochVector &v);

/// Accepts p in [-1e-12, 1 + 1e-12] and clamps it to [0, 1]; anything else
/// throws std::logic_error.
double checked_probability(double p);

/// The four mutually exclusive detector outcomes for one probe: transmitted
/// or reflected, with spin along +detected or -detected.
struct OutcomeProbabilities {
    double transmitted_parallel;
    double transmitted_antiparallel;
    double reflected_parallel;
    double reflected_antiparallel;

    double total() const {
        return transmitted_parallel + transmitted_antiparallel + reflected_parallel + reflected_antiparallel;
    }
};

OutcomeProbabilities outcome_probabilities(
    const UnitDirection &incident, const UnitDirection &detected, Kappa kappa, const BlochVector &v);

/// Probe spin after transmission, for a probe prepared along `incident`.
struct ProbeTransfer {
    /// Tr_A{ T (|up><up| (x) rho_target) T^dagger }, unnormalized, written in
    /// the basis quantized along `incident` (see spin_frame).
    Complex2x2 state;
    /// Trace of `state`: the total transmission probability.
    double norm;
};

ProbeTransfer probe_state_after_transmission(const Complex2x2 &rho_target, double omega, const UnitDirection &incident);

}  // namespace qscatter

#endif
