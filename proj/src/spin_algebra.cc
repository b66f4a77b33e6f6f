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

#include "qscatter/spin_algebra.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qscatter {

namespace {

std::string describe(const Vec3 &v) {
    std::ostringstream out;
    out.precision(17);
    out << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
    return out.str();
}

Complex2x2 pauli_combination(const Vec3 &v) {
    auto s = pauli_matrices();
    return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

}  // namespace

BlochVector::BlochVector(const Vec3 &v) : v_(v) {
    if (!v.allFinite() || v.norm() > 1 + kAlgebraTolerance) {
        throw std::invalid_argument("Bloch vector outside the unit ball: " + describe(v));
    }
}

UnitDirection::UnitDirection(const Vec3 &n) : n_(n) {
    if (!n.allFinite() || std::abs(n.norm() - 1) > kAlgebraTolerance) {
        throw std::invalid_argument("direction is not a unit vector: " + describe(n));
    }
}

UnitDirection UnitDirection::normalized(const Vec3 &v) {
    double norm = v.norm();
    if (!v.allFinite() || norm == 0) {
        throw std::invalid_argument("cannot normalize direction " + describe(v));
    }
    return UnitDirection(v / norm);
}

std::array<Complex2x2, 3> pauli_matrices() {
    const Complex i(0, 1);
    Complex2x2 x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    return {x, y, z};
}

Complex2x2 pauli_dot(const UnitDirection &n) {
    return pauli_combination(n.vec());
}

Complex2x2 spin_projector(const UnitDirection &n) {
    return 0.5 * (Complex2x2::Identity() + pauli_dot(n));
}

Complex2x2 bloch_to_density(const BlochVector &v) {
    return 0.5 * (Complex2x2::Identity() + pauli_combination(v.vec()));
}

BlochVector density_to_bloch(const Complex2x2 &rho) {
    if (!is_hermitian(rho)) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1)) > kAlgebraTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    // v_k = Tr(rho sigma_k)
    Vec3 v(2 * rho(0, 1).real(), -2 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real());
    return BlochVector(v);
}

Complex2x2 spin_frame(const UnitDirection &n) {
    const Vec3 &d = n.vec();
    double theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
    double phi = std::atan2(d.y(), d.x());
    Complex phase = std::polar(1.0, phi);
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    Complex2x2 u;
    u << c, -std::conj(phase) * s, phase * s, c;
    return u;
}

Complex4x4 kron(const Complex2x2 &probe, const Complex2x2 &target) {
    Complex4x4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = probe(i, j) * target;
        }
    }
    return out;
}

Complex2x2 trace_out_target(const Complex4x4 &joint) {
    Complex2x2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out(i, j) = joint.block<2, 2>(2 * i, 2 * j).trace();
        }
    }
    return out;
}

Complex4x4 heisenberg_coupling() {
    Complex4x4 out = Complex4x4::Zero();
    for (const auto &s : pauli_matrices()) {
        out += kron(s, s);
    }
    return out;
}

SpinProjectors singlet_triplet_projectors() {
    Complex4x4 id = Complex4x4::Identity();
    Complex4x4 coupling = heisenberg_coupling();
    return {(id - coupling) / 4.0, (3.0 * id + coupling) / 4.0};
}

}  // namespace qscatter
