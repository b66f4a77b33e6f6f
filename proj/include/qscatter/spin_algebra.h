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

#ifndef QSCATTER_SPIN_ALGEBRA_H
#define QSCATTER_SPIN_ALGEBRA_H

#include <Eigen/Dense>
#include <array>
#include <complex>

/// Two-spin algebra for a mobile probe qubit X and a fixed target qubit A.
///
/// Conventions used throughout the library:
///  - Single-spin matrices are written in the lab basis |up>, |down> with
///    "up" along +z.
///  - Joint matrices act on probe (x) target, basis order
///    |up up>, |up down>, |down up>, |down down>. The probe is always the
///    first tensor factor.
///  - Arbitrary directions enter only through n.sigma; nothing re-bases.
namespace qscatter {

using Complex = std::complex<double>;
using Complex2x2 = Eigen::Matrix2cd;
using Complex4x4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

/// Absolute tolerance for Hermiticity, trace and norm checks. Every quantity
/// handled here is a dimensionless O(1) number.
inline constexpr double kAlgebraTolerance = 1e-12;

/// Bloch vector of a target state, |v| <= 1.
class BlochVector {
   public:
    /// Throws std::invalid_argument when |v| > 1 + 1e-12 or v is not finite.
    explicit BlochVector(const Vec3 &v);
    BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {
    }

    static BlochVector zero() {
        return BlochVector(Vec3::Zero());
    }

    const Vec3 &vec() const {
        return v_;
    }
    double norm() const {
        return v_.norm();
    }
    double operator[](int i) const {
        return v_[i];
    }

   private:
    Vec3 v_;
};

/// Unit vector used for spin preparation and detection axes.
class UnitDirection {
   public:
    /// Throws std::invalid_argument unless | |n| - 1 | <= 1e-12.
    explicit UnitDirection(const Vec3 &n);
    UnitDirection(double x, double y, double z) : UnitDirection(Vec3(x, y, z)) {
    }

    /// Rescales a nonzero vector onto the sphere.
    static UnitDirection normalized(const Vec3 &v);

    static UnitDirection x_axis() {
        return UnitDirection(1, 0, 0);
    }
    static UnitDirection y_axis() {
        return UnitDirection(0, 1, 0);
    }
    static UnitDirection z_axis() {
        return UnitDirection(0, 0, 1);
    }

    const Vec3 &vec() const {
        return n_;
    }
    double dot(const Vec3 &other) const {
        return n_.dot(other);
    }
    UnitDirection operator-() const {
        return UnitDirection(-n_);
    }

   private:
    Vec3 n_;
};

std::array<Complex2x2, 3> pauli_matrices();

/// n.sigma for a unit direction: Hermitian, traceless, squares to 1.
Complex2x2 pauli_dot(const UnitDirection &n);

/// (1 + n.sigma)/2, the pure state polarized along n.
Complex2x2 spin_projector(const UnitDirection &n);

Complex2x2 bloch_to_density(const BlochVector &v);

/// Inverse of bloch_to_density. Throws std::invalid_argument for a
/// non-Hermitian matrix, a trace other than 1, or |v| > 1.
BlochVector density_to_bloch(const Complex2x2 &rho);

/// Unitary whose columns are |up_n> and |down_n>. Conjugating a lab-basis
/// matrix, U^dagger M U, expresses it in the basis quantized along n.
Complex2x2 spin_frame(const UnitDirection &n);

/// probe (x) target.
Complex4x4 kron(const Complex2x2 &probe, const Complex2x2 &target);

/// Traces out the target (second) factor.
Complex2x2 trace_out_target(const Complex4x4 &joint);

/// sigma_X . sigma_A = -3 P1 + P3.
Complex4x4 heisenberg_coupling();

struct SpinProjectors {
    Complex4x4 singlet;  // P1 = (1 - sigma_X.sigma_A)/4, rank 1
    Complex4x4 triplet;  // P3 = (3 + sigma_X.sigma_A)/4, rank 3
};

SpinProjectors singlet_triplet_projectors();

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived> &m, double tol = kAlgebraTolerance) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qscatter

#endif
