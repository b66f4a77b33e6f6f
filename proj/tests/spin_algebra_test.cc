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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace qscatter {
namespace {

constexpr double kTol = 1e-12;
const Complex kI(0, 1);

Vec3 random_unit(std::mt19937_64 &gen) {
    std::normal_distribution<double> n(0, 1);
    Vec3 v(n(gen), n(gen), n(gen));
    return v.normalized();
}

Vec3 random_ball(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0, 1);
    return std::cbrt(u(gen)) * random_unit(gen);
}

double max_abs(const Eigen::MatrixXcd &m) {
    return m.cwiseAbs().maxCoeff();
}

// Textbook Pauli matrices, written out by hand.
std::array<Complex2x2, 3> literal_paulis() {
    Complex2x2 x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -kI, kI, 0;
    z << 1, 0, 0, -1;
    return {x, y, z};
}

TEST(PauliDot, ZAxisIsDiagonal) {
    Complex2x2 expected;
    expected << 1, 0, 0, -1;
    EXPECT_LT(max_abs(pauli_dot(UnitDirection::z_axis()) - expected), kTol);
}

TEST(PauliDot, XAxisIsOffDiagonal) {
    Complex2x2 expected;
    expected << 0, 1, 1, 0;
    EXPECT_LT(max_abs(pauli_dot(UnitDirection::x_axis()) - expected), kTol);
}

TEST(PauliDot, MatchesLiteralPaulis) {
    auto lit = literal_paulis();
    auto got = pauli_matrices();
    for (int k = 0; k < 3; ++k) {
        EXPECT_LT(max_abs(got[k] - lit[k]), kTol);
    }
}

TEST(PauliDot, SquaresToIdentityForRandomDirections) {
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 1000; ++trial) {
        Complex2x2 s = pauli_dot(UnitDirection(random_unit(gen)));
        EXPECT_LT(max_abs(s * s - Complex2x2::Identity()), kTol);
        EXPECT_TRUE(is_hermitian(s));
    }
}

TEST(UnitDirection, RejectsNonUnitVectors) {
    EXPECT_THROW(UnitDirection(1, 1, 0), std::invalid_argument);
    EXPECT_THROW(UnitDirection(0, 0, 0), std::invalid_argument);
    EXPECT_NO_THROW(UnitDirection::normalized(Vec3(1, 1, 0)));
}

TEST(BlochVector, RejectsOutsideBall) {
    EXPECT_THROW(BlochVector(0.8, 0.8, 0), std::invalid_argument);
    EXPECT_NO_THROW(BlochVector(0, 0, 1));
}

TEST(BlochToDensity, MaximallyMixed) {
    EXPECT_LT(max_abs(bloch_to_density(BlochVector::zero()) - 0.5 * Complex2x2::Identity()), kTol);
}

TEST(BlochToDensity, PureUp) {
    Complex2x2 expected;
    expected << 1, 0, 0, 0;
    EXPECT_LT(max_abs(bloch_to_density(BlochVector(0, 0, 1)) - expected), kTol);
}

TEST(BlochToDensity, EigenvaluesOfMixedState) {
    Complex2x2 rho = bloch_to_density(BlochVector(0.3, 0.4, 0.5));
    Eigen::SelfAdjointEigenSolver<Complex2x2> es(rho);
    double r = std::sqrt(0.5);
    EXPECT_NEAR(es.eigenvalues()[0], (1 - r) / 2, kTol);
    EXPECT_NEAR(es.eigenvalues()[1], (1 + r) / 2, kTol);
}

TEST(DensityToBloch, Anchors) {
    EXPECT_LT(density_to_bloch(0.5 * Complex2x2::Identity()).vec().norm(), kTol);
    Complex2x2 up;
    up << 1, 0, 0, 0;
    EXPECT_LT((density_to_bloch(up).vec() - Vec3(0, 0, 1)).norm(), kTol);
}

TEST(DensityToBloch, RoundTrip) {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 1000; ++trial) {
        Vec3 v = random_ball(gen);
        EXPECT_LT((density_to_bloch(bloch_to_density(BlochVector(v))).vec() - v).norm(), kTol);
    }
}

TEST(DensityToBloch, RejectsInvalidMatrices) {
    Complex2x2 not_hermitian;
    not_hermitian << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(density_to_bloch(not_hermitian), std::invalid_argument);
    Complex2x2 bad_trace = Complex2x2::Identity();
    EXPECT_THROW(density_to_bloch(bad_trace), std::invalid_argument);
}

TEST(SpinProjector, ProjectsOntoEigenvector) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        UnitDirection n(random_unit(gen));
        Complex2x2 p = spin_projector(n);
        EXPECT_LT(max_abs(p * p - p), kTol);
        EXPECT_LT(max_abs(pauli_dot(n) * p - p), kTol);
        Complex2x2 frame = spin_frame(n);
        EXPECT_LT(max_abs(frame.adjoint() * frame - Complex2x2::Identity()), kTol);
        EXPECT_LT(max_abs(frame.adjoint() * pauli_dot(n) * frame - pauli_dot(UnitDirection::z_axis())), kTol);
    }
}

TEST(HeisenbergCoupling, EigenvaluesAndTrace) {
    Complex4x4 h = heisenberg_coupling();
    Eigen::SelfAdjointEigenSolver<Complex4x4> es(h);
    EXPECT_NEAR(es.eigenvalues()[0], -3, kTol);
    for (int k = 1; k < 4; ++k) {
        EXPECT_NEAR(es.eigenvalues()[k], 1, kTol);
    }
    EXPECT_LT(std::abs(h.trace()), kTol);
}

TEST(HeisenbergCoupling, MatchesKroneckerSumOfLiteralPaulis) {
    auto p = literal_paulis();
    Complex4x4 expected = Complex4x4::Zero();
    for (int k = 0; k < 3; ++k) {
        // Explicit Kronecker product, probe index major.
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) expected(2 * a + c, 2 * b + d) += p[k](a, b) * p[k](c, d);
    }
    EXPECT_LT(max_abs(heisenberg_coupling() - expected), kTol);
}

TEST(HeisenbergCoupling, EqualsProjectorCombination) {
    auto proj = singlet_triplet_projectors();
    EXPECT_LT(max_abs(heisenberg_coupling() - (-3.0 * proj.singlet + proj.triplet)), kTol);
}

TEST(SingletTriplet, CompletenessAndRank) {
    auto proj = singlet_triplet_projectors();
    EXPECT_LT(max_abs(proj.singlet + proj.triplet - Complex4x4::Identity()), kTol);
    EXPECT_NEAR(proj.singlet.trace().real(), 1, kTol);
    EXPECT_NEAR(proj.triplet.trace().real(), 3, kTol);
    EXPECT_LT(max_abs(proj.singlet * proj.triplet), kTol);
}

TEST(SingletTriplet, SingletIsAntisymmetricState) {
    // |s> = (|ud> - |du>)/sqrt(2) in the probe-major basis {uu, ud, du, dd}.
    Eigen::Vector4cd s(0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0);
    Complex4x4 expected = s * s.adjoint();
    EXPECT_LT(max_abs(singlet_triplet_projectors().singlet - expected), kTol);
    Complex4x4 from_coupling = (Complex4x4::Identity() - heisenberg_coupling()) / 4.0;
    EXPECT_LT(max_abs(singlet_triplet_projectors().singlet - from_coupling), kTol);
}

TEST(PartialTrace, MatchesExplicitLoop) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        Complex4x4 m;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = Complex(n(gen), n(gen));
        Complex2x2 expected = Complex2x2::Zero();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int t = 0; t < 2; ++t) expected(a, b) += m(2 * a + t, 2 * b + t);
        EXPECT_LT(max_abs(trace_out_target(m) - expected), kTol);
    }
}

TEST(Kron, ProductStateTracesBack) {
    Complex2x2 probe = bloch_to_density(BlochVector(0.1, -0.2, 0.3));
    Complex2x2 target = bloch_to_density(BlochVector(0.5, 0, -0.4));
    EXPECT_LT(max_abs(trace_out_target(kron(probe, target)) - probe), kTol);
}

}  // namespace
}  // namespace qscatter
