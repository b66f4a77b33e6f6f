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

#ifndef QSCATTER_OPTIMIZE_H
#define QSCATTER_OPTIMIZE_H

#include <functional>
#include <string_view>
#include <vector>

/// Sensitivity figures of merit for the tomographic schemes and their
/// minimization over incident wave numbers.
///
/// Each figure of merit is the volume factor (Jacobian) of the linear map from
/// scattering probabilities back to the Bloch vector. Smaller means the
/// reconstruction is less sensitive to errors in the measured probabilities.
namespace qscatter {

enum class FigureOfMerit {
    kDetMt,             // frame scheme, transmission
    kLambdaT,           // parallel scheme, transmission
    kLambdaR,           // parallel scheme, reflection
    kDetMr,             // frame scheme, reflection
    kAbsDetNCubeRoot,   // momentum scheme, 2D
};

std::string_view to_string(FigureOfMerit kind);

/// (1 + w^2)^3 (1 + 9 w^2)^2 / (4 w^4).
double det_Mt(double omega);

/// (1 + w^2)(1 + 9 w^2) / (4 w^2); minimum 4 at w = 1/sqrt(3).
double lambda_t(double omega);

/// Reflection analog, (1 + w^2)(1 + 9 w^2) / (2 w^2) = 2 lambda_t.
double lambda_r(double omega);

/// |det| of the inverse reflection frame scheme, computed numerically from
/// the scheme matrix.
double det_Mr(double omega);

/// -(1+w1^2)^2 (1+9w1^2)^2 (1+w2^2)(1+9w2^2) / (4 w1^3 w2 (w1 - w2)).
/// Throws DegenerateSchemeError at the pole w1 = w2.
double det_N(double omega1, double omega2);

/// |det N|^(1/3) as a function of the two wave numbers.
double abs_det_n_cuberoot(double kappa1, double kappa2);

/// Evaluates a one-dimensional figure of merit at wave number kappa.
double figure_of_merit(FigureOfMerit kind, double kappa);

struct SearchOptions {
    int grid_points = 128;
    int workers = 1;
};

struct Optimum1D {
    double argmin;
    double min_value;
    /// Golden-section bracket around the best grid point.
    double lower;
    double upper;
    int grid_points;
    int iterations;
};

/// Log-spaced grid scan over [lo, hi] followed by golden-section refinement
/// and a parabolic-vertex polish. Throws NoInteriorMinimumError when the best
/// grid point is an endpoint.
Optimum1D minimize_1d(const std::function<double(double)> &f, double lo, double hi, const SearchOptions &options = {});

Optimum1D minimize_1d(FigureOfMerit kind, double lo, double hi, const SearchOptions &options = {});

struct KappaBox {
    double kappa1_lo;
    double kappa1_hi;
    double kappa2_lo;
    double kappa2_hi;

    /// Throws std::invalid_argument for an empty or non-positive box.
    void validate() const;
};

struct Optimum2D {
    double kappa1;
    double kappa2;
    double min_value;
    KappaBox box;
    int grid_points;
    int iterations;
};

/// Grid scan of |det N|^(1/3) over the box, skipping cells within 1e-3
/// relative of the kappa1 = kappa2 pole, then coordinate-wise golden-section
/// refinement.
Optimum2D minimize_2d(const KappaBox &box, const SearchOptions &options = {});

struct GridPoint {
    double kappa1;
    double kappa2;
    /// +inf on the kappa1 = kappa2 pole.
    double value;
};

/// |det N|^(1/3) on a resolution x resolution linear grid, kappa1-major.
std::vector<GridPoint> det_n_grid(const KappaBox &box, int resolution, int workers = 1);

std::vector<double> log_space(double lo, double hi, int n);
std::vector<double> lin_space(double lo, double hi, int n);

}  // namespace qscatter

#endif
