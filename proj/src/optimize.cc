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

#include "qscatter/optimize.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qscatter/errors.h"
#include "qscatter/parallel.h"
#include "qscatter/tomography.h"

namespace qscatter {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvGolden = 0.6180339887498949;
constexpr double kPoleGap = 1e-3;
constexpr double kSamePoint = 1e-9;
constexpr int kMaxGoldenIterations = 200;
constexpr int kMaxSweeps = 200;

double finite_or_inf(double v) {
    return std::isnan(v) ? kInf : v;
}

struct GoldenResult {
    double x;
    double fx;
    int iterations;
};

// Golden-section search on [a, b]; stops when the bracket is at the level of
// floating-point resolution of x.
GoldenResult golden_section(const std::function<double(double)> &f, double a, double b) {
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = finite_or_inf(f(c));
    double fd = finite_or_inf(f(d));
    int it = 0;
    while (it < kMaxGoldenIterations && (b - a) > 1e-15 * (std::abs(a) + std::abs(b))) {
        ++it;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = finite_or_inf(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = finite_or_inf(f(d));
        }
    }
    return fc < fd ? GoldenResult{c, fc, it} : GoldenResult{d, fd, it};
}

// Near a smooth minimum, value comparisons stop resolving x at about
// sqrt(eps). Fitting a parabola through a symmetric stencil much wider than
// that recovers the stationary point to ~1e-10.
double parabolic_polish(const std::function<double(double)> &f, double x, double lower, double upper, int *iterations) {
    for (int pass = 0; pass < 3; ++pass) {
        double h = 1e-5 * std::max(std::abs(x), 1e-3);
        double fm = f(x - h);
        double f0 = f(x);
        double fp = f(x + h);
        ++*iterations;
        double curvature = fp - 2 * f0 + fm;
        if (!(curvature > 0) || !std::isfinite(curvature)) {
            break;
        }
        double next = x - h * (fp - fm) / (2 * curvature);
        if (!(next > lower && next < upper)) {
            break;
        }
        x = next;
    }
    return x;
}

bool near_pole(double kappa1, double kappa2, double gap) {
    return std::abs(kappa1 - kappa2) < gap * std::max(kappa1, kappa2);
}

}  // namespace

std::string_view to_string(FigureOfMerit kind) {
    switch (kind) {
        case FigureOfMerit::kDetMt:
            return "detMt";
        case FigureOfMerit::kLambdaT:
            return "lambda_t";
        case FigureOfMerit::kLambdaR:
            return "lambda_r";
        case FigureOfMerit::kDetMr:
            return "detMr";
        case FigureOfMerit::kAbsDetNCubeRoot:
            return "absDetN_cuberoot";
    }
    return "unknown";
}

double det_Mt(double omega) {
    require_positive_omega(omega);
    double w2 = omega * omega;
    double u = 1 + w2;
    double v = 1 + 9 * w2;
    return u * u * u * v * v / (4 * w2 * w2);
}

double lambda_t(double omega) {
    require_positive_omega(omega);
    double w2 = omega * omega;
    return (1 + w2) * (1 + 9 * w2) / (4 * w2);
}

double lambda_r(double omega) {
    require_positive_omega(omega);
    double w2 = omega * omega;
    return (1 + w2) * (1 + 9 * w2) / (2 * w2);
}

double det_Mr(double omega) {
    require_positive_omega(omega);
    auto scheme = strategy1_frame_scheme(
        UnitDirection::z_axis(), UnitDirection::x_axis(), Kappa(1 / omega), Channel::kReflection);
    return std::abs(1 / scheme.matrix.determinant());
}

double det_N(double omega1, double omega2) {
    require_positive_omega(omega1);
    require_positive_omega(omega2);
    if (near_pole(omega1, omega2, kSamePoint)) {
        throw DegenerateSchemeError("det N has a pole at omega1 == omega2");
    }
    double a = omega1 * omega1;
    double b = omega2 * omega2;
    double num = (1 + a) * (1 + a) * (1 + 9 * a) * (1 + 9 * a) * (1 + b) * (1 + 9 * b);
    return -num / (4 * a * omega1 * omega2 * (omega1 - omega2));
}

double abs_det_n_cuberoot(double kappa1, double kappa2) {
    return std::cbrt(std::abs(det_N(omega(kappa1), omega(kappa2))));
}

double figure_of_merit(FigureOfMerit kind, double kappa) {
    double w = omega(kappa);
    switch (kind) {
        case FigureOfMerit::kDetMt:
            return det_Mt(w);
        case FigureOfMerit::kLambdaT:
            return lambda_t(w);
        case FigureOfMerit::kLambdaR:
            return lambda_r(w);
        case FigureOfMerit::kDetMr:
            return det_Mr(w);
        case FigureOfMerit::kAbsDetNCubeRoot:
            break;
    }
    throw std::invalid_argument("figure of merit " + std::string(to_string(kind)) + " is not one-dimensional");
}

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> out(n);
    double step = n > 1 ? std::log(hi / lo) / (n - 1) : 0;
    for (int i = 0; i < n; ++i) {
        out[i] = lo * std::exp(step * i);
    }
    if (n > 1) {
        out.back() = hi;
    }
    return out;
}

std::vector<double> lin_space(double lo, double hi, int n) {
    std::vector<double> out(n);
    double step = n > 1 ? (hi - lo) / (n - 1) : 0;
    for (int i = 0; i < n; ++i) {
        out[i] = lo + step * i;
    }
    if (n > 1) {
        out.back() = hi;
    }
    return out;
}

Optimum1D minimize_1d(const std::function<double(double)> &f, double lo, double hi, const SearchOptions &options) {
    if (!(lo > 0 && hi > lo && std::isfinite(hi))) {
        throw std::invalid_argument("search range must satisfy 0 < lo < hi < inf");
    }
    if (options.grid_points < 3) {
        throw std::invalid_argument("search grid needs at least 3 points");
    }
    auto grid = log_space(lo, hi, options.grid_points);
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), options.workers, [&](size_t i) { values[i] = finite_or_inf(f(grid[i])); });

    size_t best = std::min_element(values.begin(), values.end()) - values.begin();
    if (best == 0 || best + 1 == grid.size()) {
        throw NoInteriorMinimumError(
            "grid minimum at the boundary kappa=" + std::to_string(grid[best]) + " of [" + std::to_string(lo) + ", " +
            std::to_string(hi) + "]");
    }
    double lower = grid[best - 1];
    double upper = grid[best + 1];
    auto golden = golden_section(f, lower, upper);
    int iterations = golden.iterations;
    double x = parabolic_polish(f, golden.x, lower, upper, &iterations);
    return {x, f(x), lower, upper, options.grid_points, iterations};
}

Optimum1D minimize_1d(FigureOfMerit kind, double lo, double hi, const SearchOptions &options) {
    return minimize_1d([kind](double kappa) { return figure_of_merit(kind, kappa); }, lo, hi, options);
}

void KappaBox::validate() const {
    auto ok = [](double a, double b) { return a > 0 && b > a && std::isfinite(b); };
    if (!ok(kappa1_lo, kappa1_hi) || !ok(kappa2_lo, kappa2_hi)) {
        throw std::invalid_argument("kappa box must satisfy 0 < lo < hi < inf on both axes");
    }
}

Optimum2D minimize_2d(const KappaBox &box, const SearchOptions &options) {
    box.validate();
    int n = options.grid_points;
    if (n < 3) {
        throw std::invalid_argument("search grid needs at least 3 points per axis");
    }
    auto k1 = lin_space(box.kappa1_lo, box.kappa1_hi, n);
    auto k2 = lin_space(box.kappa2_lo, box.kappa2_hi, n);
    auto objective = [](double a, double b) {
        if (near_pole(a, b, kPoleGap)) {
            return kInf;
        }
        return abs_det_n_cuberoot(a, b);
    };

    std::vector<double> values(static_cast<size_t>(n) * n);
    parallel_for(values.size(), options.workers, [&](size_t idx) { values[idx] = objective(k1[idx / n], k2[idx % n]); });
    size_t best = std::min_element(values.begin(), values.end()) - values.begin();
    int i = static_cast<int>(best / n);
    int j = static_cast<int>(best % n);
    if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
        throw NoInteriorMinimumError("grid minimum of |det N|^(1/3) on the box boundary");
    }

    double x = k1[i];
    double y = k2[j];
    double step1 = k1[1] - k1[0];
    double step2 = k2[1] - k2[0];
    int iterations = 0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double x_prev = x;
        double y_prev = y;
        auto gx = golden_section(
            [&](double a) { return objective(a, y); }, std::max(box.kappa1_lo, x - step1), std::min(box.kappa1_hi, x + step1));
        x = gx.x;
        auto gy = golden_section(
            [&](double b) { return objective(x, b); }, std::max(box.kappa2_lo, y - step2), std::min(box.kappa2_hi, y + step2));
        y = gy.x;
        iterations += gx.iterations + gy.iterations;
        if (std::abs(x - x_prev) < 1e-12 * x && std::abs(y - y_prev) < 1e-12 * y) {
            break;
        }
    }
    return {x, y, objective(x, y), box, n, iterations};
}

std::vector<GridPoint> det_n_grid(const KappaBox &box, int resolution, int workers) {
    box.validate();
    if (resolution < 2) {
        throw std::invalid_argument("grid resolution must be at least 2");
    }
    auto k1 = lin_space(box.kappa1_lo, box.kappa1_hi, resolution);
    auto k2 = lin_space(box.kappa2_lo, box.kappa2_hi, resolution);
    std::vector<GridPoint> out(static_cast<size_t>(resolution) * resolution);
    parallel_for(out.size(), workers, [&](size_t idx) {
        double a = k1[idx / resolution];
        double b = k2[idx % resolution];
        double value = near_pole(a, b, kSamePoint) ? kInf : abs_det_n_cuberoot(a, b);
        out[idx] = {a, b, value};
    });
    return out;
}

}  // namespace qscatter
