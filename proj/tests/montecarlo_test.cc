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

#include "qscatter/montecarlo.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qscatter/errors.h"

namespace qscatter {
namespace {

const double kSqrt3 = std::sqrt(3.0);

std::array<UnitDirection, 3> lab_axes() {
    return {UnitDirection::x_axis(), UnitDirection::y_axis(), UnitDirection::z_axis()};
}

SchemeMatrix parallel_t(Kappa k) {
    return strategy1_parallel_scheme(lab_axes(), k, Channel::kTransmission);
}

SchemeMatrix frame_t(Kappa k) {
    return strategy1_frame_scheme(UnitDirection::z_axis(), UnitDirection::x_axis(), k, Channel::kTransmission);
}

size_t argmin(const std::vector<SweepRow> &rows) {
    return std::min_element(rows.begin(), rows.end(),
                            [](const SweepRow &a, const SweepRow &b) { return a.mean_error < b.mean_error; }) -
           rows.begin();
}

TEST(CounterRng, DeterministicAndSplittable) {
    CounterRng a(7);
    CounterRng b(7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a(), b());
    }
    CounterRng root(7);
    CounterRng c1 = root.split(1);
    CounterRng c1_again = root.split(1);
    CounterRng c2 = root.split(2);
    EXPECT_EQ(c1(), c1_again());
    EXPECT_NE(root.split(1)(), c2());
    EXPECT_NE(CounterRng(7)(), CounterRng(8)());
}

TEST(CounterRng, OutputLooksUniform) {
    CounterRng rng(3);
    const int n = 200000;
    int buckets[16] = {};
    for (int i = 0; i < n; ++i) {
        ++buckets[rng() >> 60];
    }
    double expected = n / 16.0;
    double chi2 = 0;
    for (int b : buckets) {
        chi2 += (b - expected) * (b - expected) / expected;
    }
    EXPECT_LT(chi2, 45);  // 15 dof, far tail
}

TEST(Sampling, UniformBallAndSphere) {
    CounterRng rng(11);
    double mean_r3 = 0;
    Vec3 mean = Vec3::Zero();
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        auto v = sample_uniform_ball(rng);
        EXPECT_LE(v.norm(), 1.0);
        mean_r3 += std::pow(v.norm(), 3);
        mean += v.vec();
        EXPECT_NEAR(sample_uniform_sphere(rng).vec().norm(), 1, 1e-12);
    }
    // r^3 is uniform on [0, 1]: mean 1/2, sd 1/sqrt(12 n).
    EXPECT_NEAR(mean_r3 / n, 0.5, 5 / std::sqrt(12.0 * n));
    EXPECT_LT((mean / n).norm(), 0.02);
}

TEST(SampleShots, FreeLimitTransmitsEverything) {
    UnitDirection n = UnitDirection::normalized(Vec3(1, -1, 2));
    CounterRng rng(1);
    auto counts = sample_shots({n, n, Kappa(1e12), Channel::kTransmission}, BlochVector(0.3, 0.1, -0.2), 5000, rng);
    EXPECT_EQ(counts.transmitted_parallel, 5000u);
    EXPECT_EQ(counts.total(), 5000u);
}

TEST(SampleShots, RejectsZeroShots) {
    CounterRng rng(1);
    EXPECT_THROW(sample_shots({UnitDirection::z_axis(), UnitDirection::z_axis(), Kappa(1.0), Channel::kTransmission},
                              BlochVector::zero(), 0, rng),
                 std::invalid_argument);
}

TEST(SampleShots, WithinFiveSigmaAtOneMillion) {
    const std::uint64_t shots = 1000000;
    CounterRng master(2024);
    for (int trial = 0; trial < 20; ++trial) {
        CounterRng rng = master.split(trial);
        UnitDirection ni = sample_uniform_sphere(rng);
        UnitDirection nf = sample_uniform_sphere(rng);
        BlochVector v = sample_uniform_ball(rng);
        Kappa kappa(0.3 + 0.4 * trial);
        auto p = outcome_probabilities(ni, nf, kappa, v);
        auto c = sample_shots({ni, nf, kappa, Channel::kTransmission}, v, shots, rng);
        ASSERT_EQ(c.total(), shots);
        std::array<double, 4> probs{p.transmitted_parallel, p.transmitted_antiparallel, p.reflected_parallel,
                                    p.reflected_antiparallel};
        std::array<std::uint64_t, 4> counts{c.transmitted_parallel, c.transmitted_antiparallel, c.reflected_parallel,
                                            c.reflected_antiparallel};
        for (int k = 0; k < 4; ++k) {
            double sigma = std::sqrt(shots * probs[k] * (1 - probs[k]));
            EXPECT_LE(std::abs(counts[k] - shots * probs[k]), 5 * sigma + 1e-9) << trial << " outcome " << k;
        }
    }
}

TEST(PlanRuns, MomentumSchemeNeedsTwoRuns) {
    auto scheme = strategy2_scheme(UnitDirection::z_axis(), UnitDirection::x_axis(), Kappa(1.51), Kappa(5.13));
    auto plan = plan_runs(scheme);
    EXPECT_EQ(plan.runs.size(), 2u);
    EXPECT_EQ(plan.row_run[0], plan.row_run[1]);
    EXPECT_EQ(plan_runs(parallel_t(Kappa(2.0))).runs.size(), 3u);
}

TEST(EstimateAndReconstruct, ExactProbabilitiesGiveZeroError) {
    ExperimentPlan plan;
    plan.scheme = frame_t(Kappa(1.98));
    plan.exact = true;
    plan.replicas = 5;
    auto result = estimate_and_reconstruct(plan, BlochVector(0.1, 0.5, -0.3));
    EXPECT_LT(result.report.mean_error, 1e-12);
    EXPECT_EQ(result.report.clip_rate, 0);
}

TEST(EstimateAndReconstruct, DeterministicAcrossWorkerCounts) {
    ExperimentPlan plan;
    plan.scheme = strategy2_scheme(UnitDirection::z_axis(), UnitDirection::x_axis(), Kappa(1.51), Kappa(5.13));
    plan.seed = 42;
    plan.replicas = 64;
    plan.shots_per_setup = 2000;
    BlochVector v(0.4, -0.2, 0.3);
    plan.workers = 1;
    auto a = estimate_and_reconstruct(plan, v);
    plan.workers = 4;
    auto b = estimate_and_reconstruct(plan, v);
    auto c = estimate_and_reconstruct(plan, v);
    ASSERT_EQ(a.report.per_replica_errors.size(), b.report.per_replica_errors.size());
    for (size_t r = 0; r < a.estimated_probabilities.size(); ++r) {
        EXPECT_EQ(a.estimated_probabilities[r], b.estimated_probabilities[r]);
        EXPECT_EQ(b.estimated_probabilities[r], c.estimated_probabilities[r]);
    }
    EXPECT_EQ(a.report.mean_error, b.report.mean_error);
    EXPECT_EQ(a.report.std_error, c.report.std_error);
}

TEST(EstimateAndReconstruct, ReportInvariants) {
    ExperimentPlan plan;
    plan.scheme = parallel_t(Kappa(kSqrt3));
    plan.shots_per_setup = 200;
    plan.replicas = 100;
    auto r = estimate_and_reconstruct(plan, BlochVector(0, 0, 0.95)).report;
    EXPECT_GE(r.mean_error, 0);
    EXPECT_GE(r.std_error, 0);
    EXPECT_DOUBLE_EQ(r.mean_trace_distance, r.mean_error / 2);
    EXPECT_GE(r.clip_rate, 0);
    EXPECT_LE(r.clip_rate, 1);
    EXPECT_LE(r.mean_error, r.mean_raw_error + 1e-15);
}

TEST(EstimateAndReconstruct, PropagatesDegenerateScheme) {
    ExperimentPlan plan;
    plan.scheme = parallel_t(Kappa(2.0));
    plan.scheme.matrix.row(2).setZero();
    EXPECT_THROW(estimate_and_reconstruct(plan, BlochVector::zero()), DegenerateSchemeError);
    plan.scheme = parallel_t(Kappa(2.0));
    plan.shots_per_setup = 0;
    EXPECT_THROW(estimate_and_reconstruct(plan, BlochVector::zero()), std::invalid_argument);
}

double mean_error_at(std::uint64_t shots, std::uint64_t seed) {
    ExperimentPlan plan;
    plan.scheme = parallel_t(Kappa(kSqrt3));
    plan.shots_per_setup = shots;
    plan.replicas = 200;
    plan.seed = seed;
    return estimate_and_reconstruct(plan, BlochVector(0.2, -0.3, 0.1)).report.mean_error;
}

TEST(EstimateAndReconstruct, ErrorScalesAsInverseSqrtShots) {
    double e1 = mean_error_at(10000, 5);
    double e4 = mean_error_at(40000, 6);
    EXPECT_NEAR(e4 / e1, 0.5, 0.1);
}

TEST(EstimateAndReconstruct, ErrorDecreasesWithShots) {
    double previous = INFINITY;
    for (std::uint64_t shots : {100u, 1000u, 10000u, 100000u}) {
        double e = mean_error_at(shots, 9);
        EXPECT_LT(e, previous);
        previous = e;
    }
}

TEST(EstimateAndReconstruct, ClipRateVanishesForInteriorStates) {
    ExperimentPlan plan;
    plan.scheme = frame_t(Kappa(1.98));
    plan.replicas = 200;
    BlochVector v(0.5, 0.5, 0.5);  // |v| ~ 0.87
    plan.shots_per_setup = 100;
    double low = estimate_and_reconstruct(plan, v).report.clip_rate;
    plan.shots_per_setup = 1000000;
    double high = estimate_and_reconstruct(plan, v).report.clip_rate;
    EXPECT_GT(low, 0);
    EXPECT_EQ(high, 0);
}

TEST(Sweep, OptimumBeatsFarSettings) {
    std::vector<double> kappas{0.4, kSqrt3, 10.0};
    auto rows = error_vs_kappa_sweep(parallel_t, kappas, {10000, 200, 1, 1});
    EXPECT_LT(rows[1].mean_error, rows[0].mean_error);
    EXPECT_LT(rows[1].mean_error, rows[2].mean_error);
}

TEST(Sweep, ParallelSchemeArgminAtSqrt3) {
    std::vector<double> kappas{0.5, 1.0, kSqrt3, 3.0, 6.0};
    auto rows = error_vs_kappa_sweep(parallel_t, kappas, {100000, 200, 2, 2});
    EXPECT_EQ(argmin(rows), 2u);
}

TEST(Sweep, FrameSchemeArgminCellContainsOptimum) {
    std::vector<double> kappas{0.5, 1.0, 1.98316, 4.0, 8.0};
    auto rows = error_vs_kappa_sweep(frame_t, kappas, {100000, 200, 3, 2});
    EXPECT_EQ(argmin(rows), 2u);
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
    std::vector<double> kappas{1.0, 2.0};
    auto a = error_vs_kappa_sweep(parallel_t, kappas, {1000, 50, 4, 1});
    auto b = error_vs_kappa_sweep(parallel_t, kappas, {1000, 50, 4, 3});
    for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].mean_error, b[i].mean_error);
        EXPECT_EQ(a[i].clip_rate, b[i].clip_rate);
    }
}

}  // namespace
}  // namespace qscatter
