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

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "qscatter/parallel.h"

namespace qscatter {

namespace {

bool same_run(const MeasurementSetup &a, const MeasurementSetup &b) {
    return a.incident.vec() == b.incident.vec() && a.detected.vec() == b.detected.vec() &&
           a.kappa.value() == b.kappa.value();
}

std::vector<ReconstructionResult> unwrap(std::vector<std::optional<ReconstructionResult>> &&slots) {
    std::vector<ReconstructionResult> out;
    out.reserve(slots.size());
    for (auto &slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

}  // namespace

BlochVector sample_uniform_ball(CounterRng &rng) {
    Vec3 direction = sample_uniform_sphere(rng).vec();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    double radius = std::cbrt(uniform(rng));
    return BlochVector(std::min(radius, 1.0) * direction);
}

UnitDirection sample_uniform_sphere(CounterRng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    while (true) {
        Vec3 g(normal(rng), normal(rng), normal(rng));
        if (g.norm() > 1e-6) {
            return UnitDirection::normalized(g);
        }
    }
}

OutcomeCounts sample_shots(const MeasurementSetup &setup, const BlochVector &v, std::uint64_t shots, CounterRng &rng) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    auto p = outcome_probabilities(setup.incident, setup.detected, setup.kappa, v);
    // Sequential conditional binomials give an exact multinomial draw.
    std::array<double, 3> first{p.transmitted_parallel, p.transmitted_antiparallel, p.reflected_parallel};
    std::array<std::uint64_t, 3> counts{};
    std::uint64_t remaining = shots;
    double remaining_p = 1.0;
    for (int k = 0; k < 3; ++k) {
        if (remaining == 0 || remaining_p <= 0) {
            break;
        }
        double q = std::clamp(first[k] / remaining_p, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> binomial(remaining, q);
        counts[k] = binomial(rng);
        remaining -= counts[k];
        remaining_p -= first[k];
    }
    return {counts[0], counts[1], counts[2], remaining};
}

PlanRuns plan_runs(const SchemeMatrix &scheme) {
    PlanRuns out;
    for (const auto &setup : scheme.setups) {
        auto it = std::find_if(out.runs.begin(), out.runs.end(), [&](const auto &run) { return same_run(run, setup); });
        if (it == out.runs.end()) {
            out.row_run.push_back(static_cast<int>(out.runs.size()));
            out.runs.push_back(setup);
        } else {
            out.row_run.push_back(static_cast<int>(it - out.runs.begin()));
        }
    }
    return out;
}

Vec3 estimate_probabilities(const SchemeMatrix &scheme, const BlochVector &v, std::uint64_t shots, CounterRng &rng) {
    auto plan = plan_runs(scheme);
    std::vector<OutcomeCounts> counts;
    counts.reserve(plan.runs.size());
    for (const auto &run : plan.runs) {
        counts.push_back(sample_shots(run, v, shots, rng));
    }
    Vec3 probs;
    for (int row = 0; row < 3; ++row) {
        const auto &c = counts[plan.row_run[row]];
        probs[row] = static_cast<double>(c.parallel(scheme.setups[row].channel)) / static_cast<double>(shots);
    }
    return probs;
}

ErrorReport summarize(const std::vector<ReconstructionResult> &results, const std::vector<Vec3> &truths) {
    ErrorReport report;
    report.replicas = static_cast<int>(results.size());
    if (results.empty()) {
        return report;
    }
    double sum = 0;
    double sum_raw = 0;
    int clipped = 0;
    for (size_t r = 0; r < results.size(); ++r) {
        double e = (results[r].clipped.vec() - truths[r]).norm();
        report.per_replica_errors.push_back(e);
        sum += e;
        sum_raw += (results[r].raw - truths[r]).norm();
        clipped += results[r].was_clipped ? 1 : 0;
    }
    double n = static_cast<double>(results.size());
    report.mean_error = sum / n;
    report.mean_raw_error = sum_raw / n;
    report.mean_trace_distance = report.mean_error / 2;
    report.clip_rate = clipped / n;
    double ss = 0;
    for (double e : report.per_replica_errors) {
        ss += (e - report.mean_error) * (e - report.mean_error);
    }
    report.std_error = results.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    return report;
}

MonteCarloResult estimate_and_reconstruct(const ExperimentPlan &plan, const BlochVector &v_true) {
    if (plan.replicas < 1) {
        throw std::invalid_argument("replicas must be at least 1");
    }
    if (!plan.exact && plan.shots_per_setup == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    // Surfaces a degenerate scheme before any sampling.
    invert_scheme(plan.scheme, plan.scheme.offset);

    size_t n = static_cast<size_t>(plan.replicas);
    std::vector<std::optional<ReconstructionResult>> slots(n);
    std::vector<Vec3> probs(n);
    CounterRng master(plan.seed);
    parallel_for(n, plan.workers, [&](size_t r) {
        CounterRng rng = master.split(r);
        probs[r] = plan.exact ? plan.scheme.predict(v_true)
                              : estimate_probabilities(plan.scheme, v_true, plan.shots_per_setup, rng);
        slots[r] = invert_scheme(plan.scheme, probs[r]);
    });

    MonteCarloResult out;
    out.reconstructions = unwrap(std::move(slots));
    out.estimated_probabilities = std::move(probs);
    out.report = summarize(out.reconstructions, std::vector<Vec3>(n, v_true.vec()));
    return out;
}

std::vector<SweepRow> error_vs_kappa_sweep(
    const SchemeBuilder &builder, std::span<const double> kappas, const SweepOptions &options) {
    if (options.replicas < 1 || options.shots == 0) {
        throw std::invalid_argument("sweep needs at least one replica and one shot");
    }
    size_t n = static_cast<size_t>(options.replicas);
    CounterRng master(options.seed);
    std::vector<Vec3> truths(n);
    for (size_t r = 0; r < n; ++r) {
        CounterRng state_rng = master.split(r).split(0);
        truths[r] = sample_uniform_ball(state_rng).vec();
    }

    std::vector<SweepRow> rows;
    for (double kappa : kappas) {
        SchemeMatrix scheme = builder(Kappa(kappa));
        invert_scheme(scheme, scheme.offset);
        std::vector<std::optional<ReconstructionResult>> slots(n);
        parallel_for(n, options.workers, [&](size_t r) {
            CounterRng noise = master.split(r).split(1);
            Vec3 probs = estimate_probabilities(scheme, BlochVector(truths[r]), options.shots, noise);
            slots[r] = invert_scheme(scheme, probs);
        });
        auto report = summarize(unwrap(std::move(slots)), truths);
        rows.push_back({kappa, report.mean_error, report.std_error, report.mean_trace_distance, report.clip_rate});
    }
    return rows;
}

}  // namespace qscatter
