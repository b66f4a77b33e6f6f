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

#ifndef QSCATTER_MONTECARLO_H
#define QSCATTER_MONTECARLO_H

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qscatter/tomography.h"

/// Finite-shot simulation of scattering experiments. Each probe ends in one of
/// four exclusive detector outcomes; counts are multinomial, probabilities are
/// estimated as frequencies and fed to the linear inversion.
namespace qscatter {

/// Counter-based generator: the k-th output is a SplitMix64 finalization of
/// key + k * golden-gamma. Streams are split by hashing the parent key with a
/// stream index, so (seed, path of stream indices) fully determines a stream.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) : key_(mix(seed)), counter_(0) {
    }

    /// Independent child stream; does not advance this generator.
    CounterRng split(std::uint64_t stream) const {
        return CounterRng(key_ ^ mix(stream + 0x632be59bd9b4e019ULL), Raw{});
    }

    result_type operator()() {
        return mix(key_ + (++counter_) * kGamma);
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

   private:
    struct Raw {};
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    CounterRng(std::uint64_t key, Raw) : key_(mix(key)), counter_(0) {
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Uniform in the unit ball.
BlochVector sample_uniform_ball(CounterRng &rng);

/// Uniform on the unit sphere.
UnitDirection sample_uniform_sphere(CounterRng &rng);

struct OutcomeCounts {
    std::uint64_t transmitted_parallel = 0;
    std::uint64_t transmitted_antiparallel = 0;
    std::uint64_t reflected_parallel = 0;
    std::uint64_t reflected_antiparallel = 0;

    std::uint64_t total() const {
        return transmitted_parallel + transmitted_antiparallel + reflected_parallel + reflected_antiparallel;
    }

    /// Count of the outcome "detected in `channel` with spin along +n_f".
    std::uint64_t parallel(Channel channel) const {
        return channel == Channel::kTransmission ? transmitted_parallel : reflected_parallel;
    }
};

/// Multinomial draw of `shots` probes over the four outcomes of the setup's
/// (incident, detected, kappa). The setup's channel is not used: every probe
/// lands somewhere. Throws std::invalid_argument for shots == 0.
OutcomeCounts sample_shots(const MeasurementSetup &setup, const BlochVector &v, std::uint64_t shots, CounterRng &rng);

struct ExperimentPlan {
    SchemeMatrix scheme;
    std::uint64_t shots_per_setup = 10000;
    std::uint64_t seed = 0;
    int replicas = 200;
    /// Use exact probabilities instead of sampling (infinite-shot limit).
    bool exact = false;
    int workers = 1;
};

/// Distinct physical runs behind a scheme. Rows that differ only in the
/// detection channel share a run: one probe beam yields both its transmitted
/// and reflected counts.
struct PlanRuns {
    std::vector<MeasurementSetup> runs;
    /// Run index of each scheme row.
    std::vector<int> row_run;
};

PlanRuns plan_runs(const SchemeMatrix &scheme);

/// Frequency estimates of the scheme's three probabilities from one replica.
Vec3 estimate_probabilities(const SchemeMatrix &scheme, const BlochVector &v, std::uint64_t shots, CounterRng &rng);

struct ErrorReport {
    /// Mean and standard deviation of |v_clipped - v_true| over replicas.
    double mean_error = 0;
    double std_error = 0;
    /// Mean of |v_raw - v_true|.
    double mean_raw_error = 0;
    /// Mean of |v_clipped - v_true| / 2.
    double mean_trace_distance = 0;
    double clip_rate = 0;
    int replicas = 0;
    std::vector<double> per_replica_errors;
};

struct MonteCarloResult {
    std::vector<ReconstructionResult> reconstructions;
    std::vector<Vec3> estimated_probabilities;
    ErrorReport report;
};

/// Runs plan.replicas independent experiments on v_true. Replica r draws from
/// CounterRng(seed).split(r); results are reduced in replica order, so output
/// is bitwise identical for any worker count. Propagates DegenerateSchemeError.
MonteCarloResult estimate_and_reconstruct(const ExperimentPlan &plan, const BlochVector &v_true);

/// Summary statistics over per-replica errors, in replica order.
ErrorReport summarize(const std::vector<ReconstructionResult> &results, const std::vector<Vec3> &truths);

using SchemeBuilder = std::function<SchemeMatrix(Kappa)>;

struct SweepOptions {
    std::uint64_t shots = 10000;
    int replicas = 200;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct SweepRow {
    double kappa;
    double mean_error;
    double std_error;
    double mean_trace_distance;
    double clip_rate;
};

/// Mean reconstruction error versus kappa. Replica r uses a true state drawn
/// uniformly from the ball with stream (seed, r, 0) and shot noise from
/// stream (seed, r, 1); both are shared across kappa values.
std::vector<SweepRow> error_vs_kappa_sweep(
    const SchemeBuilder &builder, std::span<const double> kappas, const SweepOptions &options);

}  // namespace qscatter

#endif
