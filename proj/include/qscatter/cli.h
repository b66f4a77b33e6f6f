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

#ifndef QSCATTER_CLI_H
#define QSCATTER_CLI_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qscatter/optimize.h"
#include "qscatter/tomography.h"

namespace qscatter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;

/// Everything a subcommand can consume. Populated from an optional JSON config
/// file (same key names) and then from command-line flags, which win.
struct RunConfig {
    std::string command;

    std::optional<Vec3> bloch;
    /// Row-major 2x2 density matrix, alternative to `bloch`.
    std::optional<std::array<Complex, 4>> density;
    std::optional<Vec3> probs;

    Vec3 incident{0, 0, 1};
    Vec3 detected{1, 0, 0};
    Vec3 first_axis{1, 0, 0};
    std::array<Vec3, 3> axes{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};

    double kappa = 1.7320508075688772;
    double kappa2 = 5.13;
    Channel channel = Channel::kTransmission;
    Strategy strategy = Strategy::kParallel;
    std::string scheme = "parallel_t";

    std::uint64_t shots = 10000;
    int replicas = 200;
    std::uint64_t seed = 0;
    int threads = 1;

    /// Points per axis; 0 selects the subcommand default.
    int grid = 0;
    std::optional<std::array<double, 2>> range;
    KappaBox box{0.2, 10, 0.2, 10};
    std::vector<double> kappas;
    bool sweep = false;

    std::string out = "-";
    /// "csv" or "json"; empty selects the subcommand default.
    std::string format;
    std::string replica_csv;
    std::optional<double> flag_above;
};

/// Loads a JSON config document. Throws std::invalid_argument on unknown keys
/// or malformed values.
RunConfig load_config_file(const std::string &path);

/// Parses argv (without the program name), runs the subcommand and maps
/// errors to exit codes: 2 for configuration errors, 3 for degenerate
/// schemes, 1 for anything else. Errors are a single JSON line on `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Full-precision decimal text ("%.17g"), with "inf"/"-inf"/"nan".
std::string format_number(double value);

}  // namespace qscatter::cli

#endif
