// Copyright 2026 The qvolume Authors
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

#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qvolume/estimation.hpp"

namespace qvolume::cli {

/// Version of the JSON/CSV result layout. Bumped on any incompatible change.
inline constexpr int kSchemaVersion = 1;

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInsufficientStatistics = 2;
inline constexpr int kExitInterrupted = 130;

enum class Command { ratio, bell, scan_curve, check_psd, ppt_check, basis_dump };

const char *command_name(Command c);

/// Everything one invocation needs. Defaults match the command-line defaults.
struct RunConfig {
    Command command = Command::ratio;
    std::string family;  // empty: two_qubit for scan-curve, bell_diagonal otherwise
    Method sampler = Method::hitrun;
    /// Empty selects the command's default: ppt for ratio, chsh for bell.
    std::string predicate;
    /// Hit-and-run: total states. Multiphase: draws per phase and repetition.
    std::uint64_t samples = 1000000;
    /// Unset selects default_block_size(samples, chains).
    std::optional<std::uint64_t> block_size;
    std::uint64_t burn_in = 0;
    int phases = 0;  // 0: max(2, ceil(d ln d))
    int reps = 20;
    std::uint64_t min_hits = 10;
    int chains = 0;  // 0: available hardware parallelism
    std::uint64_t seed = 1;
    double tol = 1e-9;       // Bell-violation thresholds
    double psd_tol = 1e-10;  // positivity tests
    int restarts = 32;
    int scan_settings = 100;
    int grid_points = 12;
    /// json or csv (ratio, bell, scan-curve); json or text (basis-dump).
    /// Empty selects csv for scan-curve and json otherwise.
    std::string format;
    std::string out_path;     // empty: standard output
    std::string blocks_path;  // per-block fractions as CSV (hit-and-run only)
    std::string in_path;      // matrix input for check-psd / ppt-check; empty: standard input
    int na = 0;               // ppt-check partition; 0 = infer from n
    int nb = 0;
    bool quiet = false;       // no progress lines on the log stream
};

/// 10^6 when that leaves every chain at least ceil(10 / chains) blocks (at
/// least ten blocks overall), otherwise the largest size that does.
std::uint64_t default_block_size(std::uint64_t samples, int chains);

/// Accepts plain integers and scientific notation ("1e7", "2.5E6") that
/// denote non-negative integers. Throws InvalidConfig otherwise.
std::uint64_t parse_count(const std::string &text);

/// Geometric grid of up to `points` distinct integers from 1 to m_max.
std::vector<int> geometric_grid(int m_max, int points);

struct ParseResult {
    std::optional<RunConfig> config;  // set when the command should run
    int exit_code = kExitOk;          // otherwise: help (0) or usage error (1)
};

/// Parses a command line (without the program name). Precedence: flags, then
/// the key=value file named by --config, then `env_seed` (QVOLUME_SEED) for the
/// seed, then defaults. Help and usage errors are written to `out` / `err`.
ParseResult parse_command_line(const std::vector<std::string> &args, const std::optional<std::string> &env_seed,
                               std::ostream &out, std::ostream &err);

struct Streams {
    std::istream &in;
    std::ostream &out;  // results, unless config.out_path is set
    std::ostream &log;  // progress and diagnostics
};

/// Executes the command. Returns kExitOk, kExitConfigError (invalid
/// configuration or input), kExitInsufficientStatistics, or kExitInterrupted
/// when `cancel` was raised (partial results are still written when at least
/// two blocks were completed).
int run(const RunConfig &config, const Streams &io, const std::atomic<bool> *cancel = nullptr);

/// parse_command_line followed by run.
int main_with_args(const std::vector<std::string> &args, const std::optional<std::string> &env_seed, const Streams &io,
                   const std::atomic<bool> *cancel = nullptr);

}  // namespace qvolume::cli
