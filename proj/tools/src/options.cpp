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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "qvolume/errors.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/predicates.hpp"
#include "qvolume_cli/cli.hpp"

namespace qvolume::cli {

const char *command_name(Command c) {
    switch (c) {
        case Command::ratio:
            return "ratio";
        case Command::bell:
            return "bell";
        case Command::scan_curve:
            return "scan-curve";
        case Command::check_psd:
            return "check-psd";
        case Command::ppt_check:
            return "ppt-check";
        case Command::basis_dump:
            return "basis-dump";
    }
    return "unknown";
}

std::uint64_t default_block_size(std::uint64_t samples, int chains) {
    const auto c = static_cast<std::uint64_t>(std::max(chains, 1));
    const std::uint64_t per_chain = samples / c;
    const std::uint64_t blocks_per_chain = (10 + c - 1) / c;
    return std::max<std::uint64_t>(1, std::min<std::uint64_t>(1000000, per_chain / blocks_per_chain));
}

std::uint64_t parse_count(const std::string &text) {
    const char *first = text.data();
    const char *last = text.data() + text.size();
    std::uint64_t as_int = 0;
    auto [p, ec] = std::from_chars(first, last, as_int);
    if (ec == std::errc() && p == last) {
        return as_int;
    }
    double as_double = 0.0;
    auto [q, ec2] = std::from_chars(first, last, as_double);
    if (ec2 != std::errc() || q != last || !std::isfinite(as_double) || as_double < 0.0 ||
        as_double != std::floor(as_double) || as_double >= 0x1.0p64) {
        throw InvalidConfig("expected a non-negative integer count such as 1000000 or 1e6, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(as_double);
}

std::vector<int> geometric_grid(int m_max, int points) {
    if (m_max < 1 || points < 1) {
        throw InvalidConfig("scan grid needs m_max >= 1 and at least one point");
    }
    std::vector<int> grid;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
        const int m = static_cast<int>(std::lround(std::pow(static_cast<double>(m_max), t)));
        if (grid.empty() || m > grid.back()) {
            grid.push_back(m);
        }
    }
    if (grid.back() != m_max) {
        grid.push_back(m_max);
    }
    return grid;
}

namespace {

std::uint64_t parse_seed(const std::string &text, const char *origin) {
    std::uint64_t value = 0;
    const char *last = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc() || p != last || text.empty()) {
        throw InvalidConfig(std::string(origin) + ": seed must be an unsigned 64-bit integer, got '" + text + "'");
    }
    return value;
}

std::vector<std::string> family_names() {
    std::vector<std::string> names;
    for (FamilyId id : kAllFamilies) {
        names.emplace_back(family_name(id));
    }
    return names;
}

}  // namespace

ParseResult parse_command_line(const std::vector<std::string> &args, const std::optional<std::string> &env_seed,
                               std::ostream &out, std::ostream &err) {
    CLI::App app{"Volume ratios of sets of quantum states by Monte Carlo sampling."};
    app.name("qvolume");
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a file of key=value lines; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.footer("Environment: QVOLUME_SEED supplies the seed when neither --seed nor the config file sets it.");

    RunConfig cfg;
    std::string sampler = "hitrun";
    std::string samples;
    std::string block_size;
    std::string burn_in;
    std::string min_hits;
    std::string seed;

    app.add_option("--family", cfg.family, "State family [default: two_qubit for scan-curve, bell_diagonal otherwise]")
        ->check(CLI::IsMember(family_names()));
    app.add_option("--sampler", sampler, "Sampler: hitrun or multiphase")
        ->check(CLI::IsMember({"hitrun", "multiphase"}))
        ->capture_default_str();
    app.add_option("--predicate", cfg.predicate,
                   "Target property (ppt, chsh, 12m, cg-body, cg, cg-opt, cg-or-chsh, cg-scan, chsh-scan, true); "
                   "default ppt for ratio and chsh for bell")
        ->check(CLI::IsMember(predicate_names()));
    app.add_option("--samples", samples,
                   "Hit-and-run: total states; multiphase: draws per phase and repetition (accepts 1e7) "
                   "[default: 1000000]");
    app.add_option("--block-size", block_size,
                   "States per block for the hit-and-run error estimate [default: 10^6, reduced so that at least "
                   "ten blocks fit]");
    app.add_option("--burn-in", burn_in, "Hit-and-run steps discarded per chain before recording [default: 0]");
    app.add_option("--phases", cfg.phases, "Multiphase: number of nested balls (0 = max(2, ceil(d ln d)))")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--reps", cfg.reps, "Multiphase: independent repetitions")
        ->check(CLI::Range(2, 1 << 30))
        ->capture_default_str();
    app.add_option("--min-hits", min_hits, "Multiphase: minimum states per phase for a repetition to count [default: 10]");
    app.add_option("--chains", cfg.chains, "Hit-and-run chains, one thread each (0 = available parallelism)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--seed", seed, "Random seed [default: QVOLUME_SEED, else 1]");
    app.add_option("--tol", cfg.tol, "Tolerance of the Bell-violation tests")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--psd-tol", cfg.psd_tol, "Tolerance of the positivity tests")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--restarts", cfg.restarts, "Collins-Gisin optimizer restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--scan-settings", cfg.scan_settings, "Random settings per state for cg-scan / chsh-scan; "
                                                         "largest m of scan-curve")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--grid-points", cfg.grid_points, "scan-curve: points of the geometric m grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--format", cfg.format, "json or csv (basis-dump: json or text) [default: csv for scan-curve, "
                                           "json otherwise]")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", cfg.out_path, "Write the result to this file instead of standard output");
    app.add_option("--blocks-out", cfg.blocks_path, "Hit-and-run: write per-block fractions as CSV to this file");
    app.add_option("--in", cfg.in_path, "check-psd / ppt-check: matrix file [default: standard input]");
    app.add_option("--na", cfg.na, "ppt-check: dimension of subsystem A (transposed)")->check(CLI::PositiveNumber);
    app.add_option("--nb", cfg.nb, "ppt-check: dimension of subsystem B")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", cfg.quiet, "No progress messages on standard error");

    const std::pair<const char *, const char *> commands[] = {
        {"ratio", "Estimate the volume fraction of states with the target property (default: PPT)"},
        {"bell", "Estimate the fraction of states violating a Bell inequality (default: CHSH)"},
        {"scan-curve", "CSV of CG / CHSH / union detection fractions against the number m of random settings"},
        {"check-psd", "Positivity test of a unit-trace Hermitian matrix in the matrix text format"},
        {"ppt-check", "Positive-partial-transpose test of a bipartite matrix (--na, --nb)"},
        {"basis-dump", "Print the operator basis and radii of a state family"},
    };
    for (const auto &[name, help] : commands) {
        app.add_subcommand(name, help)->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        ParseResult r;
        // Help and version requests exit 0; every usage error is a configuration error.
        r.exit_code = app.exit(e, out, err) == 0 ? kExitOk : kExitConfigError;
        return r;
    }

    try {
        const std::string chosen = app.get_subcommands().front()->get_name();
        for (Command c : {Command::ratio, Command::bell, Command::scan_curve, Command::check_psd, Command::ppt_check,
                          Command::basis_dump}) {
            if (chosen == command_name(c)) {
                cfg.command = c;
            }
        }
        cfg.sampler = sampler == "multiphase" ? Method::multiphase : Method::hitrun;
        if (!samples.empty()) {
            cfg.samples = parse_count(samples);
        }
        if (!block_size.empty()) {
            cfg.block_size = parse_count(block_size);
        }
        if (!burn_in.empty()) {
            cfg.burn_in = parse_count(burn_in);
        }
        if (!min_hits.empty()) {
            cfg.min_hits = parse_count(min_hits);
        }
        if (!seed.empty()) {
            cfg.seed = parse_seed(seed, "--seed");
        } else if (env_seed.has_value() && !env_seed->empty()) {
            cfg.seed = parse_seed(*env_seed, "QVOLUME_SEED");
        }
    } catch (const InvalidConfig &e) {
        err << "qvolume: " << e.what() << "\n";
        return {std::nullopt, kExitConfigError};
    }
    return {cfg, kExitOk};
}

}  // namespace qvolume::cli
