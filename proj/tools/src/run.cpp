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
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qvolume/errors.hpp"
#include "qvolume/matrix_io.hpp"
#include "qvolume/operator_basis.hpp"
#include "qvolume/partial_transpose.hpp"
#include "qvolume/positivity.hpp"
#include "qvolume/predicates.hpp"
#include "qvolume/samplers.hpp"
#include "qvolume_cli/cli.hpp"

namespace qvolume::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Throttled progress lines on the log stream; callable from worker threads.
class ProgressLog {
   public:
    ProgressLog(std::ostream &log, bool enabled, std::string unit)
        : log_(log), enabled_(enabled), unit_(std::move(unit)), start_(Clock::now()), last_(start_) {
    }

    RunControl control(const std::atomic<bool> *cancel) {
        RunControl c;
        c.cancel = cancel;
        if (enabled_) {
            c.progress = [this](std::uint64_t done, std::uint64_t total) { report(done, total); };
        }
        return c;
    }

    void report(std::uint64_t done, std::uint64_t total) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto now = Clock::now();
        if (done < total && now - last_ < std::chrono::seconds(2)) {
            return;
        }
        last_ = now;
        const double elapsed = std::chrono::duration<double>(now - start_).count();
        char buf[160];
        std::snprintf(buf, sizeof buf, "qvolume: %5.1f%%  %llu/%llu %s  %.3g %s/s\n",
                      total == 0 ? 100.0 : 100.0 * static_cast<double>(done) / static_cast<double>(total),
                      static_cast<unsigned long long>(done), static_cast<unsigned long long>(total), unit_.c_str(),
                      elapsed > 0.0 ? static_cast<double>(done) / elapsed : 0.0, unit_.c_str());
        log_ << buf << std::flush;
    }

    void note(const std::string &line) {
        if (enabled_) {
            std::lock_guard<std::mutex> lock(mutex_);
            log_ << "qvolume: " << line << "\n" << std::flush;
        }
    }

   private:
    std::ostream &log_;
    bool enabled_;
    std::string unit_;
    Clock::time_point start_;
    Clock::time_point last_;
    std::mutex mutex_;
};

struct Output {
    std::string text;
    bool interrupted = false;
};

int resolved_chains(const RunConfig &cfg) {
    if (cfg.chains > 0) {
        return cfg.chains;
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

std::string resolved_family(const RunConfig &cfg) {
    if (!cfg.family.empty()) {
        return cfg.family;
    }
    return cfg.command == Command::scan_curve ? "two_qubit" : "bell_diagonal";
}

std::string resolved_format(const RunConfig &cfg, std::initializer_list<const char *> allowed) {
    const std::string format = !cfg.format.empty() ? cfg.format
                               : cfg.command == Command::scan_curve ? "csv"
                                                                    : "json";
    for (const char *a : allowed) {
        if (format == a) {
            return format;
        }
    }
    std::string list;
    for (const char *a : allowed) {
        list += list.empty() ? a : std::string(", ") + a;
    }
    throw InvalidConfig(std::string("--format ") + format + " is not available for " + command_name(cfg.command) +
                        " (use " + list + ")");
}

PredicateOptions predicate_options(const RunConfig &cfg) {
    PredicateOptions o;
    o.psd_tol = cfg.psd_tol;
    o.bell_tol = cfg.tol;
    o.optimizer.restarts = cfg.restarts;
    o.scan_settings = cfg.scan_settings;
    return o;
}

HitAndRunConfig walk_config(const RunConfig &cfg, int chains) {
    HitAndRunConfig h;
    h.total_samples = cfg.samples;
    h.block_size = cfg.block_size.value_or(default_block_size(cfg.samples, chains));
    h.chains = chains;
    h.burn_in = cfg.burn_in;
    h.psd_tol = cfg.psd_tol;
    h.seed = cfg.seed;
    return h;
}

Json diagnostics_json(const WalkDiagnostics &d) {
    Json j;
    j["steps"] = d.steps;
    j["psd_evaluations"] = d.psd_evaluations;
    j["mean_draws_per_step"] = d.mean_draws_per_step();
    j["degenerate_directions"] = d.degenerate_directions;
    return j;
}

void write_block_csv(const std::string &path, const HitAndRunResult &res) {
    std::ofstream f(path);
    if (!f) {
        throw InvalidConfig("cannot open '" + path + "' for writing");
    }
    f << "block";
    for (const auto &e : res.estimates) {
        f << "," << e.predicate_name;
    }
    f << "\n";
    const size_t n = res.block_fractions.empty() ? 0 : res.block_fractions.front().size();
    for (size_t b = 0; b < n; ++b) {
        f << b;
        for (const auto &fractions : res.block_fractions) {
            f << "," << format_double(fractions[b]);
        }
        f << "\n";
    }
}

// Shared by ratio and bell: one estimate of one predicate.
struct Estimate {
    RatioEstimate est;
    std::optional<WalkDiagnostics> diagnostics;
    std::uint64_t block_size = 0;
    std::size_t phases = 0;
    int chains = 1;
    bool interrupted = false;
    double wall_seconds = 0.0;
};

Estimate estimate(const RunConfig &cfg, const std::string &predicate_name, ProgressLog &progress,
                  const std::atomic<bool> *cancel) {
    const auto start = Clock::now();
    auto family = make_family(resolved_family(cfg));
    auto predicate = make_predicate(predicate_name, family, predicate_options(cfg));
    Estimate out;
    if (cfg.sampler == Method::multiphase) {
        if (!cfg.blocks_path.empty()) {
            throw InvalidConfig("--blocks-out is only available with --sampler hitrun");
        }
        MultiphaseConfig m = make_multiphase_config(*family, cfg.samples, cfg.reps, cfg.phases);
        m.min_hits = cfg.min_hits;
        m.psd_tol = cfg.psd_tol;
        m.validate();
        out.phases = m.radii.size();
        progress.note(std::string(family->name()) + ": " + std::to_string(m.radii.size()) + " phases x " +
                      std::to_string(cfg.reps) + " repetitions x " + std::to_string(cfg.samples) + " draws");
        out.est = multiphase_estimate(family, *predicate, m, cfg.seed, progress.control(cancel));
        out.interrupted = cancel != nullptr && cancel->load();
    } else {
        out.chains = resolved_chains(cfg);
        const HitAndRunConfig h = walk_config(cfg, out.chains);
        h.validate();
        out.block_size = h.block_size;
        const TargetPredicate *preds[] = {predicate.get()};
        HitAndRunResult res = hit_and_run_ratio(family, preds, h, progress.control(cancel));
        if (!cfg.blocks_path.empty()) {
            write_block_csv(cfg.blocks_path, res);
        }
        out.est = std::move(res.estimates.front());
        out.diagnostics = res.diagnostics;
        out.interrupted = res.cancelled;
    }
    out.wall_seconds = seconds_since(start);
    const double hits = out.est.mean * static_cast<double>(out.est.samples);
    char summary[96];
    std::snprintf(summary, sizeof summary, ": ratio %.6g +- %.3g", out.est.mean, out.est.sigma);
    progress.note(out.est.predicate_name + summary + (cfg.sampler == Method::hitrun
                                                      ? " (" + std::to_string(std::llround(hits)) + " hits)"
                                                      : std::string()));
    return out;
}

Output ratio_command(const RunConfig &cfg, ProgressLog &progress, const std::atomic<bool> *cancel) {
    const std::string format = resolved_format(cfg, {"json", "csv"});
    const std::string predicate = cfg.predicate.empty() ? "ppt" : cfg.predicate;
    const Estimate e = estimate(cfg, predicate, progress, cancel);
    const std::string family = resolved_family(cfg);
    const char *sampler = method_name(cfg.sampler);

    std::ostringstream os;
    if (format == "csv") {
        os << "schema_version,command,family,sampler,predicate,samples,blocks,ratio_mean,ratio_sigma,seed,chains,"
              "cancelled,wall_seconds\n";
        os << kSchemaVersion << ",ratio," << family << "," << sampler << "," << predicate << "," << e.est.samples
           << "," << e.est.blocks_or_reps << "," << format_double(e.est.mean) << "," << format_double(e.est.sigma)
           << "," << cfg.seed << "," << e.chains << "," << (e.interrupted ? "true" : "false") << ","
           << format_double(e.wall_seconds) << "\n";
        return {os.str(), e.interrupted};
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "ratio";
    j["family"] = family;
    j["sampler"] = sampler;
    j["predicate"] = predicate;
    j["samples"] = e.est.samples;
    j["blocks"] = e.est.blocks_or_reps;
    if (cfg.sampler == Method::hitrun) {
        j["block_size"] = e.block_size;
    } else {
        j["samples_per_phase"] = cfg.samples;
        j["phases"] = e.phases;
        j["repetitions"] = cfg.reps;
    }
    j["ratio_mean"] = e.est.mean;
    j["ratio_sigma"] = e.est.sigma;
    j["seed"] = cfg.seed;
    j["chains"] = e.chains;
    j["psd_tol"] = cfg.psd_tol;
    j["tol"] = cfg.tol;
    j["cancelled"] = e.interrupted;
    j["wall_seconds"] = e.wall_seconds;
    if (e.diagnostics) {
        j["diagnostics"] = diagnostics_json(*e.diagnostics);
    }
    if (e.est.per_phase) {
        Json phases = Json::array();
        for (const auto &p : *e.est.per_phase) {
            phases.push_back({{"radius", p.radius},
                              {"samples", p.samples},
                              {"states", p.states},
                              {"target_hits", p.target_hits}});
        }
        j["per_phase"] = std::move(phases);
    }
    return {j.dump(2) + "\n", e.interrupted};
}

Output bell_command(const RunConfig &cfg, ProgressLog &progress, const std::atomic<bool> *cancel) {
    const std::string format = resolved_format(cfg, {"json", "csv"});
    const std::string predicate = cfg.predicate.empty() ? "chsh" : cfg.predicate;
    if (predicate == "ppt" || predicate == "true") {
        throw InvalidConfig("bell needs a Bell predicate (chsh, 12m, cg-body, cg, cg-opt, cg-or-chsh, cg-scan, "
                            "chsh-scan); use ratio for '" + predicate + "'");
    }
    const Estimate e = estimate(cfg, predicate, progress, cancel);
    std::ostringstream os;
    if (format == "csv") {
        os << "schema_version,command,family,predicate,samples,blocks,ratio_mean,ratio_sigma,seed,chains,restarts,"
              "scan_settings,cancelled,wall_seconds\n";
        os << kSchemaVersion << ",bell," << resolved_family(cfg) << "," << predicate << "," << e.est.samples << ","
           << e.est.blocks_or_reps << "," << format_double(e.est.mean) << "," << format_double(e.est.sigma) << ","
           << cfg.seed << "," << e.chains << "," << cfg.restarts << "," << cfg.scan_settings << ","
           << (e.interrupted ? "true" : "false") << "," << format_double(e.wall_seconds) << "\n";
        return {os.str(), e.interrupted};
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "bell";
    j["predicate"] = predicate;
    j["ratio_mean"] = e.est.mean;
    j["ratio_sigma"] = e.est.sigma;
    j["samples"] = e.est.samples;
    j["blocks"] = e.est.blocks_or_reps;
    Json c;
    c["family"] = resolved_family(cfg);
    c["sampler"] = method_name(cfg.sampler);
    c["seed"] = cfg.seed;
    c["chains"] = e.chains;
    if (cfg.sampler == Method::hitrun) {
        c["block_size"] = e.block_size;
    } else {
        c["samples_per_phase"] = cfg.samples;
        c["phases"] = e.phases;
        c["repetitions"] = cfg.reps;
    }
    c["restarts"] = cfg.restarts;
    c["scan_settings"] = cfg.scan_settings;
    c["tol"] = cfg.tol;
    c["psd_tol"] = cfg.psd_tol;
    j["config"] = std::move(c);
    j["cancelled"] = e.interrupted;
    j["wall_seconds"] = e.wall_seconds;
    if (e.diagnostics) {
        j["diagnostics"] = diagnostics_json(*e.diagnostics);
    }
    return {j.dump(2) + "\n", e.interrupted};
}

Output scan_curve_command(const RunConfig &cfg, ProgressLog &progress, const std::atomic<bool> *cancel) {
    const std::string format = resolved_format(cfg, {"csv", "json"});
    if (cfg.sampler != Method::hitrun) {
        throw InvalidConfig("scan-curve samples states by hit-and-run; --sampler multiphase is not supported");
    }
    const auto start = Clock::now();
    auto family = make_family(resolved_family(cfg));
    const std::vector<int> grid = geometric_grid(cfg.scan_settings, cfg.grid_points);
    auto classifier = make_scan_curve_classifier(family, grid, cfg.tol);
    const int chains = resolved_chains(cfg);
    const HitAndRunConfig h = walk_config(cfg, chains);
    HitAndRunResult res = hit_and_run_ratio(family, *classifier, h, progress.control(cancel));
    if (!cfg.blocks_path.empty()) {
        write_block_csv(cfg.blocks_path, res);
    }
    const double wall = seconds_since(start);

    std::ostringstream os;
    if (format == "csv") {
        os << "m,R_CG,R_CHSH,R_CG+CHSH,sigma_CG,sigma_CHSH,sigma_CG+CHSH\n";
        for (size_t g = 0; g < grid.size(); ++g) {
            const auto &e = res.estimates;
            os << grid[g] << "," << format_double(e[3 * g].mean) << "," << format_double(e[3 * g + 1].mean) << ","
               << format_double(e[3 * g + 2].mean) << "," << format_double(e[3 * g].sigma) << ","
               << format_double(e[3 * g + 1].sigma) << "," << format_double(e[3 * g + 2].sigma) << "\n";
        }
        return {os.str(), res.cancelled};
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "scan-curve";
    j["family"] = std::string(family->name());
    j["samples"] = res.estimates.front().samples;
    j["blocks"] = res.estimates.front().blocks_or_reps;
    j["block_size"] = h.block_size;
    j["seed"] = cfg.seed;
    j["chains"] = chains;
    j["tol"] = cfg.tol;
    Json rows = Json::array();
    for (size_t g = 0; g < grid.size(); ++g) {
        const auto &e = res.estimates;
        rows.push_back({{"m", grid[g]},
                        {"r_cg", e[3 * g].mean},
                        {"r_chsh", e[3 * g + 1].mean},
                        {"r_cg_or_chsh", e[3 * g + 2].mean},
                        {"sigma_cg", e[3 * g].sigma},
                        {"sigma_chsh", e[3 * g + 1].sigma},
                        {"sigma_cg_or_chsh", e[3 * g + 2].sigma}});
    }
    j["rows"] = std::move(rows);
    j["cancelled"] = res.cancelled;
    j["wall_seconds"] = wall;
    return {j.dump(2) + "\n", res.cancelled};
}

HermitianMatrix read_input_matrix(const RunConfig &cfg, std::istream &in) {
    ComplexMatrix m;
    if (cfg.in_path.empty()) {
        m = read_matrix(in);
    } else {
        std::ifstream f(cfg.in_path);
        if (!f) {
            throw InvalidConfig("cannot open '" + cfg.in_path + "'");
        }
        m = read_matrix(f);
    }
    return HermitianMatrix(std::move(m));
}

Output check_psd_command(const RunConfig &cfg, std::istream &in) {
    resolved_format(cfg, {"json"});
    const HermitianMatrix a = read_input_matrix(cfg, in);
    const bool psd = is_psd_newton(a, cfg.psd_tol);
    const NewtonCoefficients c = newton_coefficients(power_traces(a, a.dim()), a.dim());
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "check-psd";
    j["n"] = a.dim();
    j["psd"] = psd;
    j["psd_tol"] = cfg.psd_tol;
    j["coefficients"] = c.c;
    j["min_eigenvalue"] = min_eigenvalue(a);
    return {j.dump(2) + "\n", false};
}

Output ppt_check_command(const RunConfig &cfg, std::istream &in) {
    resolved_format(cfg, {"json"});
    const HermitianMatrix rho = read_input_matrix(cfg, in);
    const int n = rho.dim();
    int na = cfg.na;
    int nb = cfg.nb;
    if (na == 0 && nb == 0) {
        for (int a = 2; a * a <= n; ++a) {
            if (n % a == 0) {
                na = a;
            }
        }
        if (na == 0) {
            throw InvalidConfig("cannot split dimension " + std::to_string(n) + " into two factors; pass --na and --nb");
        }
        nb = n / na;
    } else if (na == 0 || nb == 0) {
        const int known = na == 0 ? nb : na;
        if (n % known != 0) {
            throw InvalidPartition(std::to_string(known) + " does not divide the dimension " + std::to_string(n));
        }
        (na == 0 ? na : nb) = n / known;
    }
    if (na * nb != n) {
        throw InvalidPartition("--na " + std::to_string(na) + " x --nb " + std::to_string(nb) +
                               " does not match the dimension " + std::to_string(n));
    }
    const HermitianMatrix pt = partial_transpose(rho, na, nb);
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "ppt-check";
    j["n"] = n;
    j["n_a"] = na;
    j["n_b"] = nb;
    j["state"] = is_psd_newton(rho, cfg.psd_tol);
    j["ppt"] = is_ppt(rho, na, nb, cfg.psd_tol);
    j["psd_tol"] = cfg.psd_tol;
    j["min_eigenvalue_partial_transpose"] = min_eigenvalue(pt);
    return {j.dump(2) + "\n", false};
}

Output basis_dump_command(const RunConfig &cfg) {
    const std::string format = resolved_format(cfg, {"json", "text"});
    auto family = make_family(resolved_family(cfg));
    const CoordinateRadii radii = coordinate_radii(*family);
    std::ostringstream os;
    if (format == "text") {
        os << "# family " << family->name() << "  n=" << family->n() << " (" << family->n_a() << "x" << family->n_b()
           << ")  d=" << family->d() << "\n";
        os << "# rho(a) = I/n + sum_i scale_i a_i G_i\n";
        for (int i = 0; i < family->d(); ++i) {
            const auto k = static_cast<size_t>(i);
            os << "# G_" << i << "  scale=" << format_double(family->coefficient_scale()[k]) << "\n";
            write_matrix(os, family->generators()[k].matrix());
        }
        return {os.str(), false};
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "basis-dump";
    j["family"] = std::string(family->name());
    j["n"] = family->n();
    j["n_a"] = family->n_a();
    j["n_b"] = family->n_b();
    j["d"] = family->d();
    j["inner_radius"] = radii.inner;
    j["outer_radius"] = radii.outer;
    Json gens = Json::array();
    for (int i = 0; i < family->d(); ++i) {
        const auto k = static_cast<size_t>(i);
        const ComplexMatrix &g = family->generators()[k].matrix();
        Json rows = Json::array();
        for (int r = 0; r < g.rows(); ++r) {
            Json row = Json::array();
            for (int c = 0; c < g.cols(); ++c) {
                row.push_back(format_complex(g(r, c)));
            }
            rows.push_back(std::move(row));
        }
        gens.push_back({{"index", i},
                        {"scale", family->coefficient_scale()[k]},
                        {"metric", family->metric_scale()[k]},
                        {"matrix", std::move(rows)}});
    }
    j["generators"] = std::move(gens);
    return {j.dump(2) + "\n", false};
}

}  // namespace

int run(const RunConfig &config, const Streams &io, const std::atomic<bool> *cancel) {
    try {
        const bool sampling =
            config.command == Command::ratio || config.command == Command::bell || config.command == Command::scan_curve;
        ProgressLog progress(io.log, sampling && !config.quiet,
                             config.sampler == Method::multiphase ? "phases" : "states");
        Output result;
        switch (config.command) {
            case Command::ratio:
                result = ratio_command(config, progress, cancel);
                break;
            case Command::bell:
                result = bell_command(config, progress, cancel);
                break;
            case Command::scan_curve:
                result = scan_curve_command(config, progress, cancel);
                break;
            case Command::check_psd:
                result = check_psd_command(config, io.in);
                break;
            case Command::ppt_check:
                result = ppt_check_command(config, io.in);
                break;
            case Command::basis_dump:
                result = basis_dump_command(config);
                break;
        }
        if (config.out_path.empty()) {
            io.out << result.text << std::flush;
        } else {
            std::ofstream f(config.out_path);
            if (!f) {
                throw InvalidConfig("cannot open '" + config.out_path + "' for writing");
            }
            f << result.text;
        }
        if (result.interrupted) {
            io.log << "qvolume: interrupted; the result covers the completed blocks only\n";
            return kExitInterrupted;
        }
        return kExitOk;
    } catch (const InsufficientStatistics &e) {
        io.log << "qvolume: insufficient statistics: " << e.what() << "\n";
        if (cancel != nullptr && cancel->load()) {
            return kExitInterrupted;
        }
        return kExitInsufficientStatistics;
    } catch (const std::exception &e) {
        io.log << "qvolume: error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int main_with_args(const std::vector<std::string> &args, const std::optional<std::string> &env_seed, const Streams &io,
                   const std::atomic<bool> *cancel) {
    ParseResult parsed = parse_command_line(args, env_seed, io.out, io.log);
    if (!parsed.config) {
        return parsed.exit_code;
    }
    return run(*parsed.config, io, cancel);
}

}  // namespace qvolume::cli
