#pragma once

// Subcommand bodies. Each takes a fully merged RunConfig, writes its report
// to `out`, diagnostics to `err`, and returns the process exit code.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polbell/acceptance.hpp"
#include "polbell/bell.hpp"
#include "polbell/cli/run_config.hpp"
#include "polbell/lhv.hpp"
#include "polbell/prep.hpp"
#include "polbell/state.hpp"
#include "polbell/sweep.hpp"
#include "polbell/tomo.hpp"

namespace polbell::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3 };

namespace detail {

inline std::string num(double v) {
    if (std::abs(v) < 5e-10) v = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

inline std::string num(cplx z) {
    const double im = std::abs(z.imag()) < 5e-10 ? 0.0 : z.imag();
    return num(z.real()) + (im < 0 ? " - " : " + ") + num(std::abs(im)) + "i";
}

inline std::string vec(const StokesVector& s) { return "(" + num(s.s1) + ", " + num(s.s2) + ", " + num(s.s3) + ")"; }

template <std::size_t N>
void print_matrix(std::ostream& os, const char* label, const SquareMatrix<N>& m) {
    os << label << ":\n";
    for (std::size_t r = 0; r < N; ++r) {
        os << "  [";
        for (std::size_t c = 0; c < N; ++c) os << (c ? ", " : "") << num(m(r, c));
        os << "]\n";
    }
}

inline int usage(std::ostream& err, const std::string& why) {
    err << "usage error: " << why << "\n";
    return kExitUsage;
}

}  // namespace detail

inline int cmd_prepare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Family family;
    double param = 0.0;
    try {
        if (!cfg.family) return detail::usage(err, "prepare needs --family product|entangled");
        family = parse_family(*cfg.family);
        param = family_param(cfg, family);
    } catch (const Error& e) {
        return detail::usage(err, e.what());
    }
    const std::string via = cfg.via.value_or("direct");
    if (via != "direct" && via != "recipe") return detail::usage(err, "--via must be direct or recipe");

    const PolPathState target = family_state(family, param);
    const PolPathState state = via == "recipe" ? run_recipe(CircuitRecipe::for_family(family, param)) : target;
    const DensityMatrix4 rho = density(state);
    const DensityMatrix2 rho_pol = partial_trace(rho, Dof::polarization);
    const DensityMatrix2 rho_path = partial_trace(rho, Dof::path);
    const StokesVector s_pol = stokes(rho_pol);
    const StokesVector s_path = stokes(rho_path);

    out << "family: " << to_string(family) << "\n";
    out << (family == Family::product ? "delta: " : "theta: ") << detail::num(param) << " rad\n";
    out << "via: " << via << "\n";
    out << "amplitudes (hx, hy, vx, vy):\n";
    constexpr const char* names[] = {"hx", "hy", "vx", "vy"};
    for (std::size_t i = 0; i < 4; ++i) out << "  " << names[i] << "  " << detail::num(state[i]) << "\n";
    detail::print_matrix(out, "rho_AB", rho.matrix());
    detail::print_matrix(out, "rho_pol", rho_pol.matrix());
    detail::print_matrix(out, "rho_path", rho_path.matrix());
    out << "S_pol: " << detail::vec(s_pol) << "\n";
    out << "S_path: " << detail::vec(s_path) << "\n";
    out << "degree_of_polarization: " << detail::num(degree_of_polarization(s_pol)) << "\n";
    out << "concurrence: " << detail::num(concurrence(state)) << "\n";
    try {
        out << "eta: " << detail::num(correlation_eta(s_pol, s_path)) << "\n";
    } catch (const Error&) {
        out << "eta: undefined (Stokes vector degenerate)\n";
    }
    out << "fidelity_to_target: " << detail::num(fidelity(state, target)) << "\n";
    return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SweepConfig sc;
    std::vector<SweepRow> rows;
    try {
        sc = sweep_config(cfg);
        rows = sweep(sc);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::parse_error)
            return detail::usage(err, e.what());
        throw;
    }
    if (!cfg.out) {
        write_sweep_csv(out, rows);
        return kExitOk;
    }
    std::ofstream f(*cfg.out, std::ios::binary);
    if (!f) {
        err << "cannot write '" << *cfg.out << "'\n";
        return kExitIo;
    }
    write_sweep_csv(f, rows);
    f.close();
    if (!f) {
        err << "write failed for '" << *cfg.out << "'\n";
        return kExitIo;
    }
    double max_s = 0.0;
    std::size_t undefined = 0;
    for (const auto& r : rows) {
        if (r.s_bell)
            max_s = std::max(max_s, *r.s_bell);
        else
            ++undefined;
    }
    out << "wrote " << rows.size() << " rows (" << to_string(sc.family) << ", " << to_string(sc.estimator.kind)
        << ") to " << *cfg.out << "\n";
    out << "max s_bell: " << csv::format_real(max_s) << "\n";
    out << "undefined rows: " << undefined << "\n";
    return kExitOk;
}

namespace detail {

struct RunningStats {
    std::array<double, 3> sum{};
    std::array<double, 3> sum2{};
    int n = 0;

    void add(const StokesVector& s) {
        for (std::size_t i = 0; i < 3; ++i) {
            sum[i] += s[i];
            sum2[i] += s[i] * s[i];
        }
        ++n;
    }
    StokesVector mean() const { return {sum[0] / n, sum[1] / n, sum[2] / n}; }
    StokesVector stddev() const {
        if (n < 2) return {};
        std::array<double, 3> sd{};
        for (std::size_t i = 0; i < 3; ++i) {
            const double m = sum[i] / n;
            sd[i] = std::sqrt(std::max(0.0, (sum2[i] - n * m * m) / (n - 1)));
        }
        return {sd[0], sd[1], sd[2]};
    }
};

/// Stokes vectors consistent with zero at the noise level are reported as
/// degenerate: their direction carries no information.
inline bool looks_degenerate(const StokesVector& s, double sigma_rel) {
    return s.norm() <= std::max(kStokesDegeneracy, 3.0 * sigma_rel);
}

inline int reconstruct_from_file(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ifstream f(*cfg.in);
    if (!f) {
        err << "cannot read '" << *cfg.in << "'\n";
        return kExitIo;
    }
    std::vector<IntensityRecord> recs;
    try {
        recs = read_intensity_csv(f);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitIo;
    }
    PhaseMode mode = PhaseMode::quadrature;
    if (cfg.family) {
        try {
            mode = default_phase_mode(parse_family(*cfg.family));
        } catch (const Error& e) {
            return usage(err, e.what());
        }
    }
    out << "records: " << recs.size() << "\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
        out << "record " << i << ":\n";
        try {
            const StokesVector pol = reconstruct_pol_stokes(recs[i]);
            out << "  S_pol: " << vec(pol) << "\n";
            const StokesVector path = reconstruct_path_stokes(recs[i], mode);
            out << "  S_path: " << vec(path) << "\n";
            try {
                out << "  eta: " << num(correlation_eta(pol, path)) << "\n";
            } catch (const Error&) {
                out << "  eta: undefined (Stokes vector degenerate)\n";
            }
        } catch (const Error& e) {
            out << "  flagged: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace detail

inline int cmd_tomography(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.in) return detail::reconstruct_from_file(cfg, out, err);

    Family family;
    double param = 0.0;
    try {
        if (!cfg.family) return detail::usage(err, "tomography needs --family product|entangled (or --in)");
        family = parse_family(*cfg.family);
        param = family_param(cfg, family);
    } catch (const Error& e) {
        return detail::usage(err, e.what());
    }
    const int reps = cfg.repetitions.value_or(1);
    if (reps < 1) return detail::usage(err, "--repetitions must be at least 1");
    const NoiseModel base = noise_model(cfg);
    if (base.sigma_rel < 0.0) return detail::usage(err, "--sigma-rel must be >= 0");

    std::ofstream csv_out;
    if (cfg.out) {
        csv_out.open(*cfg.out, std::ios::binary);
        if (!csv_out) {
            err << "cannot write '" << *cfg.out << "'\n";
            return kExitIo;
        }
    }

    const PolPathState oracle_state = family_state(family, param);
    const StokesVector pol_oracle = reduced_stokes(oracle_state, Dof::polarization);
    const StokesVector path_oracle = reduced_stokes(oracle_state, Dof::path);
    const PhaseMode mode = default_phase_mode(family);

    detail::RunningStats pol_stats;
    detail::RunningStats path_stats;
    StokesVector first_pol{};
    StokesVector first_path{};
    std::vector<std::string> flags;
    for (int r = 0; r < reps; ++r) {
        NoiseModel n = base;
        n.seed = derive_seed(base.seed, static_cast<std::uint64_t>(r));
        const IntensityRecord rec = simulate_intensities(run_recipe(CircuitRecipe::for_family(family, param)), n);
        if (csv_out.is_open()) write_intensity_csv(csv_out, rec, r == 0);
        try {
            const StokesVector pol = reconstruct_pol_stokes(rec);
            const StokesVector path = reconstruct_path_stokes(rec, mode);
            if (pol_stats.n == 0) {
                first_pol = pol;
                first_path = path;
            }
            pol_stats.add(pol);
            path_stats.add(path);
        } catch (const Error& e) {
            flags.push_back("repetition " + std::to_string(r) + ": " + e.what());
        }
    }
    if (csv_out.is_open()) {
        csv_out.close();
        if (!csv_out) {
            err << "write failed for '" << *cfg.out << "'\n";
            return kExitIo;
        }
    }

    out << "family: " << to_string(family) << "\n";
    out << (family == Family::product ? "delta: " : "theta: ") << detail::num(param) << " rad\n";
    out << "sigma_rel: " << detail::num(base.sigma_rel) << "  repetitions: " << reps << "  seed: " << base.seed
        << "\n";
    out << "oracle S_pol:  " << detail::vec(pol_oracle) << "\n";
    out << "oracle S_path: " << detail::vec(path_oracle) << "\n";
    if (pol_stats.n > 0) {
        const StokesVector pol = reps > 1 ? pol_stats.mean() : first_pol;
        const StokesVector path = reps > 1 ? path_stats.mean() : first_path;
        const char* tag = reps > 1 ? "mean " : "";
        out << tag << "reconstructed S_pol:  " << detail::vec(pol) << "\n";
        out << tag << "reconstructed S_path: " << detail::vec(path) << "\n";
        out << "error S_pol:  " << detail::vec(pol - pol_oracle) << "\n";
        out << "error S_path: " << detail::vec(path - path_oracle) << "\n";
        out << "max |error|: " << csv::format_real(std::max(pol.max_abs_diff(pol_oracle), path.max_abs_diff(path_oracle)))
            << "\n";
        if (reps > 1) {
            out << "std S_pol:  " << detail::vec(pol_stats.stddev()) << "\n";
            out << "std S_path: " << detail::vec(path_stats.stddev()) << "\n";
        }
        const bool pol_degenerate = detail::looks_degenerate(pol, base.sigma_rel);
        const bool path_degenerate = detail::looks_degenerate(path, base.sigma_rel);
        if (pol_degenerate) out << "flag: polarization Stokes vector degenerate\n";
        if (path_degenerate) out << "flag: path Stokes vector degenerate\n";
        if (pol_degenerate || path_degenerate)
            out << "eta: undefined\n";
        else
            out << "eta: " << detail::num(correlation_eta(pol, path)) << " (oracle "
                << detail::num(family_eta(family, param)) << ")\n";
    }
    for (const auto& f : flags) out << "flag: " << f << "\n";
    return kExitOk;
}

inline int cmd_lhv(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::size_t samples = cfg.samples.value_or(100000);
    if (samples < 1) return detail::usage(err, "--samples must be at least 1");
    const std::string strategy = cfg.strategy.value_or("random");
    if (strategy != "random" && strategy != "saturating")
        return detail::usage(err, "--strategy must be random or saturating");
    const std::uint64_t seed = cfg.seed.value_or(kDefaultSeed);

    LhvFuzzResult fz;
    if (strategy == "random") {
        fz = lhv_fuzz(samples, seed);
    } else {
        fz.samples = samples;
        fz.max_s = lhv_bell(saturating_strategy());
        fz.violations = fz.max_s > 2.0 + 1e-12 ? samples : 0;
    }
    const double anchor = lhv_bell(saturating_strategy());
    out << "strategy: " << strategy << "  samples: " << fz.samples << "  seed: " << seed << "\n";
    out << "max |S|: " << csv::format_real(fz.max_s) << "  (strategy id " << fz.argmax << ")\n";
    out << "saturating strategy |S|: " << csv::format_real(anchor) << "\n";
    out << "cases above 2: " << fz.violations << "\n";
    const bool ok = fz.violations == 0 && anchor <= 2.0 + 1e-12;
    out << (ok ? "bound |S| <= 2 holds\n" : "BOUND VIOLATED\n");
    return ok ? kExitOk : kExitFailure;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    for (int id : cfg.only)
        if (id < 1 || id > acceptance::kCriterionCount) return detail::usage(err, "--only takes ids 1..10");
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = acceptance::run_all(cfg.only);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int failed = 0;
    for (const auto& r : results) {
        out << acceptance::format_line(r) << "\n";
        if (!r.passed()) ++failed;
    }
    const bool in_budget = total < 60.0;
    out << results.size() - failed << "/" << results.size() << " criteria passed in " << detail::num(total)
        << " s" << (in_budget ? "" : " (over 60 s budget)") << "\n";
    return failed == 0 && in_budget ? kExitOk : kExitFailure;
}

}  // namespace polbell::cli
