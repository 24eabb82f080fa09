#pragma once

// One-parameter Bell sweeps over either experimental family, with three
// interchangeable ways of estimating the four correlations.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "polbell/bell.hpp"
#include "polbell/csv.hpp"
#include "polbell/prep.hpp"
#include "polbell/tomo.hpp"

namespace polbell {

enum class EstimatorKind { analytic_oracle, stokes_direct, tomography };

inline std::string_view to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::analytic_oracle: return "analytic_oracle";
        case EstimatorKind::stokes_direct: return "stokes_direct";
        case EstimatorKind::tomography: return "tomography";
    }
    return "?";
}

inline EstimatorKind parse_estimator(std::string_view s) {
    if (s == "analytic_oracle" || s == "oracle") return EstimatorKind::analytic_oracle;
    if (s == "stokes_direct") return EstimatorKind::stokes_direct;
    if (s == "tomography") return EstimatorKind::tomography;
    throw Error(ErrorCode::invalid_argument, "unknown estimator '" + std::string(s) + "'");
}

struct Estimator {
    EstimatorKind kind = EstimatorKind::analytic_oracle;
    NoiseModel noise{};  // tomography only
    int repetitions = 1;  // tomography only
};

struct SweepConfig {
    Family family = Family::product;
    double delta1_fixed = kDefaultDelta1;
    double grid_start = 0.0;
    double grid_end = 2.0 * std::numbers::pi;
    int grid_points = 360;
    Estimator estimator{};

    /// Half-open grid: start + i (end - start) / points, i < points.
    double grid_param(int i) const { return grid_start + i * (grid_end - grid_start) / grid_points; }

    void validate() const {
        if (grid_points < 2) throw Error(ErrorCode::invalid_argument, "grid_points must be at least 2");
        if (estimator.kind == EstimatorKind::tomography && estimator.repetitions < 1)
            throw Error(ErrorCode::invalid_argument, "repetitions must be at least 1");
        if (estimator.noise.sigma_rel < 0.0) throw Error(ErrorCode::invalid_argument, "sigma_rel must be >= 0");
    }
};

struct SweepRow {
    double param = 0.0;
    std::optional<double> eta;  // empty marks an undefined (degenerate) point
    std::optional<double> s_bell;
    double concurrence = 0.0;
    std::optional<double> s_bell_std;  // tomography estimator only

    bool defined() const { return s_bell.has_value(); }
};

/// Phase inference used when reconstructing a family's path DOF: general
/// phases for the product family, 0/pi sign detection for the entangled one.
inline PhaseMode default_phase_mode(Family f) {
    return f == Family::product ? PhaseMode::quadrature : PhaseMode::sign_only;
}

/// Correlation of a family state measured through the simulated detectors.
inline double tomography_correlation(Family f, double param, const NoiseModel& noise) {
    const PolPathState state = run_recipe(CircuitRecipe::for_family(f, param));
    const IntensityRecord rec = simulate_intensities(state, noise);
    return correlation_eta(reconstruct_pol_stokes(rec), reconstruct_path_stokes(rec, default_phase_mode(f)));
}

namespace detail {

inline bool is_measurement_failure(const Error& e) {
    return e.code() == ErrorCode::degenerate_stokes || e.code() == ErrorCode::no_interference_contrast ||
           e.code() == ErrorCode::zero_intensity;
}

inline double clamp_eta(double e) {
    // Normalized inner products can exceed 1 by an ulp.
    return std::max(-1.0, std::min(1.0, e));
}

}  // namespace detail

inline SweepRow sweep_point(const SweepConfig& cfg, int index) {
    SweepRow row;
    row.param = cfg.grid_param(index);
    row.concurrence = concurrence(family_state(cfg.family, row.param));
    const CorrelationSettings set = settings_from_free_param(row.param, cfg.delta1_fixed);

    switch (cfg.estimator.kind) {
        case EstimatorKind::analytic_oracle: {
            row.eta = family_eta(cfg.family, row.param);
            row.s_bell = oracle_bell(cfg.family, row.param, cfg.delta1_fixed);
            break;
        }
        case EstimatorKind::stokes_direct: {
            try {
                std::array<double, 4> e{};
                for (std::size_t k = 0; k < 4; ++k)
                    e[k] = detail::clamp_eta(state_correlation(family_state(cfg.family, set[k])));
                row.eta = e[1];
                row.s_bell = bell_parameter(e[0], e[1], e[2], e[3]);
            } catch (const Error& err) {
                if (!detail::is_measurement_failure(err)) throw;
                row.eta.reset();
                row.s_bell.reset();
            }
            break;
        }
        case EstimatorKind::tomography: {
            const int reps = cfg.estimator.repetitions;
            double sum = 0.0;
            double sum2 = 0.0;
            double eta_sum = 0.0;
            try {
                for (int r = 0; r < reps; ++r) {
                    std::array<double, 4> e{};
                    for (std::size_t k = 0; k < 4; ++k) {
                        NoiseModel n = cfg.estimator.noise;
                        n.seed = derive_seed(cfg.estimator.noise.seed, static_cast<std::uint64_t>(index),
                                             static_cast<std::uint64_t>(r), k);
                        e[k] = detail::clamp_eta(tomography_correlation(cfg.family, set[k], n));
                    }
                    const double s = bell_parameter(e[0], e[1], e[2], e[3]);
                    sum += s;
                    sum2 += s * s;
                    eta_sum += e[1];
                }
            } catch (const Error& err) {
                if (!detail::is_measurement_failure(err)) throw;
                return row;
            }
            const double mean = sum / reps;
            row.eta = eta_sum / reps;
            row.s_bell = mean;
            row.s_bell_std = reps > 1 ? std::sqrt(std::max(0.0, (sum2 - reps * mean * mean) / (reps - 1))) : 0.0;
            break;
        }
    }
    return row;
}

inline std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.grid_points));
    for (int i = 0; i < cfg.grid_points; ++i) rows.push_back(sweep_point(cfg, i));
    return rows;
}

inline constexpr const char* kSweepCsvHeader = "param,eta,s_bell,concurrence,s_bell_std";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const SweepRow& r : rows) {
        os << csv::format_real(r.param) << ',' << (r.eta ? csv::format_real(*r.eta) : "undefined") << ','
           << (r.s_bell ? csv::format_real(*r.s_bell) : "undefined") << ',' << csv::format_real(r.concurrence) << ','
           << (r.s_bell_std ? csv::format_real(*r.s_bell_std) : "") << '\n';
    }
}

}  // namespace polbell
