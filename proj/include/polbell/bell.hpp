#pragma once

// Inner-product correlations between the two DOFs' Stokes vectors and the
// BCHSH combination built from them.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "polbell/error.hpp"
#include "polbell/prep.hpp"
#include "polbell/state.hpp"

namespace polbell {

inline constexpr double kStokesDegeneracy = 1e-9;
inline const double kTsirelson = 2.0 * std::numbers::sqrt2;

/// S_A . S_B / (|S_A| |S_B|). Throws degenerate_stokes when either norm is
/// at or below 1e-9.
inline double correlation_eta(const StokesVector& sa, const StokesVector& sb) {
    const double na = sa.norm();
    const double nb = sb.norm();
    if (na <= kStokesDegeneracy || nb <= kStokesDegeneracy)
        throw Error(ErrorCode::degenerate_stokes, "Stokes vector degenerate");
    return sa.dot(sb) / (na * nb);
}

/// Correlation of a prepared pure state, polarization against path.
inline double state_correlation(const PolPathState& state) {
    const DensityMatrix4 rho = density(state);
    return correlation_eta(stokes(partial_trace(rho, Dof::polarization)), stokes(partial_trace(rho, Dof::path)));
}

// Closed forms for the two experimental families. Continuous through the
// points where the measured correlation is undefined.
inline double eta_product(double delta) { return std::cos(delta); }
inline double eta_entangled(double theta) { return std::sin(theta); }

inline double family_eta(Family f, double param) {
    return f == Family::product ? eta_product(param) : eta_entangled(param);
}

/// |e1 + e2 + e3 - e4|.
inline double bell_parameter(double e1, double e2, double e3, double e4) {
    constexpr double tol = 1e-9;
    for (double e : {e1, e2, e3, e4})
        if (!(std::abs(e) <= 1.0 + tol))
            throw Error(ErrorCode::invalid_argument, "correlation outside [-1, 1]");
    return std::abs(e1 + e2 + e3 - e4);
}

/// Four phase-difference settings tied by delta1 + delta4 = delta2 + delta3.
class CorrelationSettings {
public:
    CorrelationSettings(double d1, double d2, double d3, double d4) : d_{d1, d2, d3, d4} {
        const double scale = std::max({1.0, std::abs(d1), std::abs(d2), std::abs(d3), std::abs(d4)});
        if (std::abs((d1 + d4) - (d2 + d3)) > 1e-12 * scale)
            throw Error(ErrorCode::invalid_argument, "settings violate delta1 + delta4 = delta2 + delta3");
    }

    double delta1() const { return d_[0]; }
    double delta2() const { return d_[1]; }
    double delta3() const { return d_[2]; }
    double delta4() const { return d_[3]; }
    double operator[](std::size_t i) const { return d_[i]; }

private:
    std::array<double, 4> d_;
};

inline constexpr double kDefaultDelta1 = -3.0 * std::numbers::pi / 4.0;

/// (delta1_fixed, delta, delta, 2 delta - delta1_fixed).
inline CorrelationSettings settings_from_free_param(double delta, double delta1_fixed = kDefaultDelta1) {
    return CorrelationSettings(delta1_fixed, delta, delta, 2.0 * delta - delta1_fixed);
}

/// Bell parameter of a family from its closed-form correlation.
inline double oracle_bell(Family f, double param, double delta1_fixed = kDefaultDelta1) {
    const CorrelationSettings s = settings_from_free_param(param, delta1_fixed);
    return bell_parameter(family_eta(f, s[0]), family_eta(f, s[1]), family_eta(f, s[2]), family_eta(f, s[3]));
}

struct BellMaximum {
    double param = 0.0;
    double s_bell = 0.0;
};

/// Peak of the oracle Bell parameter over one period: 1° scan, then
/// golden-section refinement of the best bracket down to 1e-10 in the
/// parameter. The returned parameter lies in [0, 2 pi).
inline BellMaximum maximize_bell(Family f, double delta1_fixed = kDefaultDelta1) {
    constexpr int kSteps = 360;
    const double step = 2.0 * std::numbers::pi / kSteps;
    auto objective = [&](double p) { return oracle_bell(f, p, delta1_fixed); };

    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < kSteps; ++i) {
        const double v = objective(i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = (best - 1) * step;
    double hi = (best + 1) * step;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    while (hi - lo > 1e-10) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }
    double p = 0.5 * (lo + hi);
    double v = objective(p);
    if (best_val > v) {
        p = best * step;
        v = best_val;
    }
    p = std::fmod(p, 2.0 * std::numbers::pi);
    if (p < 0.0) p += 2.0 * std::numbers::pi;
    return {p, v};
}

}  // namespace polbell
