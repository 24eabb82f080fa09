#pragma once

// End-to-end acceptance checks. Each criterion runs independently, is timed
// against its own budget, and reports one pass/fail line.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polbell/bell.hpp"
#include "polbell/lhv.hpp"
#include "polbell/prep.hpp"
#include "polbell/state.hpp"
#include "polbell/sweep.hpp"
#include "polbell/tomo.hpp"

namespace polbell::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool checks_passed = false;
    double elapsed_s = 0.0;
    double budget_s = 0.0;
    std::string detail;

    bool passed() const { return checks_passed && elapsed_s < budget_s; }
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;

/// Collects sub-check failures and a short summary of measured values.
class Checker {
public:
    void expect_near(const std::string& what, double got, double want, double tol) {
        const double err = std::abs(got - want);
        if (!(err <= tol)) {
            ok_ = false;
            note("FAIL " + what + ": got " + fmt(got) + ", want " + fmt(want) + " (tol " + fmt(tol) + ")");
        }
        worst_ = std::max(worst_, err);
    }
    void expect(const std::string& what, bool cond) {
        if (!cond) {
            ok_ = false;
            note("FAIL " + what);
        }
    }
    void note(const std::string& s) {
        if (!detail_.empty()) detail_ += "; ";
        detail_ += s;
    }
    bool ok() const { return ok_; }
    const std::string& detail() const { return detail_; }

    static std::string fmt(double v) {
        std::ostringstream os;
        os.precision(12);
        os << v;
        return os.str();
    }

private:
    bool ok_ = true;
    double worst_ = 0.0;
    std::string detail_;
};

inline PolPathState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Amplitudes a{};
    for (auto& z : a) z = {g(rng), g(rng)};
    return PolPathState::normalized(a);
}

inline Matrix2 random_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix2 m;
    for (auto& z : m.data) z = {g(rng), g(rng)};
    return m;
}

inline SweepConfig fig5_config(Family f, EstimatorKind k) {
    SweepConfig cfg;
    cfg.family = f;
    cfg.estimator.kind = k;
    return cfg;
}

inline void check_tsirelson_peak(Checker& c, Family f, double peak, bool with_concurrence) {
    const std::vector<SweepRow> rows = sweep(fig5_config(f, EstimatorKind::analytic_oracle));
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (*rows[i].s_bell > *rows[best].s_bell) best = i;
    c.expect_near("oracle sweep max s_bell", *rows[best].s_bell, kTsirelson, 1e-9);
    c.expect_near("oracle sweep argmax", rows[best].param, peak, 1e-9);
    c.expect_near("oracle s_bell at peak", oracle_bell(f, peak), kTsirelson, 1e-9);

    const BellMaximum m = maximize_bell(f, kDefaultDelta1);
    c.expect_near("maximize_bell s_star", m.s_bell, kTsirelson, 1e-9);
    c.expect_near("maximize_bell param_star", m.param, peak, 1e-6);

    SweepConfig direct = fig5_config(f, EstimatorKind::stokes_direct);
    direct.grid_start = peak;
    direct.grid_end = peak + 1.0;
    direct.grid_points = 2;
    const SweepRow r = sweep(direct).front();
    c.expect("stokes_direct defined at peak", r.defined());
    if (r.defined()) c.expect_near("stokes_direct s_bell at peak", *r.s_bell, kTsirelson, 1e-6);

    if (with_concurrence) {
        c.expect_near("concurrence at peak", rows[best].concurrence, std::numbers::sqrt2 / 2.0, 1e-9);
        c.expect("peak state only partially entangled", rows[best].concurrence < 1.0);
    }
    c.note("S*=" + Checker::fmt(m.s_bell) + " at " + Checker::fmt(m.param));
}

}  // namespace detail

inline CriterionResult run_criterion(int id) {
    using detail::Checker;
    using detail::kPi;
    CriterionResult res;
    res.id = id;
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();

    switch (id) {
        case 1: {
            res.name = "Tsirelson point, product family";
            res.budget_s = 1.0;
            detail::check_tsirelson_peak(c, Family::product, 3.0 * kPi / 4.0, false);
            break;
        }
        case 2: {
            res.name = "Tsirelson point, entangled family";
            res.budget_s = 1.0;
            detail::check_tsirelson_peak(c, Family::entangled, 7.0 * kPi / 4.0, true);
            break;
        }
        case 3: {
            res.name = "Classical-bound point, full entanglement";
            res.budget_s = 1.0;
            const double theta = kPi / 2.0;
            c.expect_near("oracle s_bell at pi/2", oracle_bell(Family::entangled, theta), 2.0, 1e-9);
            c.expect_near("concurrence at pi/2", concurrence(target_entangled(theta)), 1.0, 1e-9);
            for (double off : {-0.01, 0.01}) {
                SweepConfig cfg = detail::fig5_config(Family::entangled, EstimatorKind::stokes_direct);
                cfg.grid_start = theta + off;
                cfg.grid_end = cfg.grid_start + 1.0;
                cfg.grid_points = 2;
                const SweepRow r = sweep(cfg).front();
                c.expect("stokes_direct defined near pi/2", r.defined());
                if (r.defined()) c.expect_near("stokes_direct s_bell near pi/2", *r.s_bell, 2.0, 5e-2);
            }
            break;
        }
        case 4: {
            res.name = "Correlation closed forms on prepared states";
            res.budget_s = 2.0;
            int compared = 0;
            for (int i = 0; i < 360; ++i) {
                const double p = i * 2.0 * kPi / 360.0;
                c.expect_near("eta product", state_correlation(target_product(p)), std::cos(p), 1e-9);
                ++compared;
                if (std::abs(p - kPi / 2.0) < 1e-3 || std::abs(p - 3.0 * kPi / 2.0) < 1e-3) continue;
                c.expect_near("eta entangled", state_correlation(target_entangled(p)), std::sin(p), 1e-9);
                ++compared;
            }
            c.note(std::to_string(compared) + " correlations compared");
            break;
        }
        case 5: {
            res.name = "Recipe fidelity (Sagnac and Mach-Zehnder)";
            res.budget_s = 1.0;
            std::mt19937_64 rng(0x5A6AC);
            std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
            double worst_s = 1.0;
            double worst_m = 1.0;
            for (int i = 0; i < 50; ++i) {
                const double d = u(rng);
                const double t = u(rng);
                worst_s = std::min(worst_s, fidelity(run_recipe(CircuitRecipe::sagnac_product(d)), target_product(d)));
                worst_m = std::min(worst_m, fidelity(run_recipe(CircuitRecipe::mz_entangled(t)), target_entangled(t)));
            }
            c.expect("Sagnac fidelity >= 1 - 1e-9", worst_s >= 1.0 - 1e-9);
            c.expect("Mach-Zehnder fidelity >= 1 - 1e-12", worst_m >= 1.0 - 1e-12);
            c.note("min F sagnac=" + Checker::fmt(worst_s) + ", mz=" + Checker::fmt(worst_m));
            break;
        }
        case 6: {
            res.name = "Tomography round-trip and path-mixture identities";
            res.budget_s = 5.0;
            int flagged = 0;
            for (Family f : {Family::product, Family::entangled}) {
                for (int i = 0; i < 100; ++i) {
                    const double p = i * 2.0 * kPi / 100.0;
                    const PolPathState s = family_state(f, p);
                    const IntensityRecord rec = simulate_intensities(s, NoiseModel{});
                    try {
                        const StokesVector path = reconstruct_path_stokes(rec, default_phase_mode(f));
                        const StokesVector pol = reconstruct_pol_stokes(rec);
                        c.expect_near("S_path round-trip", path.max_abs_diff(reduced_stokes(s, Dof::path)), 0.0, 1e-9);
                        c.expect_near("S_pol round-trip", pol.max_abs_diff(reduced_stokes(s, Dof::polarization)), 0.0,
                                      1e-9);
                        if (path.norm() <= kStokesDegeneracy) ++flagged;
                    } catch (const Error&) {
                        ++flagged;
                    }
                }
            }
            std::mt19937_64 rng(0x70770);
            double worst_mix = 0.0;
            double worst_idem = 0.0;
            for (int i = 0; i < 100; ++i) {
                const PolPathState s = detail::random_state(rng);
                const Matrix2 ph = project_polarization(s, Pol::h);
                const Matrix2 pv = project_polarization(s, Pol::v);
                const double ih = ph.trace().real();
                const double iv = pv.trace().real();
                const Matrix2 nh = ph * (1.0 / ih);
                const Matrix2 nv = pv * (1.0 / iv);
                const Matrix2 mix = nh * (ih / (ih + iv)) + nv * (iv / (ih + iv));
                worst_mix = std::max(worst_mix, max_abs_diff(mix, partial_trace(density(s), Dof::path).matrix()));
                worst_idem = std::max({worst_idem, max_abs_diff(nh * nh, nh), max_abs_diff(nv * nv, nv)});
            }
            c.expect_near("path-mixture identity", worst_mix, 0.0, 1e-12);
            c.expect_near("projector idempotence", worst_idem, 0.0, 1e-12);
            c.note(std::to_string(flagged) + " degenerate points flagged");
            break;
        }
        case 7: {
            res.name = "LHV bound over random finite strategies";
            res.budget_s = 10.0;
            const LhvFuzzResult fz = lhv_fuzz(100000, 0x1B4D);
            c.expect("no strategy above 2 + 1e-12", fz.violations == 0 && fz.max_s <= 2.0 + 1e-12);
            // lhv_bell already rejects any S(lambda) outside {-2, 2}; recheck here for the report.
            std::size_t pointwise_bad = 0;
            for (std::size_t i = 0; i < 1000; ++i) {
                const LHVStrategy st = random_strategy(derive_seed(0x1B4D, i));
                for (const auto& la : st.assignments())
                    if (lhv_pointwise(la) != 2 && lhv_pointwise(la) != -2) ++pointwise_bad;
            }
            c.expect("pointwise S(lambda) in {-2, 2}", pointwise_bad == 0);
            c.expect("saturating strategy attains exactly 2", lhv_bell(saturating_strategy()) == 2.0);
            c.note("max |S| = " + Checker::fmt(fz.max_s) + " over " + std::to_string(fz.samples));
            break;
        }
        case 8: {
            res.name = "Born-rule vectorization identity";
            res.budget_s = 1.0;
            std::mt19937_64 rng(0xB024);
            double worst = 0.0;
            for (int i = 0; i < 1000; ++i) {
                const Matrix2 a = detail::random_matrix(rng);
                const Matrix2 b = detail::random_matrix(rng);
                worst = std::max(worst, std::abs(vectorize_inner(a, b) - (a.adjoint() * b).trace()));
            }
            c.expect_near("Tr(A^dagger B) = vec(A)* . vec(B)", worst, 0.0, 1e-12);
            break;
        }
        case 9: {
            res.name = "Structural invariants over random states";
            res.budget_s = 5.0;
            std::mt19937_64 rng(0x57A7E);
            std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
            double w_purity = 0, w_herm = 0, w_trace = 0, w_norms = 0, w_cp = 0, w_phase = 0;
            for (int i = 0; i < 1000; ++i) {
                const PolPathState s = detail::random_state(rng);
                const DensityMatrix4 rho = density(s);
                w_purity = std::max(w_purity, std::abs(rho.purity() - 1.0));
                w_herm = std::max(w_herm, max_abs_diff(rho.matrix(), rho.matrix().adjoint()));
                w_trace = std::max(w_trace, std::abs(rho.matrix().trace() - 1.0));
                const StokesVector sa = stokes(partial_trace(rho, Dof::polarization));
                const StokesVector sb = stokes(partial_trace(rho, Dof::path));
                w_norms = std::max(w_norms, std::abs(sa.norm() - sb.norm()));
                const double cc = concurrence(s);
                w_cp = std::max(w_cp, std::abs(cc * cc + sa.norm() * sa.norm() - 1.0));
                const PolPathState t = s.with_global_phase(u(rng));
                const DensityMatrix4 rt = density(t);
                w_phase = std::max({w_phase, max_abs_diff(rho.matrix(), rt.matrix()),
                                    sa.max_abs_diff(stokes(partial_trace(rt, Dof::polarization))),
                                    sb.max_abs_diff(stokes(partial_trace(rt, Dof::path))),
                                    std::abs(cc - concurrence(t))});
            }
            c.expect_near("purity", w_purity, 0.0, 1e-12);
            c.expect_near("hermiticity", w_herm, 0.0, 1e-12);
            c.expect_near("trace", w_trace, 0.0, 1e-12);
            c.expect_near("|S_A| = |S_B|", w_norms, 0.0, 1e-9);
            c.expect_near("C^2 + P^2 = 1", w_cp, 0.0, 1e-9);
            c.expect_near("global-phase invariance", w_phase, 0.0, 1e-12);
            break;
        }
        case 10: {
            res.name = "General-phase counter-instance (phi = (0, pi/2, 0, 0))";
            res.budget_s = 1.0;
            const PolPathState s = make_general_state({0.5, 0.5, 0.5, 0.5}, {0.0, kPi / 2.0, 0.0, 0.0});
            const double eta = state_correlation(s);
            const double closed = std::cos(kPi / 2.0 - 0.0);
            c.expect_near("correlation_eta (stated value 1)", eta, 1.0, 1e-9);
            c.expect_near("cos(phi2 - phi3)", closed, 0.0, 1e-9);
            c.note("measured eta = " + Checker::fmt(eta) + ", cos(phi2 - phi3) = " + Checker::fmt(closed));
            break;
        }
        default:
            res.name = "unknown criterion";
            res.budget_s = 0.0;
            c.expect("criterion id in 1..10", false);
    }

    res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.checks_passed = c.ok();
    res.detail = c.detail();
    if (res.checks_passed && res.elapsed_s >= res.budget_s)
        res.detail += (res.detail.empty() ? "" : "; ") + std::string("over runtime budget");
    return res;
}

inline constexpr int kCriterionCount = 10;

inline std::vector<CriterionResult> run_all(const std::vector<int>& only = {}) {
    std::vector<CriterionResult> out;
    if (only.empty()) {
        for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
    } else {
        for (int id : only) out.push_back(run_criterion(id));
    }
    return out;
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed() ? "[PASS] " : "[FAIL] ") << "AC" << r.id << "  " << r.name << "  (";
    os.precision(3);
    os << std::fixed << r.elapsed_s << " s / " << r.budget_s << " s)";
    if (!r.detail.empty()) os << "  " << r.detail;
    return os.str();
}

}  // namespace polbell::acceptance
