#pragma once

/**
 * @file tomo.hpp
 * @brief Simulated intensity detection and Stokes reconstruction of both DOFs.
 *
 * Path DOF: project polarization onto h and v, read the arm intensities, and
 * infer each branch's relative arm phase from an interference port. The
 * branch Stokes vectors are mixed with weights I_h / (I_h + I_v) and
 * I_v / (I_h + I_v).
 *
 * Polarization DOF: six-projection polarimetry (h, v, d, a, r, l) on each arm
 * with a quarter-wave plate, half-wave plate and horizontal polarizer; the
 * two arm Stokes vectors are averaged with weight 1/2 each.
 *
 * Interference readings are reported in arm-intensity units: the simulated
 * port intensity of the recombining 50:50 splitter is divided by its port
 * transmission 1/2, so a reading equals
 *   I_x + I_y + 2 sqrt(I_x I_y) cos(delta + extra_phase)   (plus port)
 * with the minus port carrying the opposite sign on the cross term.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polbell/csv.hpp"
#include "polbell/error.hpp"
#include "polbell/optics.hpp"
#include "polbell/state.hpp"

namespace polbell {

// ---------------------------------------------------------------------------
// Noise

struct NoiseModel {
    double sigma_rel = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr double kDefaultSigmaRel = 0.01;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for a sub-stream identified by up to three indices. Independent of
/// the order in which streams are consumed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                           std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return splitmix64(h ^ c);
}

/// exact * (1 + eps), eps ~ N(0, sigma_rel), clamped at 0. The draw depends
/// only on (seed, reading_index).
inline double apply_noise(double exact, const NoiseModel& noise, std::uint64_t reading_index) {
    if (noise.sigma_rel == 0.0) return exact;
    std::mt19937_64 eng(derive_seed(noise.seed, reading_index));
    std::normal_distribution<double> gauss(0.0, noise.sigma_rel);
    const double v = exact * (1.0 + gauss(eng));
    return v < 0.0 ? 0.0 : v;
}

// ---------------------------------------------------------------------------
// Records

/// Polarimetric projections. r = (|h> + i|v>)/sqrt2 is the s2 = +1 state under
/// the library's Stokes convention, l its orthogonal partner.
enum class Projection { h, v, d, a, r, l };

inline constexpr std::array<Projection, 6> kAllProjections{Projection::h, Projection::v, Projection::d,
                                                           Projection::a, Projection::r, Projection::l};

inline const char* to_string(Projection p) {
    constexpr const char* names[] = {"h", "v", "d", "a", "r", "l"};
    return names[static_cast<int>(p)];
}

struct ArmProjections {
    std::array<double, 6> values{};

    double& operator[](Projection p) { return values[static_cast<std::size_t>(p)]; }
    double operator[](Projection p) const { return values[static_cast<std::size_t>(p)]; }
};

enum class Port { plus, minus };

struct InterferenceReading {
    double extra_phase = 0.0;
    double intensity = 0.0;
};

struct IntensityRecord {
    ArmProjections x;
    ArmProjections y;
    std::vector<InterferenceReading> interference_h;
    std::vector<InterferenceReading> interference_v;
    Port port = Port::plus;

    /// I_arm^pol: arm intensity after an h or v projection.
    double arm(PathMode m, Pol p) const {
        const ArmProjections& a = m == PathMode::x ? x : y;
        return a[p == Pol::h ? Projection::h : Projection::v];
    }
    double i_x_h() const { return arm(PathMode::x, Pol::h); }
    double i_y_h() const { return arm(PathMode::y, Pol::h); }
    double i_x_v() const { return arm(PathMode::x, Pol::v); }
    double i_y_v() const { return arm(PathMode::y, Pol::v); }

    const std::vector<InterferenceReading>& interference(Pol p) const {
        return p == Pol::h ? interference_h : interference_v;
    }
    std::vector<InterferenceReading>& interference(Pol p) { return p == Pol::h ? interference_h : interference_v; }
};

// ---------------------------------------------------------------------------
// Simulation

/// Tr_pol(P rho P) for P = |which><which| ⊗ I: the unnormalized path-space
/// state of one polarization branch. Its trace is that outcome's probability.
inline Matrix2 project_polarization(const PolPathState& state, Pol which) {
    const cplx ax = state.amp(which, PathMode::x);
    const cplx ay = state.amp(which, PathMode::y);
    return Matrix2::from({ax * std::conj(ax), ax * std::conj(ay), ay * std::conj(ax), ay * std::conj(ay)});
}

struct QhpSetting {
    double qwp_angle;
    double hwp_angle;
};

/// Wave-plate angles that map the projection state onto |h> ahead of a
/// horizontal polarizer.
inline QhpSetting qhp_setting(Projection p) {
    const double q45 = std::numbers::pi / 4.0;
    const double h22 = std::numbers::pi / 8.0;
    switch (p) {
        case Projection::h: return {0.0, 0.0};
        case Projection::v: return {0.0, q45};
        case Projection::d: return {q45, h22};
        case Projection::a: return {q45, -h22};
        case Projection::r: return {0.0, -h22};
        case Projection::l: return {0.0, h22};
    }
    throw Error(ErrorCode::invalid_argument, "unknown projection");
}

/// Intensity behind a QHP analyzer placed in one arm.
inline double simulate_projection(const PolPathState& state, PathMode arm, Projection p) {
    const ArmCondition cond = arm == PathMode::x ? ArmCondition::x : ArmCondition::y;
    const QhpSetting s = qhp_setting(p);
    PolPathState out = apply_placed(state, OpticalElement::quarter_wave_plate(s.qwp_angle), Placement::polarization(cond));
    out = apply_placed(out, OpticalElement::half_wave_plate(s.hwp_angle), Placement::polarization(cond));
    out = apply_placed(out, OpticalElement::polarizer(0.0), Placement::polarization(cond));
    return std::norm(out.amp(Pol::h, arm)) + std::norm(out.amp(Pol::v, arm));
}

/// Reading at one port of a recombining 50:50 splitter, after selecting one
/// polarization and delaying arm y by extra_phase. The field is propagated
/// through polarizer, phase shifter and splitter; the result is scaled to
/// arm-intensity units.
inline double interference_intensity(const PolPathState& state, Pol which_pol, double extra_phase,
                                     Port port = Port::plus) {
    const double angle = which_pol == Pol::h ? 0.0 : std::numbers::pi / 2.0;
    PolPathState out = apply_placed(state, OpticalElement::polarizer(angle), Placement::polarization());
    out = apply_placed(out, OpticalElement::phase_shifter(extra_phase), Placement::path());
    const BeamSplitter bs{};
    out = apply_beamsplitter(out, bs);
    const PathMode exit = port == Port::plus ? PathMode::x : PathMode::y;
    const double port_intensity = std::norm(out.amp(Pol::h, exit)) + std::norm(out.amp(Pol::v, exit));
    return port_intensity / bs.ratio;
}

inline constexpr std::array<double, 4> kInterferenceGrid{0.0, std::numbers::pi / 2.0, std::numbers::pi,
                                                         3.0 * std::numbers::pi / 2.0};

/// Full detector record: six projections per arm plus interference fringes
/// for both polarizations. Each reading carries its own noise draw.
inline IntensityRecord simulate_intensities(const PolPathState& state, const NoiseModel& noise,
                                            Port port = Port::plus,
                                            std::span<const double> grid = kInterferenceGrid) {
    IntensityRecord rec;
    rec.port = port;
    std::uint64_t idx = 0;
    for (PathMode arm : {PathMode::x, PathMode::y}) {
        ArmProjections& a = arm == PathMode::x ? rec.x : rec.y;
        for (Projection p : kAllProjections) {
            double exact = 0.0;
            if (p == Projection::h || p == Projection::v) {
                const Matrix2 proj = project_polarization(state, p == Projection::h ? Pol::h : Pol::v);
                exact = arm == PathMode::x ? proj(0, 0).real() : proj(1, 1).real();
            } else {
                exact = simulate_projection(state, arm, p);
            }
            a[p] = apply_noise(exact, noise, idx++);
        }
    }
    for (Pol pol : {Pol::h, Pol::v}) {
        for (double phase : grid) {
            const double exact = interference_intensity(state, pol, phase, port);
            rec.interference(pol).push_back({phase, apply_noise(exact, noise, idx++)});
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Phase inference

inline constexpr double kIntensityFloor = 1e-12;

namespace detail {

inline std::optional<double> reading_at(const std::vector<InterferenceReading>& list, double phase) {
    for (const auto& r : list)
        if (std::abs(r.extra_phase - phase) <= 1e-12) return r.intensity;
    return std::nullopt;
}

inline double wrap_phase(double p) {
    // Into (-pi, pi].
    p = std::remainder(p, 2.0 * std::numbers::pi);
    if (p <= -std::numbers::pi) p += 2.0 * std::numbers::pi;
    return p;
}

inline void require_contrast(const IntensityRecord& rec, Pol pol) {
    if (rec.arm(PathMode::x, pol) < kIntensityFloor || rec.arm(PathMode::y, pol) < kIntensityFloor)
        throw Error(ErrorCode::no_interference_contrast, "no interference contrast");
}

}  // namespace detail

/// Relative arm phase of one polarization branch from the quadrature pair
/// at extra_phase 0 and pi/2.
inline double infer_phase(const IntensityRecord& rec, Pol pol) {
    detail::require_contrast(rec, pol);
    const auto& list = rec.interference(pol);
    const auto r0 = detail::reading_at(list, 0.0);
    const auto r1 = detail::reading_at(list, std::numbers::pi / 2.0);
    if (!r0 || !r1)
        throw Error(ErrorCode::invalid_argument, "phase inference needs readings at extra_phase 0 and pi/2");
    const double ix = rec.arm(PathMode::x, pol);
    const double iy = rec.arm(PathMode::y, pol);
    const double sign = rec.port == Port::plus ? 1.0 : -1.0;
    const double scale = 2.0 * std::sqrt(ix * iy);
    const double c = sign * (*r0 - ix - iy) / scale;  //  cos delta
    const double s = -sign * (*r1 - ix - iy) / scale;  // sin delta
    return detail::wrap_phase(std::atan2(s, c));
}

/// Least-squares fit of c0 + c1 cos(e) + c2 sin(e) over every recorded fringe
/// point; needs at least three distinct extra phases. Does not use the arm
/// intensities beyond the contrast check.
inline double infer_phase_fringe_fit(const IntensityRecord& rec, Pol pol) {
    detail::require_contrast(rec, pol);
    const auto& list = rec.interference(pol);
    if (list.size() < 3) throw Error(ErrorCode::invalid_argument, "fringe fit needs at least three readings");
    double n[3][3] = {};
    double rhs[3] = {};
    for (const auto& r : list) {
        const double f[3] = {1.0, std::cos(r.extra_phase), std::sin(r.extra_phase)};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += f[i] * r.intensity;
            for (int j = 0; j < 3; ++j) n[i][j] += f[i] * f[j];
        }
    }
    auto det3 = [](const double m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d = det3(n);
    if (std::abs(d) < 1e-12) throw Error(ErrorCode::invalid_argument, "fringe grid is degenerate");
    double coef[3];
    for (int k = 0; k < 3; ++k) {
        double m[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = j == k ? rhs[i] : n[i][j];
        coef[k] = det3(m) / d;
    }
    const double sign = rec.port == Port::plus ? 1.0 : -1.0;
    if (std::hypot(coef[1], coef[2]) <= 1e-12) throw Error(ErrorCode::no_interference_contrast, "no interference contrast");
    return detail::wrap_phase(std::atan2(-sign * coef[2], sign * coef[1]));
}

/// 0 or pi, for branches whose arm amplitudes are real. Constructive reading
/// at extra_phase 0 means 0. A contrast below contrast_floor * (I_x + I_y)
/// is rejected.
inline double infer_phase_sign(const IntensityRecord& rec, Pol pol, double contrast_floor = 1e-9) {
    detail::require_contrast(rec, pol);
    const auto r0 = detail::reading_at(rec.interference(pol), 0.0);
    if (!r0) throw Error(ErrorCode::invalid_argument, "sign inference needs a reading at extra_phase 0");
    const double total = rec.arm(PathMode::x, pol) + rec.arm(PathMode::y, pol);
    const double sign = rec.port == Port::plus ? 1.0 : -1.0;
    const double contrast = sign * (*r0 - total);
    if (std::abs(contrast) <= contrast_floor * total)
        throw Error(ErrorCode::no_interference_contrast, "interference contrast below noise floor");
    return contrast > 0.0 ? 0.0 : std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Reconstruction

enum class PhaseMode { quadrature, fringe_fit, sign_only };

/// Stokes vector of a_x|x> + a_y e^{i alpha}|y>.
inline StokesVector branch_path_stokes(double ax2, double ay2, double alpha) {
    const double cross = 2.0 * std::sqrt(ax2 * ay2);
    return {cross * std::cos(alpha), cross * std::sin(alpha), ax2 - ay2};
}

inline StokesVector reconstruct_path_stokes(const IntensityRecord& rec, PhaseMode mode = PhaseMode::quadrature) {
    StokesVector mix{};
    double weight_total = 0.0;
    std::array<std::pair<double, StokesVector>, 2> branches{};
    std::size_t n = 0;
    for (Pol pol : {Pol::h, Pol::v}) {
        const double ix = rec.arm(PathMode::x, pol);
        const double iy = rec.arm(PathMode::y, pol);
        const double total = ix + iy;
        if (total <= kIntensityFloor) continue;  // empty branch: the other one carries weight 1
        double alpha = 0.0;
        if (ix > kIntensityFloor && iy > kIntensityFloor) {
            switch (mode) {
                case PhaseMode::quadrature: alpha = infer_phase(rec, pol); break;
                case PhaseMode::fringe_fit: alpha = infer_phase_fringe_fit(rec, pol); break;
                case PhaseMode::sign_only: alpha = infer_phase_sign(rec, pol); break;
            }
        }
        branches[n++] = {total, branch_path_stokes(ix / total, iy / total, alpha)};
        weight_total += total;
    }
    if (n == 0) throw Error(ErrorCode::zero_intensity, "both polarization projections are empty");
    for (std::size_t i = 0; i < n; ++i) mix = mix + branches[i].second * (branches[i].first / weight_total);
    return mix;
}

enum class ArmWeighting { equal, intensity };

inline StokesVector arm_pol_stokes(const ArmProjections& a, double* total_out = nullptr) {
    const double total = ((a[Projection::h] + a[Projection::v]) + (a[Projection::d] + a[Projection::a]) +
                          (a[Projection::r] + a[Projection::l])) /
                         3.0;
    if (total <= kIntensityFloor) throw Error(ErrorCode::zero_intensity, "zero total intensity in an arm");
    if (total_out) *total_out = total;
    return {(a[Projection::d] - a[Projection::a]) / total, (a[Projection::r] - a[Projection::l]) / total,
            (a[Projection::h] - a[Projection::v]) / total};
}

/// Polarization Stokes vector from per-arm polarimetry. The default equal
/// weighting assumes a balanced 50:50 split between the arms.
inline StokesVector reconstruct_pol_stokes(const IntensityRecord& rec, ArmWeighting w = ArmWeighting::equal) {
    double tx = 0.0;
    double ty = 0.0;
    const StokesVector sx = arm_pol_stokes(rec.x, &tx);
    const StokesVector sy = arm_pol_stokes(rec.y, &ty);
    if (w == ArmWeighting::equal) return sx * 0.5 + sy * 0.5;
    return sx * (tx / (tx + ty)) + sy * (ty / (tx + ty));
}

// ---------------------------------------------------------------------------
// CSV: pol,arm_or_port,extra_phase,intensity

inline constexpr const char* kIntensityCsvHeader = "pol,arm_or_port,extra_phase,intensity";

inline const char* port_name(Port p) { return p == Port::plus ? "port_plus" : "port_minus"; }

inline void write_intensity_csv(std::ostream& os, const IntensityRecord& rec, bool header = true) {
    if (header) os << kIntensityCsvHeader << '\n';
    for (PathMode arm : {PathMode::x, PathMode::y}) {
        const ArmProjections& a = arm == PathMode::x ? rec.x : rec.y;
        for (Projection p : kAllProjections)
            os << to_string(p) << ',' << (arm == PathMode::x ? "x" : "y") << ",," << csv::format_real(a[p]) << '\n';
    }
    for (Pol pol : {Pol::h, Pol::v})
        for (const auto& r : rec.interference(pol))
            os << (pol == Pol::h ? "h" : "v") << ',' << port_name(rec.port) << ',' << csv::format_real(r.extra_phase)
               << ',' << csv::format_real(r.intensity) << '\n';
}

/// Parses one or more consecutive records. A record ends when an arm reading
/// repeats; every record must carry all twelve arm readings.
inline std::vector<IntensityRecord> read_intensity_csv(std::istream& is) {
    std::vector<IntensityRecord> out;
    IntensityRecord cur;
    unsigned seen = 0;
    bool any_port = false;
    bool open = false;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::parse_error, "intensity CSV line " + std::to_string(line_no) + ": " + why);
    };
    auto finish = [&]() {
        if (!open) return;
        if (seen != 0xFFFu) fail("record is missing arm readings");
        out.push_back(cur);
        cur = IntensityRecord{};
        seen = 0;
        any_port = false;
        open = false;
    };
    auto parse_projection = [&](std::string_view s) -> Projection {
        for (Projection p : kAllProjections)
            if (s == to_string(p)) return p;
        fail("unknown polarization '" + std::string(s) + "'");
        return Projection::h;
    };

    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line == kIntensityCsvHeader) continue;
        const auto f = csv::split(line);
        if (f.size() != 4) fail("expected 4 columns");
        const Projection proj = parse_projection(f[0]);
        double value = 0.0;
        try {
            value = csv::parse_real(f[3]);
        } catch (const Error&) {
            fail("bad intensity");
        }
        if (value < 0.0) fail("negative intensity");
        if (f[1] == "x" || f[1] == "y") {
            const unsigned bit = 1u << ((f[1] == "x" ? 0 : 6) + static_cast<unsigned>(proj));
            if (seen & bit) finish();
            (f[1] == "x" ? cur.x : cur.y)[proj] = value;
            seen |= bit;
            open = true;
        } else if (f[1] == "port_plus" || f[1] == "port_minus") {
            if (proj != Projection::h && proj != Projection::v) fail("interference rows must be h or v");
            const Port port = f[1] == "port_plus" ? Port::plus : Port::minus;
            if (any_port && port != cur.port) fail("mixed interference ports in one record");
            cur.port = port;
            any_port = true;
            double phase = 0.0;
            try {
                phase = csv::parse_real(f[2]);
            } catch (const Error&) {
                fail("bad extra_phase");
            }
            cur.interference(proj == Projection::h ? Pol::h : Pol::v).push_back({phase, value});
            open = true;
        } else {
            fail("unknown arm_or_port '" + std::string(f[1]) + "'");
        }
    }
    finish();
    return out;
}

}  // namespace polbell
