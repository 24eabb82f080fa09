#pragma once

// Jones-calculus elements and their lifted action on the polarization x path
// state. Wave plates use the real-HWP convention with the overall retardance
// phase dropped.

#include <cmath>
#include <complex>
#include <numbers>

#include "polbell/error.hpp"
#include "polbell/linalg.hpp"
#include "polbell/state.hpp"

namespace polbell {

enum class ElementKind { half_wave_plate, quarter_wave_plate, polarizer, phase_shifter, general_u2 };

/// Parameters of e^{i phi} [[alpha, beta], [-beta*, alpha*]].
struct U2Params {
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};
    double phi = 0.0;

    friend bool operator==(const U2Params&, const U2Params&) = default;
};

struct OpticalElement {
    ElementKind kind = ElementKind::phase_shifter;
    double angle = 0.0;  // fast or transmission axis, radians from horizontal
    double phase = 0.0;  // phase_shifter only
    U2Params u2{};       // general_u2 only

    static OpticalElement half_wave_plate(double angle) { return {ElementKind::half_wave_plate, angle, 0.0, {}}; }
    static OpticalElement quarter_wave_plate(double angle) {
        return {ElementKind::quarter_wave_plate, angle, 0.0, {}};
    }
    static OpticalElement polarizer(double angle) { return {ElementKind::polarizer, angle, 0.0, {}}; }
    static OpticalElement phase_shifter(double phase) { return {ElementKind::phase_shifter, 0.0, phase, {}}; }

    static OpticalElement general_u2(cplx alpha, cplx beta, double phi) {
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTolerance)
            throw Error(ErrorCode::not_unitary, "general_u2 requires |alpha|^2 + |beta|^2 = 1");
        return {ElementKind::general_u2, 0.0, 0.0, {alpha, beta, phi}};
    }

    friend bool operator==(const OpticalElement&, const OpticalElement&) = default;
};

inline Matrix2 jones_matrix(const OpticalElement& e) {
    const double c = std::cos(e.angle);
    const double s = std::sin(e.angle);
    switch (e.kind) {
        case ElementKind::half_wave_plate: {
            const double c2 = std::cos(2.0 * e.angle);
            const double s2 = std::sin(2.0 * e.angle);
#ifdef POLBELL_MUTATE_HWP_SIGN
            return Matrix2::from({c2, s2, -s2, -c2});
#else
            return Matrix2::from({c2, s2, s2, -c2});
#endif
        }
        case ElementKind::quarter_wave_plate:
            // R(angle) diag(1, i) R(-angle)
            return Matrix2::from({c * c + kI * s * s, (1.0 - kI) * s * c, (1.0 - kI) * s * c, s * s + kI * c * c});
        case ElementKind::polarizer:
            return Matrix2::from({c * c, c * s, c * s, s * s});
        case ElementKind::phase_shifter:
            return Matrix2::from({1.0, 0.0, 0.0, std::polar(1.0, e.phase)});
        case ElementKind::general_u2: {
            const cplx g = std::polar(1.0, e.u2.phi);
            return Matrix2::from({g * e.u2.alpha, g * e.u2.beta, -g * std::conj(e.u2.beta), g * std::conj(e.u2.alpha)});
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown optical element kind");
}

/// The element as seen by a counter-propagating beam: the axis angle is
/// mirrored (theta -> -theta), which is conjugation by diag(1, -1). Phase
/// shifters are diagonal and therefore unchanged.
inline OpticalElement reverse_traversal(const OpticalElement& e) {
    OpticalElement r = e;
    switch (e.kind) {
        case ElementKind::half_wave_plate:
        case ElementKind::quarter_wave_plate:
        case ElementKind::polarizer:
            r.angle = -e.angle;
            break;
        case ElementKind::phase_shifter:
            break;
        case ElementKind::general_u2:
            r.u2.beta = -e.u2.beta;
            break;
    }
    return r;
}

enum class ArmCondition { x, y, both };
enum class Traversal { forward, reverse };

struct Placement {
    Dof target = Dof::polarization;
    ArmCondition condition_arm = ArmCondition::both;  // polarization elements only
    Traversal traversal = Traversal::forward;

    static Placement polarization(ArmCondition arm = ArmCondition::both, Traversal t = Traversal::forward) {
        return {Dof::polarization, arm, t};
    }
    static Placement path() { return {Dof::path, ArmCondition::both, Traversal::forward}; }

    friend bool operator==(const Placement&, const Placement&) = default;
};

/// 4x4 operator of a polarization element sitting in one arm (or both):
/// J ⊗ |x><x| + I ⊗ |y><y| for arm x.
inline Matrix4 lift_polarization(const Matrix2& j, ArmCondition arm) {
    if (arm == ArmCondition::both) return kron(j, Matrix2::identity());
    const Matrix2 px = Matrix2::from({1.0, 0.0, 0.0, 0.0});
    const Matrix2 py = Matrix2::from({0.0, 0.0, 0.0, 1.0});
    const Matrix2& on = arm == ArmCondition::x ? px : py;
    const Matrix2& off = arm == ArmCondition::x ? py : px;
    return kron(j, on) + kron(Matrix2::identity(), off);
}

inline Matrix4 lift_path(const Matrix2& j) { return kron(Matrix2::identity(), j); }

inline PolPathState apply_placed(const PolPathState& state, const OpticalElement& elem, const Placement& place) {
    if (place.target == Dof::path && place.condition_arm != ArmCondition::both)
        throw Error(ErrorCode::invalid_argument, "arm condition applies only to polarization elements");
    const OpticalElement e = place.traversal == Traversal::reverse ? reverse_traversal(elem) : elem;
    const Matrix2 j = jones_matrix(e);
    const Matrix4 op = place.target == Dof::path ? lift_path(j) : lift_polarization(j, place.condition_arm);
    return PolPathState::unnormalized(op * state.amplitudes());
}

enum class BsConvention { real_hadamard, symmetric_i };

/// Two-port path mixer. `ratio` is the transmission t; reflection r = 1 - t.
struct BeamSplitter {
    BsConvention convention = BsConvention::real_hadamard;
    double ratio = 0.5;

    Matrix2 matrix() const {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw Error(ErrorCode::invalid_argument, "beam-splitter ratio must lie in (0, 1)");
        const double t = std::sqrt(ratio);
        const double r = std::sqrt(1.0 - ratio);
        // Columns are the images of |x> and |y>.
        if (convention == BsConvention::real_hadamard) return Matrix2::from({t, r, r, -t});
        return Matrix2::from({t, kI * r, kI * r, t});
    }

    friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

inline PolPathState apply_beamsplitter(const PolPathState& state, const BeamSplitter& bs) {
    return PolPathState::unnormalized(lift_path(bs.matrix()) * state.amplitudes());
}

inline double degrees(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace polbell
