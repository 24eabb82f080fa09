#pragma once

// The two experimental state families and the optical circuits that
// prepare them.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polbell/error.hpp"
#include "polbell/optics.hpp"
#include "polbell/state.hpp"

namespace polbell {

enum class Family { product, entangled };

inline std::string_view to_string(Family f) { return f == Family::product ? "product" : "entangled"; }

inline Family parse_family(std::string_view s) {
    if (s == "product") return Family::product;
    if (s == "entangled") return Family::entangled;
    throw Error(ErrorCode::invalid_argument, "unknown family '" + std::string(s) + "'");
}

/// 1/2 (|h> + |v>) ⊗ (|x> + e^{i delta} |y>).
inline PolPathState target_product(double delta) {
    const cplx e = std::polar(0.5, delta);
    return PolPathState::normalized({0.5, e, 0.5, e});
}

/// (cos theta |h,x> + |h,y> + sin theta |v,x>) / sqrt2.
inline PolPathState target_entangled(double theta) {
    const double k = 1.0 / std::numbers::sqrt2;
    return PolPathState::normalized({k * std::cos(theta), k, k * std::sin(theta), 0.0});
}

inline PolPathState family_state(Family f, double param) {
    return f == Family::product ? target_product(param) : target_entangled(param);
}

/// |<a|b>|^2 for normalized states.
inline double fidelity(const PolPathState& a, const PolPathState& b) {
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

struct PlacedElement {
    OpticalElement element;
    Placement placement;
};

using RecipeStep = std::variant<PlacedElement, BeamSplitter>;

enum class RecipeLabel { sagnac_product, mz_entangled };

/// A fixed preparation circuit. Instances come only from the named factories
/// so the step list always matches the lab procedure for its label.
class CircuitRecipe {
public:
    /// |h,x> -> HWP(22.5°) -> 50:50 BS -> Q(0) H(delta/4) Q(0) met forward by
    /// the counterclockwise beam (arm y) and in reverse by the clockwise beam
    /// (arm x). Output equals target_product(delta) up to a global phase.
    static CircuitRecipe sagnac_product(double delta) {
        std::vector<RecipeStep> steps;
        steps.emplace_back(PlacedElement{OpticalElement::half_wave_plate(degrees(22.5)), Placement::polarization()});
        steps.emplace_back(BeamSplitter{});
        const std::vector<OpticalElement> sandwich{
            OpticalElement::quarter_wave_plate(0.0),
            OpticalElement::half_wave_plate(delta / 4.0),
            OpticalElement::quarter_wave_plate(0.0),
        };
        for (const auto& e : sandwich)
            steps.emplace_back(PlacedElement{e, Placement::polarization(ArmCondition::y, Traversal::forward)});
        for (auto it = sandwich.rbegin(); it != sandwich.rend(); ++it)
            steps.emplace_back(PlacedElement{*it, Placement::polarization(ArmCondition::x, Traversal::reverse)});
        return CircuitRecipe(RecipeLabel::sagnac_product, delta, std::move(steps));
    }

    /// |h,x> -> 50:50 BS -> HWP(theta/2) on arm x.
    static CircuitRecipe mz_entangled(double theta) {
        std::vector<RecipeStep> steps;
        steps.emplace_back(BeamSplitter{});
        steps.emplace_back(
            PlacedElement{OpticalElement::half_wave_plate(theta / 2.0), Placement::polarization(ArmCondition::x)});
        return CircuitRecipe(RecipeLabel::mz_entangled, theta, std::move(steps));
    }

    static CircuitRecipe for_family(Family f, double param) {
        return f == Family::product ? sagnac_product(param) : mz_entangled(param);
    }

    RecipeLabel label() const { return label_; }
    double parameter() const { return parameter_; }
    const std::vector<RecipeStep>& steps() const { return steps_; }

private:
    CircuitRecipe(RecipeLabel label, double parameter, std::vector<RecipeStep> steps)
        : label_(label), parameter_(parameter), steps_(std::move(steps)) {}

    RecipeLabel label_;
    double parameter_;
    std::vector<RecipeStep> steps_;
};

inline PolPathState run_recipe(const CircuitRecipe& recipe) {
    PolPathState state = PolPathState::basis(Pol::h, PathMode::x);
    for (const RecipeStep& step : recipe.steps()) {
        if (const auto* pe = std::get_if<PlacedElement>(&step))
            state = apply_placed(state, pe->element, pe->placement);
        else
            state = apply_beamsplitter(state, std::get<BeamSplitter>(step));
    }
    return state;
}

}  // namespace polbell
