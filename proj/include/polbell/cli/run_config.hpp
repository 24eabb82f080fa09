#pragma once

// Command configuration assembled from an optional JSON file and command-line
// flags. Flags win over file values; unknown JSON keys are rejected.

#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polbell/error.hpp"
#include "polbell/prep.hpp"
#include "polbell/sweep.hpp"

namespace polbell::cli {

struct RunConfig {
    std::optional<std::string> family;
    std::optional<double> delta;
    std::optional<double> theta;
    std::optional<double> delta1;
    std::optional<double> grid_start;
    std::optional<double> grid_end;
    std::optional<int> grid_points;
    std::optional<double> sigma_rel;
    std::optional<std::uint64_t> noise_seed;
    std::optional<std::string> estimator;
    std::optional<int> repetitions;

    // Flag-only settings.
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> in;
    std::optional<std::string> preset;
    std::optional<std::string> via;
    std::optional<std::string> strategy;
    std::optional<std::size_t> samples;
    bool degrees = false;
    std::vector<int> only;

    /// Every field set in `over` replaces the corresponding one here.
    RunConfig overridden_by(const RunConfig& over) const {
        RunConfig r = *this;
        auto take = [](auto& dst, const auto& src) {
            if (src) dst = src;
        };
        take(r.family, over.family);
        take(r.delta, over.delta);
        take(r.theta, over.theta);
        take(r.delta1, over.delta1);
        take(r.grid_start, over.grid_start);
        take(r.grid_end, over.grid_end);
        take(r.grid_points, over.grid_points);
        take(r.sigma_rel, over.sigma_rel);
        take(r.noise_seed, over.noise_seed);
        take(r.estimator, over.estimator);
        take(r.repetitions, over.repetitions);
        take(r.seed, over.seed);
        take(r.out, over.out);
        take(r.in, over.in);
        take(r.preset, over.preset);
        take(r.via, over.via);
        take(r.strategy, over.strategy);
        take(r.samples, over.samples);
        r.degrees = degrees || over.degrees;
        if (!over.only.empty()) r.only = over.only;
        return r;
    }

    double angle(double v) const { return degrees ? v * std::numbers::pi / 180.0 : v; }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw Error(ErrorCode::parse_error, "unknown config key '" + where + it.key() + "'");
    }
}

template <typename T>
std::optional<T> get(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace detail

/// Schema: {family, delta, theta, delta1, grid{start,end,points},
/// noise{sigma_rel,seed}, estimator, repetitions}, all optional.
inline RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");
    detail::reject_unknown(j, {"family", "delta", "theta", "delta1", "grid", "noise", "estimator", "repetitions"}, "");
    RunConfig c;
    c.family = detail::get<std::string>(j, "family");
    c.delta = detail::get<double>(j, "delta");
    c.theta = detail::get<double>(j, "theta");
    c.delta1 = detail::get<double>(j, "delta1");
    c.estimator = detail::get<std::string>(j, "estimator");
    c.repetitions = detail::get<int>(j, "repetitions");
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object()) throw Error(ErrorCode::parse_error, "config key 'grid' must be an object");
        detail::reject_unknown(g, {"start", "end", "points"}, "grid.");
        c.grid_start = detail::get<double>(g, "start");
        c.grid_end = detail::get<double>(g, "end");
        c.grid_points = detail::get<int>(g, "points");
    }
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        if (!n.is_object()) throw Error(ErrorCode::parse_error, "config key 'noise' must be an object");
        detail::reject_unknown(n, {"sigma_rel", "seed"}, "noise.");
        c.sigma_rel = detail::get<double>(n, "sigma_rel");
        c.noise_seed = detail::get<std::uint64_t>(n, "seed");
    }
    return c;
}

/// Throws parse_error for malformed JSON, invalid_argument when unreadable.
inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_argument, "cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, "config file '" + path + "': " + e.what());
    }
    return parse_config(j);
}

inline constexpr std::uint64_t kDefaultSeed = 1;

inline NoiseModel noise_model(const RunConfig& c) {
    return {c.sigma_rel.value_or(kDefaultSigmaRel), c.noise_seed.value_or(c.seed.value_or(kDefaultSeed))};
}

/// Sweep settings, layering preset < file < flags (the caller merges the
/// last two before calling).
inline SweepConfig sweep_config(const RunConfig& c) {
    SweepConfig s;
    if (c.preset) {
        if (*c.preset == "fig5-left")
            s.family = Family::product;
        else if (*c.preset == "fig5-right")
            s.family = Family::entangled;
        else
            throw Error(ErrorCode::invalid_argument, "unknown preset '" + *c.preset + "'");
        s.delta1_fixed = kDefaultDelta1;
        s.grid_start = 0.0;
        s.grid_end = 2.0 * std::numbers::pi;
        s.grid_points = 360;
    } else if (!c.family) {
        throw Error(ErrorCode::invalid_argument, "sweep needs --family or --preset");
    }
    if (c.family) s.family = parse_family(*c.family);
    if (c.delta1) s.delta1_fixed = c.angle(*c.delta1);
    if (c.grid_start) s.grid_start = c.angle(*c.grid_start);
    if (c.grid_end) s.grid_end = c.angle(*c.grid_end);
    if (c.grid_points) s.grid_points = *c.grid_points;
    if (c.estimator) s.estimator.kind = parse_estimator(*c.estimator);
    s.estimator.noise = noise_model(c);
    s.estimator.repetitions = c.repetitions.value_or(1);
    return s;
}

/// The family parameter: delta for product, theta for entangled.
inline double family_param(const RunConfig& c, Family f) {
    const auto& v = f == Family::product ? c.delta : c.theta;
    if (!v) throw Error(ErrorCode::invalid_argument, f == Family::product ? "product family needs --delta"
                                                                           : "entangled family needs --theta");
    return c.angle(*v);
}

}  // namespace polbell::cli
