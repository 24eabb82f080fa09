#pragma once

/**
 * @file lhv.hpp
 * @brief Finite local-hidden-variable models and their BCHSH value.
 *
 * A strategy is a distribution rho over a finite set Lambda together with
 * deterministic +-1 assignments A_a(lambda), A_a'(lambda), B_b(lambda),
 * B_b'(lambda). Correlations are eta(s, t) = sum_lambda rho_lambda A_s B_t.
 * For every lambda,
 *   S(lambda) = [A_a + A_a'] B_b + [A_a - A_a'] B_b' = +-2,
 * so the averaged combination can never exceed 2 in magnitude.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "polbell/error.hpp"
#include "polbell/tomo.hpp"

namespace polbell {

enum class AliceSetting { a, a_prime };
enum class BobSetting { b, b_prime };

/// Outcomes assigned by one hidden-variable value.
struct LocalAssignment {
    int a = 1;
    int a_prime = 1;
    int b = 1;
    int b_prime = 1;

    int alice(AliceSetting s) const { return s == AliceSetting::a ? a : a_prime; }
    int bob(BobSetting s) const { return s == BobSetting::b ? b : b_prime; }
};

inline constexpr std::size_t kMaxLambda = std::size_t{1} << 16;

class LHVStrategy {
public:
    /// Validates +-1 assignments, nonnegative rho summing to 1 within 1e-12,
    /// and 1 <= |Lambda| <= 2^16.
    LHVStrategy(std::vector<double> rho, std::vector<LocalAssignment> assignments)
        : rho_(std::move(rho)), assign_(std::move(assignments)) {
        if (rho_.empty() || rho_.size() > kMaxLambda)
            throw Error(ErrorCode::invalid_argument, "hidden-variable space must have 1..2^16 elements");
        if (rho_.size() != assign_.size())
            throw Error(ErrorCode::invalid_argument, "rho and assignment tables differ in size");
        double total = 0.0;
        for (double p : rho_) {
            if (!(p >= 0.0)) throw Error(ErrorCode::invalid_argument, "rho must be nonnegative");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "rho must sum to 1");
        auto pm1 = [](int v) { return v == 1 || v == -1; };
        for (const auto& la : assign_)
            if (!pm1(la.a) || !pm1(la.a_prime) || !pm1(la.b) || !pm1(la.b_prime))
                throw Error(ErrorCode::invalid_argument, "assignments must be +1 or -1");
    }

    std::size_t lambda_count() const { return rho_.size(); }
    const std::vector<double>& rho() const { return rho_; }
    const std::vector<LocalAssignment>& assignments() const { return assign_; }

private:
    std::vector<double> rho_;
    std::vector<LocalAssignment> assign_;
};

inline double lhv_correlation(const LHVStrategy& st, AliceSetting sa, BobSetting sb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < st.lambda_count(); ++i) {
        const LocalAssignment& la = st.assignments()[i];
        acc += st.rho()[i] * la.alice(sa) * la.bob(sb);
    }
    return acc;
}

/// S(lambda) for one assignment; always -2 or +2 for +-1 values.
inline int lhv_pointwise(const LocalAssignment& la) {
    return (la.a + la.a_prime) * la.b + (la.a - la.a_prime) * la.b_prime;
}

/// |eta(a,b) + eta(a,b') + eta(a',b) - eta(a',b')|. Throws
/// invariant_violation if any S(lambda) is not exactly +-2.
inline double lhv_bell(const LHVStrategy& st) {
    for (const LocalAssignment& la : st.assignments()) {
        const int s = lhv_pointwise(la);
        if (s != 2 && s != -2) throw Error(ErrorCode::invariant_violation, "pointwise S(lambda) is not +-2");
    }
    using A = AliceSetting;
    using B = BobSetting;
    return std::abs(lhv_correlation(st, A::a, B::b) + lhv_correlation(st, A::a, B::b_prime) +
                    lhv_correlation(st, A::a_prime, B::b) - lhv_correlation(st, A::a_prime, B::b_prime));
}

/// Deterministic all-(+1) strategy; its Bell value is exactly 2.
inline LHVStrategy saturating_strategy() { return LHVStrategy({1.0}, {LocalAssignment{}}); }

/// Random +-1 tables over |Lambda| uniform in [1, max_lambda] with a
/// flat-Dirichlet rho (normalized exponential draws).
inline LHVStrategy random_strategy(std::uint64_t seed, std::size_t max_lambda = 16) {
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<std::size_t> size_dist(1, max_lambda);
    std::bernoulli_distribution coin(0.5);
    std::exponential_distribution<double> expo(1.0);
    const std::size_t n = size_dist(eng);
    std::vector<double> rho(n);
    std::vector<LocalAssignment> table(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = expo(eng);
        total += rho[i];
        auto pm = [&] { return coin(eng) ? 1 : -1; };
        table[i] = {pm(), pm(), pm(), pm()};
    }
    for (double& p : rho) p /= total;
    return LHVStrategy(std::move(rho), std::move(table));
}

struct LhvFuzzResult {
    std::size_t samples = 0;
    double max_s = 0.0;
    std::size_t argmax = 0;  // strategy id: index into the sampled sequence
    std::size_t violations = 0;  // cases above 2 + 1e-12
};

/// Evaluates `samples` random strategies; case i uses derive_seed(seed, i).
inline LhvFuzzResult lhv_fuzz(std::size_t samples, std::uint64_t seed, std::size_t max_lambda = 16) {
    LhvFuzzResult res;
    res.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = lhv_bell(random_strategy(derive_seed(seed, i), max_lambda));
        if (s > res.max_s || i == 0) {
            res.max_s = s;
            res.argmax = i;
        }
        if (s > 2.0 + 1e-12) ++res.violations;
    }
    return res;
}

}  // namespace polbell
