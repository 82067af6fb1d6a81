#pragma once

// Pure decision tables mapping (lambda, q, p) to regularity verdicts, with
// provenance codes naming the case of the classification tables each verdict
// comes from.  The engine never extrapolates: parameter regions without a
// stated result come back NotCovered / Unknown.

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pjx {

enum class LinftyOutcome {
    GlobalVanish,
    GlobalNontrivialSteady,
    TwoSidedEverywhere,
    OneSidedDiscreteMin,
    OneSidedDiscreteMax,
    NotCovered
};

enum class Tristate { finite, infinite, unknown };

struct RegularityVerdict {
    LinftyOutcome linfty = LinftyOutcome::NotCovered;
    Tristate t_star_finite = Tristate::unknown;
    std::string provenance;
    std::vector<std::string> caveats;
};

enum class LpOutcome { FiniteAtTstar, DivergesAtTstar, Unknown };

struct LpVerdict {
    double p = 1.0;
    LpOutcome outcome = LpOutcome::Unknown;
    std::string provenance;
};

inline const char* to_string(LinftyOutcome o) {
    switch (o) {
        case LinftyOutcome::GlobalVanish: return "global_vanish";
        case LinftyOutcome::GlobalNontrivialSteady: return "global_nontrivial_steady";
        case LinftyOutcome::TwoSidedEverywhere: return "two_sided_everywhere";
        case LinftyOutcome::OneSidedDiscreteMin: return "one_sided_discrete_min";
        case LinftyOutcome::OneSidedDiscreteMax: return "one_sided_discrete_max";
        default: return "not_covered";
    }
}

inline const char* to_string(Tristate t) {
    switch (t) {
        case Tristate::finite: return "finite";
        case Tristate::infinite: return "infinite";
        default: return "unknown";
    }
}

inline const char* to_string(LpOutcome o) {
    switch (o) {
        case LpOutcome::FiniteAtTstar: return "finite_at_t_star";
        case LpOutcome::DivergesAtTstar: return "diverges_at_t_star";
        default: return "unknown";
    }
}

namespace detail {

inline bool near_excluded_lambda_q(double lambda, double q) {
    for (int n = 1; n <= 1000; ++n) {
        const double den = 1.0 - n * q;
        if (std::fabs(den) > 1e-12 && std::fabs(lambda - q / den) < 1e-9) return true;
        if (std::fabs(q - 1.0 / n) < 1e-9) return true;
    }
    return false;
}

inline RegularityVerdict verdict(LinftyOutcome o, Tristate t, std::string prov) {
    RegularityVerdict v;
    v.linfty = o;
    v.t_star_finite = t;
    v.provenance = std::move(prov);
    return v;
}

}  // namespace detail

// L-infinity classification from the sign of lambda and the curvature
// exponent q of the data near the active extremum.
inline RegularityVerdict classify_linfty(double lambda, double q) {
    using O = LinftyOutcome;
    using T = Tristate;
    if (!(q > 0.0)) throw std::domain_error("classify_linfty: q must be positive");

    if (lambda == 0.0) {
        auto v = detail::verdict(O::GlobalVanish, T::infinite, "T3.3(1), lambda = 0");
        v.caveats.push_back("lambda = 0 settled by prior results; long-time profile not asserted");
        return v;
    }

    if (q == 1.0) {  // the dedicated q = 1 table
        if (lambda > 0.5) return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.1(1)");
        if (lambda == 0.5) return detail::verdict(O::GlobalNontrivialSteady, T::infinite, "T3.1(2)");
        if (lambda > 0.0) return detail::verdict(O::GlobalVanish, T::infinite, "T3.1(2)");
        return detail::verdict(O::OneSidedDiscreteMin, T::finite, "T3.1(3)");
    }

    if (lambda > 0.0) {
        if (lambda < q / 2.0) return detail::verdict(O::GlobalVanish, T::infinite, "T3.3(1)");
        if (lambda == q / 2.0)
            return detail::verdict(O::GlobalNontrivialSteady, T::infinite, "T3.3(1)");
        if (lambda < q) return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.3(2)");
        if (lambda == q)
            return detail::verdict(O::NotCovered, T::unknown, "boundary lambda = q between T3.3(2) and T3.3(5)");
        // lambda > q
        if (q > 1.0) return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.3(5)");
        if (q > 0.5) {  // q in (1/2, 1)
            const double thr = q / (1.0 - q);
            if (lambda < thr) return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.3(4)");
            if (lambda == thr)
                return detail::verdict(O::NotCovered, T::unknown, "boundary lambda = q/(1-q) in T3.3(4)");
            return detail::verdict(O::OneSidedDiscreteMax, T::finite, "T3.3(4)");
        }
        if (q < 0.5) {
            if (lambda > 1.0) {
                auto v = detail::verdict(O::OneSidedDiscreteMax, T::finite, "T3.3(3)");
                if (detail::near_excluded_lambda_q(lambda, q))
                    v.caveats.push_back("excluded parameter line; verdict by continuity");
                return v;
            }
            if (q > 1.0 / 3.0 && lambda > 0.5 && lambda < q / (1.0 - q))
                return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.3(3)");
            return detail::verdict(O::NotCovered, T::unknown, "gap above lambda = q, q < 1/2 (nearest: T3.3(3))");
        }
        return detail::verdict(O::NotCovered, T::unknown, "q = 1/2 boundary not stated");
    }

    // lambda < 0
    if (lambda >= -1.0) return detail::verdict(O::OneSidedDiscreteMin, T::finite, "T3.5(1)");
    if (q < 1.0) {
        auto v = detail::verdict(O::OneSidedDiscreteMin, T::finite, "T3.5(2)");
        if (detail::near_excluded_lambda_q(lambda, q))
            v.caveats.push_back("excluded parameter line; verdict by continuity");
        return v;
    }
    // q > 1
    const double thr = q / (1.0 - q);  // negative
    if (lambda > thr) return detail::verdict(O::OneSidedDiscreteMin, T::finite, "T3.5(2)");
    if (lambda == thr)
        return detail::verdict(O::NotCovered, T::unknown, "boundary lambda = q/(1-q) in T3.5");
    return detail::verdict(O::TwoSidedEverywhere, T::finite, "T3.5(3)");
}

// L^p classification, p in [1, infinity).
inline LpVerdict classify_lp(double lambda, double q, double p) {
    using L = LpOutcome;
    if (!(p >= 1.0)) throw std::domain_error("classify_lp: p >= 1 required");
    if (!(q > 0.0)) throw std::domain_error("classify_lp: q must be positive");
    LpVerdict v;
    v.p = p;
    auto set = [&](L o, const char* prov) {
        v.outcome = o;
        v.provenance = prov;
        return v;
    };

    if (lambda == 0.0) return set(L::FiniteAtTstar, "T3.4(1)");

    if (q == 1.0) {
        if (lambda > 0.5) {
            if (p > 1.0) return set(L::DivergesAtTstar, "T3.2(1)");
            return set(L::Unknown, "p = 1 not stated for lambda > 1/2");
        }
        if (lambda > 0.0) return set(L::FiniteAtTstar, "T3.4(1)");
        // lambda < 0
        if (p == 1.0) return set(L::FiniteAtTstar, "T3.2(2)");
        if (p == 2.0 && lambda <= -1.0) return set(L::DivergesAtTstar, "T3.2(3)");
        if (p == 3.0 && lambda <= -0.5) return set(L::DivergesAtTstar, "T3.2(3)");
        if (lambda > 1.0 / (1.0 - p)) return set(L::FiniteAtTstar, "T3.2(2)");
        return set(L::Unknown, "below 1/(1-p): lower bound inconclusive");
    }

    if (lambda > 0.0) {
        if (lambda <= q / 2.0) return set(L::FiniteAtTstar, "T3.4(1)");
        if (lambda < q) {
            if (p > 1.0) return set(L::DivergesAtTstar, "T3.4(2)");
            return set(L::Unknown, "p = 1 not stated for two-sided blow-up");
        }
        if (lambda > q && q > 1.0) {
            if (p > 1.0) return set(L::DivergesAtTstar, "T3.4(2)");
            return set(L::Unknown, "p = 1 not stated for two-sided blow-up");
        }
        if (q > 1.0 / 3.0 && q < 0.5 && lambda > 0.5 && lambda < q / (1.0 - q) && p > 1.0)
            return set(L::DivergesAtTstar, "T3.4(2)");
        if (q < 0.5 && p < 2.0 && lambda > 1.0 / (2.0 - p))
            return set(L::FiniteAtTstar, "T3.4(3)");
        if (q > 0.5 && q < 1.0 && lambda > q) {
            if (lambda < q / (1.0 - q) && p > 1.0) return set(L::DivergesAtTstar, "T3.4(4)");
            if (p < 1.0 / q && lambda > q / (1.0 - p * q))
                return set(L::FiniteAtTstar, "T3.4(4)");
        }
        return set(L::Unknown, "not stated");
    }

    // lambda < 0
    if (q < 0.5) {
        if (p <= 2.0) return set(L::FiniteAtTstar, "T3.6(1)");
        if (lambda > 1.0 / (2.0 - p)) return set(L::FiniteAtTstar, "T3.6(1)");
        return set(L::Unknown, "not stated");
    }
    if (q > 0.5 && q < 1.0) {
        if (p <= 1.0 / q) return set(L::FiniteAtTstar, "T3.6(2)");
        if (lambda > q / (1.0 - p * q)) return set(L::FiniteAtTstar, "T3.6(2)");
        return set(L::Unknown, "not stated");
    }
    if (q > 1.0) {
        if (lambda > q / (1.0 - p * q)) return set(L::FiniteAtTstar, "T3.6(3)");
        if (p > 1.0 && lambda < q / (p * (1.0 - q))) return set(L::DivergesAtTstar, "T3.6(3)");
        return set(L::Unknown, "not stated");
    }
    return set(L::Unknown, "q = 1/2 boundary not stated");
}

// ---------------------------------------------------------------------------
// Energy verdict (stated for q = 1 only).
// ---------------------------------------------------------------------------

enum class EnergyTrend { Diverges, Finite };
enum class EnergyRateTrend { DivergesPlus, IdenticallyZero, Bounded };
enum class CubicTrend { PlusInfinity, MinusInfinity, Bounded };

struct EnergyVerdict {
    EnergyTrend energy = EnergyTrend::Finite;
    EnergyRateTrend rate = EnergyRateTrend::Bounded;
    LpOutcome l3 = LpOutcome::Unknown;
    CubicTrend cubic = CubicTrend::Bounded;
    std::string provenance;
};

inline EnergyVerdict classify_energy(double lambda, double q = 1.0) {
    if (q != 1.0) throw std::domain_error("classify_energy: stated for q = 1 only");
    EnergyVerdict v;
    v.provenance = "T3.2(3)";
    v.energy = (lambda <= -1.0 || lambda > 0.5) ? EnergyTrend::Diverges : EnergyTrend::Finite;
    if (lambda == -0.5)
        v.rate = EnergyRateTrend::IdenticallyZero;
    else if (lambda < -0.5 || lambda > 0.5)
        v.rate = EnergyRateTrend::DivergesPlus;
    else
        v.rate = EnergyRateTrend::Bounded;
    v.l3 = (lambda <= -0.5 || lambda > 0.5) ? LpOutcome::DivergesAtTstar : LpOutcome::FiniteAtTstar;
    if (lambda > 0.5)
        v.cubic = CubicTrend::PlusInfinity;
    else if (lambda <= -0.5)
        v.cubic = CubicTrend::MinusInfinity;
    else
        v.cubic = CubicTrend::Bounded;
    return v;
}

// Smooth data whose second derivative has a zero of odd order k at every
// extremal location; equivalent to q = k + 1 in the general tables.
inline RegularityVerdict classify_smooth(double lambda, int k) {
    using O = LinftyOutcome;
    using T = Tristate;
    if (k < 1 || k % 2 == 0)
        throw std::domain_error("classify_smooth: k must be an odd positive integer");
    const double kk = k;
    if (lambda == 0.0) {
        auto v = detail::verdict(O::GlobalVanish, T::infinite, "C3.2(1), lambda = 0");
        v.caveats.push_back("lambda = 0 settled by prior results; long-time profile not asserted");
        return v;
    }
    if (lambda > 0.0) {
        if (lambda < 0.5 * (1.0 + kk)) return detail::verdict(O::GlobalVanish, T::infinite, "C3.2(1)");
        if (lambda == 0.5 * (1.0 + kk))
            return detail::verdict(O::GlobalNontrivialSteady, T::infinite, "C3.2(1)");
        auto v = detail::verdict(O::TwoSidedEverywhere, T::finite, "C3.2(1)");
        v.caveats.push_back("L^p diverges for every p > 1");
        return v;
    }
    const double thr = -(1.0 + kk) / kk;
    if (lambda > thr) return detail::verdict(O::OneSidedDiscreteMin, T::finite, "C3.2(2)");
    if (lambda == thr)
        return detail::verdict(O::NotCovered, T::unknown, "boundary lambda = -(1+k)/k in C3.2");
    auto v = detail::verdict(O::TwoSidedEverywhere, T::finite, "C3.2(2)");
    v.caveats.push_back("blow-up is two-sided with +infinity off the extremal set");
    v.caveats.push_back("L^p diverges for p > 1 when lambda < -(1+k)/(p k)");
    return v;
}

// Stagnation point-form Euler regularity table: dim 2 is lambda = 1,
// dim 3 is lambda = 1/2.
enum class EulerOutcome { FiniteTimeBlowup, GlobalInTime, UnknownExpectedBlowup };

inline const char* to_string(EulerOutcome o) {
    switch (o) {
        case EulerOutcome::FiniteTimeBlowup: return "finite_time_blowup";
        case EulerOutcome::GlobalInTime: return "global_in_time";
        default: return "unknown_expected_blowup";
    }
}

inline EulerOutcome euler_spf(double q, int dim) {
    if (!(q > 0.0)) throw std::domain_error("euler_spf: q must be positive");
    if (dim != 2 && dim != 3) throw std::domain_error("euler_spf: dim must be 2 or 3");
    if (q <= 0.5) return EulerOutcome::UnknownExpectedBlowup;
    if (dim == 2) return q < 2.0 ? EulerOutcome::FiniteTimeBlowup : EulerOutcome::GlobalInTime;
    return q < 1.0 ? EulerOutcome::FiniteTimeBlowup : EulerOutcome::GlobalInTime;
}

}  // namespace pjx
