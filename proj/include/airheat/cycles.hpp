#ifndef AIRHEAT_CYCLES_HPP
#define AIRHEAT_CYCLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "airheat/thermo.hpp"

namespace airheat {

/// Ordered closed sequence of process steps.
struct Cycle {
    std::vector<ProcessStep> steps;
    std::string label;

    bool is_closed(double rel_tol = kInvariantRelTol) const {
        if (steps.empty()) return false;
        const GasState& a = steps.back().end;
        const GasState& b = steps.front().start;
        return nearly_equal_rel(a.P, b.P, rel_tol) &&
               nearly_equal_rel(a.V, b.V, rel_tol) &&
               nearly_equal_rel(a.T, b.T, rel_tol);
    }
};

struct CycleMetrics {
    double net_work;   // J
    double heat_in;    // J, sum over steps with Q > 0
    double heat_out;   // J, magnitude of the sum over steps with Q < 0
    double efficiency; // net_work / heat_in
    double T_min, T_max; // K
    double P_min, P_max; // Pa, absolute
    double V_min, V_max; // m^3
};

inline void require_gas_consistency(double gamma, double c_v,
                                    double rel_tol = 1e-9) {
    if (!nearly_equal_rel(gamma, 1.0 + 1.0 / c_v, rel_tol))
        throw ConsistencyError("gamma and c_v do not describe the same gas");
}

/// Rectangular cycle: isochoric heating to P_high, isobaric expansion by r,
/// isochoric cooling back to the start pressure, isobaric compression home.
inline Cycle build_constant_load_cycle(const GasState& start, double P_high,
                                       double r, const GasProperties& props) {
    if (!(r > 1.0))
        throw ConstraintError("constant-load cycle: expansion ratio must exceed 1");
    if (!(P_high > start.P))
        throw ConstraintError("constant-load cycle: P_high must exceed start pressure");
    Cycle c;
    c.label = "constant_load";
    ProcessStep s1 = advance_isochoric(start, start.T * P_high / start.P, props);
    ProcessStep s2 = advance_isobaric(s1.end, r * start.V, props);
    ProcessStep s3 = advance_isochoric(s2.end, s2.end.T * start.P / P_high, props);
    ProcessStep s4 = advance_isobaric(s3.end, start.V, props);
    c.steps = {s1, s2, s3, s4};
    return c;
}

/// Otto cycle starting from the low-temperature, large-volume corner:
/// isentropic compression by r, isochoric heating to T_max, isentropic
/// expansion back to the start volume, isochoric rejection home.
inline Cycle build_otto_cycle(const GasState& start, double r, double T_max,
                              const GasProperties& props) {
    if (!(r > 1.0))
        throw ConstraintError("Otto cycle: expansion ratio must exceed 1");
    double T2 = start.T * std::pow(r, props.gamma - 1.0);
    if (!(T_max > T2))
        throw ConstraintError(
            "Otto cycle: T_max must exceed the post-compression temperature");
    Cycle c;
    c.label = "otto";
    ProcessStep s1 = advance_isentropic(start, start.V / r, props);
    ProcessStep s2 = advance_isochoric(s1.end, T_max, props);
    ProcessStep s3 = advance_isentropic(s2.end, start.V, props);
    ProcessStep s4 = advance_isochoric(s3.end, start.T, props);
    c.steps = {s1, s2, s3, s4};
    return c;
}

inline CycleMetrics evaluate(const Cycle& c) {
    if (c.steps.empty())
        throw DomainError("evaluate: empty cycle");
    if (!c.is_closed())
        throw ConstraintError("evaluate: cycle is not closed");
    CycleMetrics m{};
    m.T_min = m.P_min = m.V_min = std::numeric_limits<double>::infinity();
    m.T_max = m.P_max = m.V_max = -std::numeric_limits<double>::infinity();
    for (const ProcessStep& s : c.steps) {
        m.net_work += s.work_by_gas;
        if (s.heat_into_gas > 0.0)
            m.heat_in += s.heat_into_gas;
        else
            m.heat_out -= s.heat_into_gas;
        for (const GasState* g : {&s.start, &s.end}) {
            m.T_min = std::min(m.T_min, g->T);
            m.T_max = std::max(m.T_max, g->T);
            m.P_min = std::min(m.P_min, g->P);
            m.P_max = std::max(m.P_max, g->P);
            m.V_min = std::min(m.V_min, g->V);
            m.V_max = std::max(m.V_max, g->V);
        }
    }
    if (!(m.heat_in > 0.0))
        throw DomainError("evaluate: cycle has no heat input, efficiency undefined");
    m.efficiency = m.net_work / m.heat_in;
    return m;
}

/// Constant-load efficiency, general form:
/// eta = (P2 - P1)(V3 - V2) / (P2 (V3 - V2) + U3 - U1).
inline double efficiency_cl_general(double P1, double P2, double V2, double V3,
                                    double U1, double U3) {
    if (!(P2 >= P1))
        throw DomainError("efficiency_cl_general: P2 must not be below P1");
    if (!(V3 >= V2))
        throw DomainError("efficiency_cl_general: V3 must not be below V2");
    double denom = P2 * (V3 - V2) + (U3 - U1);
    if (!(denom > 0.0))
        throw DomainError("efficiency_cl_general: non-positive denominator");
    return (P2 - P1) * (V3 - V2) / denom;
}

/// Constant-load efficiency in ratio form:
/// eta = (x/r - 1)(r - 1) / ((x/r)(r - 1) + c_v (x - 1)).
inline double efficiency_cl_ideal(double x, double r, double c_v) {
    if (!(r > 1.0))
        throw ConstraintError("efficiency_cl_ideal: requires r > 1");
    if (!(x > r))
        throw ConstraintError("efficiency_cl_ideal: requires x > r");
    double pr = x / r;
    return (pr - 1.0) * (r - 1.0) / (pr * (r - 1.0) + c_v * (x - 1.0));
}

/// Otto efficiency from corner internal energies: 1 - (U4 - U1)/(U3 - U2).
inline double efficiency_otto_general(double U1, double U2, double U3, double U4) {
    if (!(U3 > U2))
        throw DomainError("efficiency_otto_general: requires U3 > U2 (heat addition)");
    if (!(U4 >= U1))
        throw DomainError("efficiency_otto_general: requires U4 >= U1");
    return 1.0 - (U4 - U1) / (U3 - U2);
}

/// Ideal-gas Otto efficiency: 1 - r^(1-gamma).
inline double efficiency_otto_ideal(double r, double gamma) {
    if (!(r >= 1.0))
        throw DomainError("efficiency_otto_ideal: requires r >= 1");
    if (!(gamma > 1.0))
        throw DomainError("efficiency_otto_ideal: requires gamma > 1");
    return 1.0 - std::pow(r, 1.0 - gamma);
}

/// Exclusive upper bound on the constant-load expansion ratio: r < x.
inline double max_expansion_ratio_cl(double x) {
    if (!(x > 1.0))
        throw DomainError("max_expansion_ratio_cl: requires x > 1");
    return x;
}

/// Exclusive upper bound on the Otto expansion ratio: r < x^(1/(gamma-1)).
inline double max_expansion_ratio_otto(double x, double gamma) {
    if (!(x > 1.0))
        throw DomainError("max_expansion_ratio_otto: requires x > 1");
    if (!(gamma > 1.0))
        throw DomainError("max_expansion_ratio_otto: requires gamma > 1");
    return std::pow(x, 1.0 / (gamma - 1.0));
}

inline double carnot_efficiency(double T1, double T3) {
    if (!(T1 > 0.0) || !(T3 > T1))
        throw DomainError("carnot_efficiency: requires T3 > T1 > 0");
    return 1.0 - T1 / T3;
}

} // namespace airheat

#endif
