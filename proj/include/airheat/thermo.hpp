#ifndef AIRHEAT_THERMO_HPP
#define AIRHEAT_THERMO_HPP

#include <cmath>
#include <string>

#include "airheat/error.hpp"

namespace airheat {

/// Universal gas constant, J/(mol K).
inline constexpr double kGasConstant = 8.314462618;

/// Relative tolerance for state and energy invariants.
inline constexpr double kInvariantRelTol = 1e-9;

/// Relative tolerance when checking analytic endpoints against
/// numerical integration oracles.
inline constexpr double kIntegrationRelTol = 1e-6;

/// gamma and c_v must satisfy gamma = 1 + 1/c_v this tightly.
inline constexpr double kGasConsistencyRelTol = 1e-12;

inline bool nearly_equal_rel(double a, double b, double rel_tol) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= rel_tol * std::max(scale, 1e-300);
}

/// Molar properties of an ideal gas. c_v is the dimensionless molar heat
/// capacity at constant volume, in units of the gas constant.
struct GasProperties {
    double c_v;
    double gamma;

    static GasProperties from_c_v(double c_v) {
        if (!(c_v > 0.0))
            throw DomainError("GasProperties: c_v must be positive");
        return GasProperties{c_v, 1.0 + 1.0 / c_v};
    }

    static GasProperties from_gamma(double gamma) {
        if (!(gamma > 1.0))
            throw DomainError("GasProperties: gamma must exceed 1");
        return GasProperties{1.0 / (gamma - 1.0), gamma};
    }

    /// Construct from both values; they must describe the same gas.
    static GasProperties make(double c_v, double gamma) {
        if (!(c_v > 0.0) || !(gamma > 1.0))
            throw DomainError("GasProperties: c_v must be positive and gamma > 1");
        if (!nearly_equal_rel(gamma, 1.0 + 1.0 / c_v, kGasConsistencyRelTol))
            throw ConsistencyError("GasProperties: gamma != 1 + 1/c_v");
        return GasProperties{c_v, gamma};
    }

    /// Air: c_v = 5/2, gamma = 1.4.
    static GasProperties air() { return GasProperties{2.5, 1.4}; }
};

/// Thermodynamic state of a fixed amount of ideal gas. Pressure is absolute.
struct GasState {
    double n; // mol
    double P; // Pa, absolute
    double V; // m^3
    double T; // K

    bool satisfies_gas_law() const {
        return nearly_equal_rel(P * V, n * kGasConstant * T, kInvariantRelTol);
    }
};

enum class ProcessKind { isochoric, isobaric, isentropic, isothermal };

inline const char* to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::isochoric: return "isochoric";
        case ProcessKind::isobaric: return "isobaric";
        case ProcessKind::isentropic: return "isentropic";
        case ProcessKind::isothermal: return "isothermal";
    }
    return "?";
}

/// One quasi-static process with its energy accounting.
/// Sign convention: work_by_gas > 0 when the gas does work on the
/// surroundings, heat_into_gas > 0 when heat enters the gas.
struct ProcessStep {
    ProcessKind kind;
    GasState start;
    GasState end;
    double work_by_gas;   // J
    double heat_into_gas; // J
    double delta_u;       // J
};

inline GasState state_from_pvn(double P, double V, double n, const GasProperties&) {
    if (!(P > 0.0) || !(V > 0.0) || !(n > 0.0))
        throw DomainError("state_from_pvn: P, V, n must be positive");
    return GasState{n, P, V, P * V / (n * kGasConstant)};
}

inline GasState state_from_tvn(double T, double V, double n) {
    if (!(T > 0.0) || !(V > 0.0) || !(n > 0.0))
        throw DomainError("state_from_tvn: T, V, n must be positive");
    return GasState{n, n * kGasConstant * T / V, V, T};
}

/// U = n c_v R T.
inline double internal_energy(const GasState& s, const GasProperties& props) {
    return s.n * props.c_v * kGasConstant * s.T;
}

inline ProcessStep advance_isochoric(const GasState& s, double T_target,
                                     const GasProperties& props) {
    if (!(T_target > 0.0))
        throw DomainError("advance_isochoric: target temperature must be positive");
    GasState end{s.n, s.P * T_target / s.T, s.V, T_target};
    double dU = s.n * props.c_v * kGasConstant * (end.T - s.T);
    return ProcessStep{ProcessKind::isochoric, s, end, 0.0, dU, dU};
}

inline ProcessStep advance_isobaric(const GasState& s, double V_target,
                                    const GasProperties& props) {
    if (!(V_target > 0.0))
        throw DomainError("advance_isobaric: target volume must be positive");
    GasState end{s.n, s.P, V_target, s.T * V_target / s.V};
    double W = s.P * (V_target - s.V);
    double dU = s.n * props.c_v * kGasConstant * (end.T - s.T);
    return ProcessStep{ProcessKind::isobaric, s, end, W, dU + W, dU};
}

inline ProcessStep advance_isentropic(const GasState& s, double V_target,
                                      const GasProperties& props) {
    if (!(V_target > 0.0))
        throw DomainError("advance_isentropic: target volume must be positive");
    double ratio = s.V / V_target;
    GasState end{s.n, s.P * std::pow(ratio, props.gamma), V_target,
                 s.T * std::pow(ratio, props.gamma - 1.0)};
    double dU = s.n * props.c_v * kGasConstant * (end.T - s.T);
    return ProcessStep{ProcessKind::isentropic, s, end, -dU, 0.0, dU};
}

inline ProcessStep advance_isothermal(const GasState& s, double V_target,
                                      const GasProperties&) {
    if (!(V_target > 0.0))
        throw DomainError("advance_isothermal: target volume must be positive");
    GasState end{s.n, s.P * s.V / V_target, V_target, s.T};
    double W = s.n * kGasConstant * s.T * std::log(V_target / s.V);
    return ProcessStep{ProcessKind::isothermal, s, end, W, W, 0.0};
}

/// Ideal-gas entropy change between step endpoints:
/// dS = n R (c_v ln(T2/T1) + ln(V2/V1)).
inline double entropy_change(const ProcessStep& step, const GasProperties& props) {
    const GasState& a = step.start;
    const GasState& b = step.end;
    return a.n * kGasConstant *
           (props.c_v * std::log(b.T / a.T) + std::log(b.V / a.V));
}

} // namespace airheat

#endif
