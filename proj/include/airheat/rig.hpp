#ifndef AIRHEAT_RIG_HPP
#define AIRHEAT_RIG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "airheat/error.hpp"

namespace airheat {

inline constexpr double kStandardGravity = 9.80665; // m/s^2
inline constexpr double kDefaultAmbientPressure = 101325.0; // Pa

/// Lever testing apparatus geometry. The actuator pushes on the lever at
/// r_a from the axle; a fixed mass m1 sits offset (r_mx1, r_my1) from the
/// axle and a removable mass m2 hangs at r_mx2.
struct LeverRig {
    double A = 1.809557368e-3; // m^2, nominal area of a 48 mm bore
    double r_a = 0.137;        // m
    double r_mx1 = 0.028;      // m
    double r_my1 = 0.210;      // m
    double r_mx2 = 0.200;      // m
    double g = kStandardGravity;
    double P_atm = kDefaultAmbientPressure;
    double wall_force = 0.0;   // N, optional actuator wall-deformation load

    void validate() const {
        if (!(A > 0.0) || !(r_a > 0.0))
            throw DomainError("LeverRig: A and r_a must be positive");
        if (r_mx1 < 0.0 || r_my1 < 0.0 || r_mx2 < 0.0)
            throw DomainError("LeverRig: offsets must be non-negative");
        if (!(g > 0.0))
            throw DomainError("LeverRig: g must be positive");
    }
};

enum class LoadMode { constant_load, otto };

/// Gauge pressure the lever demands from the actuator as a function of angle.
struct LoadProfile {
    std::vector<double> theta;   // rad, strictly increasing
    std::vector<double> p_gauge; // Pa
    LoadMode mode = LoadMode::constant_load;
};

inline void require_theta_in_range(double theta) {
    if (!(std::abs(theta) < std::numbers::pi / 2.0))
        throw DomainError("lever angle must lie in (-pi/2, pi/2)");
}

/// Constant-load demand: P = m2 g cos(theta) r_mx2 / (A r_a).
inline double pressure_constant_load(const LeverRig& rig, double theta, double m2) {
    require_theta_in_range(theta);
    if (m2 < 0.0)
        throw DomainError("pressure_constant_load: mass must be non-negative");
    double torque = m2 * rig.g * std::cos(theta) * rig.r_mx2;
    return torque / (rig.A * rig.r_a) + rig.wall_force / rig.A;
}

/// Otto demand with the offset fixed mass:
/// P = (m1 g cos(theta) r_mx1 - m1 g sin(theta) r_my1 + m2 g cos(theta) r_mx2)
///     / (A r_a).
/// With m2 = 0 this is the restoring profile.
inline double pressure_otto(const LeverRig& rig, double theta, double m1, double m2) {
    require_theta_in_range(theta);
    if (m1 < 0.0 || m2 < 0.0)
        throw DomainError("pressure_otto: masses must be non-negative");
    double torque = m1 * rig.g * (std::cos(theta) * rig.r_mx1 -
                                  std::sin(theta) * rig.r_my1) +
                    m2 * rig.g * std::cos(theta) * rig.r_mx2;
    return torque / (rig.A * rig.r_a) + rig.wall_force / rig.A;
}

struct PositiveWorkCheck {
    bool positive;
    double margin; // Pa, minimum pointwise expand - restore difference
};

/// The expansion profile must exceed the restoring profile at every angle.
inline PositiveWorkCheck check_positive_work(const LoadProfile& expand,
                                             const LoadProfile& restore) {
    if (expand.theta.size() != restore.theta.size() || expand.theta.empty())
        throw DataError("check_positive_work: profiles must share theta samples");
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < expand.theta.size(); ++k) {
        if (expand.theta[k] != restore.theta[k])
            throw DataError("check_positive_work: profiles must share theta samples");
        margin = std::min(margin, expand.p_gauge[k] - restore.p_gauge[k]);
    }
    return PositiveWorkCheck{margin > 0.0, margin};
}

/// Inverse of the pressure equations: the m2 that produces P_target at theta.
inline double solve_mass_for_pressure(const LeverRig& rig, double theta,
                                      double P_target, LoadMode mode,
                                      double m1 = 0.0) {
    require_theta_in_range(theta);
    double torque_target = (P_target - rig.wall_force / rig.A) * rig.A * rig.r_a;
    if (mode == LoadMode::otto)
        torque_target -= m1 * rig.g * (std::cos(theta) * rig.r_mx1 -
                                       std::sin(theta) * rig.r_my1);
    double m2 = torque_target / (rig.g * std::cos(theta) * rig.r_mx2);
    if (m2 < 0.0)
        throw ConstraintError(
            "solve_mass_for_pressure: target requires a negative mass");
    return m2;
}

inline LoadProfile sample_profile(const LeverRig& rig, LoadMode mode,
                                  double theta0, double theta1,
                                  std::size_t count, double m1, double m2) {
    if (count < 2 || !(theta1 > theta0))
        throw DomainError("sample_profile: need theta1 > theta0 and >= 2 samples");
    LoadProfile p;
    p.mode = mode;
    p.theta.resize(count);
    p.p_gauge.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double th = theta0 + (theta1 - theta0) * static_cast<double>(k) /
                                 static_cast<double>(count - 1);
        p.theta[k] = th;
        p.p_gauge[k] = mode == LoadMode::otto
                           ? pressure_otto(rig, th, m1, m2)
                           : pressure_constant_load(rig, th, m2);
    }
    return p;
}

/// Vertical displacement of a point at horizontal distance r:
/// d = r (sin(theta1) - sin(theta0)).
inline double stroke_displacement(double r, double theta0, double theta1) {
    if (!(theta1 >= theta0))
        throw DomainError("stroke_displacement: theta1 must be >= theta0");
    return r * (std::sin(theta1) - std::sin(theta0));
}

/// Work done lifting the effective mass through the stroke.
inline double net_cycle_work(double lift_mass, double displacement,
                             double g = kStandardGravity) {
    if (displacement < 0.0)
        throw DomainError("net_cycle_work: displacement must be non-negative");
    return lift_mass * g * displacement;
}

} // namespace airheat

#endif
