#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "airheat/rig.hpp"
#include "test_util.hpp"

using namespace airheat;
using airheat_test::rel_diff;
using airheat_test::uniform;
using Catch::Matchers::WithinRel;

constexpr double kDeg = std::numbers::pi / 180.0;

// geometry backed out from the 13.0 kPa expansion target at m2 = 1.643 kg
static LeverRig bench_rig() {
    LeverRig rig;
    rig.A = 1.809557368e-3;
    rig.r_a = 2.4788193769230769e-4 / rig.A;
    rig.r_mx2 = 0.200;
    return rig;
}

TEST_CASE("constant-load pressure") {
    LeverRig rig = bench_rig();
    CHECK(pressure_constant_load(rig, 0.2, 0.0) == 0.0);
    CHECK_THAT(pressure_constant_load(rig, 0.0, 1.643), WithinRel(13000.0, 1e-9));

    // near-flat over the experimental stroke
    double p0 = pressure_constant_load(rig, 0.0, 1.643);
    double p1 = pressure_constant_load(rig, 1.4 * kDeg, 1.643);
    CHECK((p0 - p1) / p0 < 4e-4);
    CHECK((p0 - p1) / p0 > 0.0);

    CHECK_THROWS_AS(pressure_constant_load(rig, 1.6, 1.0), DomainError);
    CHECK_THROWS_AS(pressure_constant_load(rig, 0.0, -1.0), DomainError);
}

TEST_CASE("otto pressure") {
    LeverRig rig = bench_rig();
    rig.r_mx1 = 0.028;
    rig.r_my1 = 0.210;
    rig.r_mx2 = 0.028;

    double p = pressure_otto(rig, 0.0, 13.6, 0.0);
    CHECK_THAT(p * rig.A * rig.r_a, WithinRel(3.73437232, 1e-12));

    // strictly decreasing in theta
    double prev = pressure_otto(rig, 0.0, 13.6, 1.0);
    for (double th = 0.01; th < std::numbers::pi / 2.0 - 0.02; th += 0.01) {
        double cur = pressure_otto(rig, th, 13.6, 1.0);
        CHECK(cur < prev);
        prev = cur;
    }

    // adding m2 shifts the curve uniformly at theta = 0
    double lift = pressure_otto(rig, 0.0, 13.6, 1.0) - pressure_otto(rig, 0.0, 13.6, 0.0);
    CHECK_THAT(lift, WithinRel(1.0 * rig.g * rig.r_mx2 / (rig.A * rig.r_a), 1e-12));

    CHECK_THROWS_AS(pressure_otto(rig, 2.0, 1.0, 1.0), DomainError);
}

TEST_CASE("positive work check") {
    LeverRig rig = bench_rig();
    LoadProfile expand = sample_profile(rig, LoadMode::constant_load, 0.0,
                                        1.4 * kDeg, 30, 0.0, 1.643);
    LoadProfile restore = sample_profile(rig, LoadMode::constant_load, 0.0,
                                         1.4 * kDeg, 30, 0.0, 1.361);
    PositiveWorkCheck ok = check_positive_work(expand, restore);
    CHECK(ok.positive);
    CHECK(ok.margin > 0.0);

    PositiveWorkCheck eq = check_positive_work(expand, expand);
    CHECK_FALSE(eq.positive);
    CHECK(eq.margin == 0.0);

    LeverRig otto_rig = bench_rig();
    otto_rig.r_mx2 = 0.028;
    double theta_max = 1.4 * kDeg;
    LoadProfile oe = sample_profile(otto_rig, LoadMode::otto, 0.0, theta_max, 30,
                                    13.6, 1.0);
    LoadProfile orr = sample_profile(otto_rig, LoadMode::otto, 0.0, theta_max, 30,
                                     13.6, 0.0);
    PositiveWorkCheck oc = check_positive_work(oe, orr);
    CHECK(oc.positive);
    CHECK_THAT(oc.margin,
               WithinRel(1.0 * otto_rig.g * std::cos(theta_max) * otto_rig.r_mx2 /
                             (otto_rig.A * otto_rig.r_a),
                         1e-12));

    LoadProfile shifted = sample_profile(rig, LoadMode::constant_load, 0.1,
                                         1.4 * kDeg + 0.1, 30, 0.0, 1.643);
    CHECK_THROWS_AS(check_positive_work(expand, shifted), DataError);
}

TEST_CASE("inverse mass solve") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        LeverRig rig;
        rig.A = uniform(rng, 5e-4, 5e-3);
        rig.r_a = uniform(rng, 0.05, 0.5);
        rig.r_mx1 = uniform(rng, 0.01, 0.1);
        rig.r_my1 = uniform(rng, 0.05, 0.4);
        rig.r_mx2 = uniform(rng, 0.02, 0.4);
        double theta = uniform(rng, -0.5, 0.5);
        double m1 = uniform(rng, 0.0, 20.0);
        double m2 = uniform(rng, 0.05, 5.0);

        double p_cl = pressure_constant_load(rig, theta, m2);
        CHECK(rel_diff(solve_mass_for_pressure(rig, theta, p_cl,
                                               LoadMode::constant_load),
                       m2) < 1e-12);
        double p_otto = pressure_otto(rig, theta, m1, m2);
        double m2_solved =
            solve_mass_for_pressure(rig, theta, p_otto, LoadMode::otto, m1);
        // pressure-space round trip; scale covers the m1/m2 term cancellation
        double p_back = pressure_otto(rig, theta, m1, m2_solved);
        double scale = std::abs(p_otto) +
                       m1 * rig.g * rig.r_my1 / (rig.A * rig.r_a);
        CHECK(std::abs(p_back - p_otto) <= 1e-12 * std::max(scale, 1.0));
    }

    LeverRig rig = bench_rig();
    CHECK(solve_mass_for_pressure(rig, 0.0, 0.0, LoadMode::constant_load) == 0.0);
    // m1 already exceeds the target at theta = 0
    rig.r_mx2 = 0.028;
    double p_m1 = pressure_otto(rig, 0.0, 13.6, 0.0);
    CHECK_THROWS_AS(
        solve_mass_for_pressure(rig, 0.0, p_m1 / 2.0, LoadMode::otto, 13.6),
        ConstraintError);
}

TEST_CASE("stroke displacement and net work") {
    CHECK_THAT(stroke_displacement(0.200, 0.0, 1.2 * kDeg),
               WithinRel(0.0041884839766713919, 1e-12));
    CHECK_THAT(stroke_displacement(0.028, 0.0, 1.3 * kDeg),
               WithinRel(0.00063524534003787803, 1e-12));
    CHECK(stroke_displacement(0.2, 0.3, 0.3) == 0.0);
    CHECK_THROWS_AS(stroke_displacement(0.2, 0.4, 0.3), DomainError);

    CHECK_THAT(net_cycle_work(1.643 - 1.361, stroke_displacement(0.200, 0.0, 1.2 * kDeg)),
               WithinRel(0.01158314898193051, 1e-12));
    CHECK_THAT(net_cycle_work(1.00, stroke_displacement(0.028, 0.0, 1.3 * kDeg)),
               WithinRel(0.0062296287138824565, 1e-12));
    CHECK(net_cycle_work(2.0, 0.0) == 0.0);
    CHECK_THROWS_AS(net_cycle_work(2.0, -1e-4), DomainError);
}

TEST_CASE("quadrature ties statics to lift work") {
    // integral of P A r_a dtheta over the stroke equals the mass-lift work
    LeverRig rig = bench_rig();
    double m_exp = 1.643, m_res = 1.361;
    double th0 = 0.0, th1 = 1.2 * kDeg;
    auto net_pressure = [&](double th) {
        return pressure_constant_load(rig, th, m_exp) -
               pressure_constant_load(rig, th, m_res);
    };
    std::size_t n = 2000; // Simpson, even interval count
    double h = (th1 - th0) / static_cast<double>(n);
    double sum = net_pressure(th0) + net_pressure(th1);
    for (std::size_t k = 1; k < n; ++k)
        sum += net_pressure(th0 + static_cast<double>(k) * h) * (k % 2 ? 4.0 : 2.0);
    double torque_work = sum * h / 3.0 * rig.A * rig.r_a;

    double lift_work = net_cycle_work(m_exp - m_res,
                                      stroke_displacement(rig.r_mx2, th0, th1),
                                      rig.g);
    CHECK(rel_diff(torque_work, lift_work) < 1e-6);
}

TEST_CASE("wall deformation force term") {
    LeverRig rig = bench_rig();
    LeverRig with_wall = rig;
    with_wall.wall_force = 1.3;
    double delta = pressure_constant_load(with_wall, 0.0, 1.643) -
                   pressure_constant_load(rig, 0.0, 1.643);
    CHECK_THAT(delta, WithinRel(1.3 / rig.A, 1e-12));
    // inverse solve still round-trips with the term enabled
    double p = pressure_otto(with_wall, 0.1, 5.0, 0.7);
    CHECK(rel_diff(solve_mass_for_pressure(with_wall, 0.1, p, LoadMode::otto, 5.0),
                   0.7) < 1e-12);
}
