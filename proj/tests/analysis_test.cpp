#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>

#include "airheat/analysis.hpp"
#include "test_util.hpp"

using namespace airheat;
using airheat_test::rel_diff;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

constexpr double kDeg = std::numbers::pi / 180.0;

static void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out << text;
}

TEST_CASE("load_timeseries") {
    std::string path = "analysis_test_log.csv";
    write_file(path,
               "time_s,pressure_gauge_pa,angle_deg,temperature_k,heater_v\n"
               "0.00,7400,0.0,310,4\n"
               "0.02,7500,0.5,311,4\n"
               "0.04,7600,1.0,312,0\n");
    std::vector<SensorSample> samples = load_timeseries(path);
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].t == 0.02);
    CHECK(samples[1].pressure_gauge == 7500.0);
    CHECK_THAT(samples[1].angle, WithinRel(0.5 * kDeg, 1e-12));
    CHECK(samples[2].heater_voltage == 0.0);

    write_file(path,
               "time_s,pressure_gauge_pa,angle,temperature_k,heater_v\n"
               "0,0,0,300,0\n");
    CHECK_THROWS_MATCHES(load_timeseries(path), SchemaError,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("angle_deg")));

    write_file(path,
               "time_s,pressure_gauge_pa,angle_deg,temperature_k,heater_v\n"
               "0.04,0,0,300,0\n"
               "0.02,0,0,300,0\n");
    CHECK_THROWS_MATCHES(load_timeseries(path), DataError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("2")));

    CHECK_THROWS_AS(load_timeseries("definitely_missing.csv"), IoError);
}

TEST_CASE("timeseries write/read round trip") {
    SyntheticConfig cfg;
    cfg.n_cycles = 1;
    cfg.noise_angle_deg = 0.03;
    cfg.noise_pressure_pa = 40.0;
    cfg.seed = 5;
    SyntheticLog log = generate_synthetic(cfg);
    std::string path = "analysis_test_roundtrip.csv";
    write_timeseries_csv(log.samples, path);
    std::vector<SensorSample> loaded = load_timeseries(path);
    REQUIRE(loaded.size() == log.samples.size());
    for (std::size_t k = 0; k < loaded.size(); ++k) {
        CHECK(loaded[k].t == log.samples[k].t);
        CHECK(loaded[k].pressure_gauge == log.samples[k].pressure_gauge);
        CHECK(loaded[k].heater_voltage == log.samples[k].heater_voltage);
        // angle passes through a deg<->rad conversion; 1 ulp scale
        CHECK(rel_diff(loaded[k].angle + 1.0, log.samples[k].angle + 1.0) < 1e-14);
    }
}

TEST_CASE("smooth_angle") {
    CHECK(smooth_angle(std::vector<SensorSample>{}, 1.0).empty());
    CHECK_THROWS_AS(smooth_angle(std::vector<SensorSample>{}, 0.0), DomainError);

    // constant signal unchanged
    std::vector<SensorSample> flat;
    for (int i = 0; i < 200; ++i)
        flat.push_back({i * 0.02, 0.0, 0.7, 300.0, 0.0});
    std::vector<SensorSample> sm = smooth_angle(flat, 1.0);
    for (const SensorSample& s : sm) CHECK(std::abs(s.angle - 0.7) < 1e-12);

    // single spike attenuated by at least the window width
    std::vector<SensorSample> spike = flat;
    spike[100].angle = 10.7;
    sm = smooth_angle(spike, 1.0); // 1 s window = 51 samples at 50 Hz
    for (const SensorSample& s : sm) CHECK(s.angle - 0.7 <= 10.0 / 50.0 + 1e-12);

    // slow sine barely attenuated, matching the analytic window response
    std::vector<SensorSample> sine;
    double period = 60.0;
    for (int i = 0; i < 50 * 300; ++i) {
        double t = i * 0.02;
        sine.push_back({t, 0.0, std::sin(2.0 * std::numbers::pi * t / period),
                        300.0, 0.0});
    }
    sm = smooth_angle(sine, 1.0);
    double peak = 0.0;
    for (std::size_t i = 2000; i + 2000 < sm.size(); ++i)
        peak = std::max(peak, sm[i].angle);
    double expected_gain =
        std::sin(std::numbers::pi * 1.0 / period) / (std::numbers::pi * 1.0 / period);
    CHECK(1.0 - peak < 0.01);
    CHECK(rel_diff(peak, expected_gain) < 1e-3);

    // time-average nearly preserved; only the shrunken edge windows bias it
    double raw_mean = 0.0, sm_mean = 0.0;
    for (std::size_t i = 0; i < sine.size(); ++i) {
        raw_mean += sine[i].angle;
        sm_mean += sm[i].angle;
    }
    CHECK(std::abs(raw_mean - sm_mean) / static_cast<double>(sine.size()) < 1e-3);
}

TEST_CASE("segment_cycles") {
    auto square = [](std::initializer_list<std::pair<int, int>> periods) {
        std::vector<SensorSample> s;
        double t = 0.0;
        for (auto [on, off] : periods) {
            for (int k = 0; k < on; ++k, t += 0.02)
                s.push_back({t, 0.0, 0.0, 300.0, 4.0});
            for (int k = 0; k < off; ++k, t += 0.02)
                s.push_back({t, 0.0, 0.0, 300.0, 0.0});
        }
        return s;
    };

    // two on/off periods, log ends after the second off: one complete segment
    CHECK(segment_cycles(square({{50, 100}, {50, 100}})).size() == 1);

    // append a final rising edge: both segments close
    std::vector<SensorSample> s = square({{50, 100}, {50, 100}});
    s.push_back({s.back().t + 0.02, 0.0, 0.0, 300.0, 4.0});
    std::vector<CycleSegment> segs = segment_cycles(s);
    REQUIRE(segs.size() == 2);
    CHECK(rel_diff(segs[0].heater_on_duration, 1.0) < 1e-9);

    // all-off log
    std::vector<SensorSample> off(100, SensorSample{0.0, 0.0, 0.0, 300.0, 0.0});
    CHECK(segment_cycles(off).empty());

    // the reported 5.5 s heating at 50 Hz
    SyntheticConfig cfg;
    cfg.n_cycles = 3;
    SyntheticLog log = generate_synthetic(cfg);
    segs = segment_cycles(log.samples);
    REQUIRE(segs.size() == 3);
    for (const CycleSegment& seg : segs)
        CHECK(std::abs(seg.heater_on_duration - 5.5) <= 0.02);
}

TEST_CASE("cycle_metrics reproduces the reported experiments") {
    HeaterPower heater{3.92, 0.91};

    // constant-load test: delta m = 0.282 kg at 0.200 m, 1.2 deg, 153.6 s
    LeverRig cl_rig;
    cl_rig.r_mx2 = 0.200;
    CycleSegment seg{};
    seg.theta_min = 0.0;
    seg.theta_max = 1.2 * kDeg;
    seg.heater_on_duration = 153.6;
    LoadMasses cl_masses;
    cl_masses.m2_expand = 1.643;
    cl_masses.m2_restore = 1.361;
    CycleResult cl =
        cycle_metrics(seg, cl_rig, LoadMode::constant_load, cl_masses, heater);
    CHECK_THAT(cl.work, WithinRel(0.01158314898193051, 1e-10));
    CHECK_THAT(cl.heat_in, WithinRel(547.92192, 1e-12));
    CHECK_THAT(cl.efficiency, WithinRel(2.1140145263636305e-05, 1e-10));

    // Otto test: m2 = 1.00 kg at 0.028 m, 1.3 deg, 5.5 s
    LeverRig otto_rig;
    otto_rig.r_mx2 = 0.028;
    CycleSegment oseg{};
    oseg.theta_min = 0.0;
    oseg.theta_max = 1.3 * kDeg;
    oseg.heater_on_duration = 5.5;
    LoadMasses otto_masses;
    otto_masses.m2 = 1.00;
    CycleResult ot =
        cycle_metrics(oseg, otto_rig, LoadMode::otto, otto_masses, heater);
    CHECK_THAT(ot.work, WithinRel(0.0062296287138824565, 1e-10));
    CHECK_THAT(ot.heat_in, WithinRel(19.6196, 1e-12));
    CHECK_THAT(ot.efficiency, WithinRel(0.00031752067900887156, 1e-10));

    // zero stroke
    CycleSegment zseg = seg;
    zseg.theta_max = zseg.theta_min;
    CycleResult z =
        cycle_metrics(zseg, cl_rig, LoadMode::constant_load, cl_masses, heater);
    CHECK(z.work == 0.0);
    CHECK(z.efficiency == 0.0);

    // zero heat
    zseg.heater_on_duration = 0.0;
    CHECK_THROWS_AS(
        cycle_metrics(zseg, cl_rig, LoadMode::constant_load, cl_masses, heater),
        DomainError);
}

TEST_CASE("characterization calculations") {
    CHECK_THAT(expansion_ratio_isothermal(108225.0, 105379.74683544304),
               WithinRel(1.027, 1e-12));
    CHECK(expansion_ratio_isothermal(100.0, 100.0) == 1.0);
    CHECK_THROWS_AS(expansion_ratio_isothermal(-1.0, 100.0), DomainError);
    CHECK_THROWS_AS(expansion_ratio_isothermal(100.0, 200.0), DomainError);

    // gauge values passed by mistake produce an implausible ratio
    double mistaken = expansion_ratio_isothermal(6900.0, 4100.0);
    CHECK_THAT(mistaken, WithinRel(6900.0 / 4100.0, 1e-12));
    CHECK_FALSE(plausible_expansion_ratio(mistaken));
    CHECK(plausible_expansion_ratio(1.027));

    CHECK_THAT(predict_isentropic_pressure_change(108225.0, 1.027, 1.4),
               WithinRel(4112.8778667503564, 1e-10));
    CHECK(predict_isentropic_pressure_change(108225.0, 1.0, 1.4) == 0.0);
    CHECK_THAT(predict_isentropic_pressure_change(115325.0, 1.0 / 1.027, 1.4),
               WithinRel(-4222.2414112682191, 1e-10));
    CHECK_THROWS_AS(predict_isentropic_pressure_change(1e5, 0.0, 1.4), DomainError);

    CHECK_THAT(predicted_otto_efficiency(1.027, 1.4),
               WithinRel(0.010600190152806945, 1e-12));
    CHECK(predicted_otto_efficiency(1.0, 1.4) == 0.0);
    CHECK_THROWS_AS(predicted_otto_efficiency(0.99, 1.4), DomainError);
}

TEST_CASE("synthetic generator determinism") {
    SyntheticConfig cfg;
    cfg.n_cycles = 2;
    cfg.noise_angle_deg = 0.05;
    cfg.seed = 1234;
    SyntheticLog a = generate_synthetic(cfg);
    SyntheticLog b = generate_synthetic(cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(a.samples[k].angle == b.samples[k].angle);
        CHECK(a.samples[k].pressure_gauge == b.samples[k].pressure_gauge);
    }
    cfg.seed = 1235;
    SyntheticLog c = generate_synthetic(cfg);
    bool any_different = false;
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        any_different |= a.samples[k].angle != c.samples[k].angle;
    CHECK(any_different);
}

TEST_CASE("noise-free pipeline round trip") {
    SyntheticConfig cfg;
    cfg.n_cycles = 2;
    cfg.stroke_deg = 1.3;
    SyntheticLog log = generate_synthetic(cfg);

    AnalysisParams params;
    params.rig.r_mx2 = 0.028;
    params.mode = LoadMode::otto;
    params.masses.m2 = 1.00;
    params.warmup_skip = 0;
    ExperimentReport report = analyze_samples(log.samples, params);
    REQUIRE(report.cycles.size() == 2);

    double truth_disp = stroke_displacement(params.rig.r_mx2, log.truth.theta_min,
                                            log.truth.theta_max);
    double truth_work = net_cycle_work(1.00, truth_disp, params.rig.g);
    double truth_heat =
        params.heater.volts * params.heater.amps * log.truth.heat_on_duration;
    for (const CycleResult& c : report.cycles) {
        CHECK(rel_diff(c.stroke, log.truth.stroke) < 1e-9);
        CHECK(rel_diff(c.work, truth_work) < 1e-9);
        CHECK(rel_diff(c.heat_in, truth_heat) < 1e-9);
        CHECK(rel_diff(c.efficiency, truth_work / truth_heat) < 1e-9);
    }
    CHECK(rel_diff(report.mean.efficiency, truth_work / truth_heat) < 1e-9);
}

TEST_CASE("noisy pipeline stays close to truth") {
    SyntheticConfig cfg;
    cfg.n_cycles = 2;
    cfg.stroke_deg = 1.2;
    cfg.heat_s = 153.6;
    cfg.cool_s = 150.0;
    cfg.noise_angle_deg = 0.05;

    AnalysisParams params;
    params.rig.r_mx2 = 0.200;
    params.mode = LoadMode::constant_load;
    params.masses.m2_expand = 1.643;
    params.masses.m2_restore = 1.361;
    params.warmup_skip = 0;

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        SyntheticLog log = generate_synthetic(cfg);
        ExperimentReport report = analyze_samples(log.samples, params);
        REQUIRE_FALSE(report.cycles.empty());
        double truth_eff =
            net_cycle_work(1.643 - 1.361,
                           stroke_displacement(0.200, log.truth.theta_min,
                                               log.truth.theta_max)) /
            (params.heater.volts * params.heater.amps * log.truth.heat_on_duration);
        CHECK(rel_diff(report.mean.efficiency, truth_eff) < 0.05);
    }
}

TEST_CASE("report CSV") {
    ExperimentReport report;
    report.cycles.push_back({1.2 * kDeg, 0.0042, 0.0116, 547.9, 2.1e-5});
    std::string path = "analysis_test_report.csv";
    write_report_csv(report, path);
    std::ifstream in(path);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    CHECK(header == "cycle_index,stroke_deg,displacement_m,work_j,heat_j,efficiency");
    REQUIRE(std::getline(in, row));
    CHECK(row.rfind("0,1.2,", 0) == 0);
}
