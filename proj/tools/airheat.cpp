// Command-line front end: simulate cycles, sweep the efficiency-ratio heat
// map, design lever load profiles, analyze experiment logs, and run the
// actuator characterization calculations.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airheat/analysis.hpp"
#include "airheat/compare.hpp"
#include "airheat/config.hpp"
#include "airheat/cycles.hpp"
#include "airheat/rig.hpp"
#include "airheat/thermo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

constexpr double kDeg = std::numbers::pi / 180.0;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
};

airheat::RunConfig resolve_config(const CommonOpts& common) {
    airheat::RunConfig cfg;
    if (!common.config_path.empty()) cfg = airheat::load_config(common.config_path);
    if (!common.out_dir.empty()) cfg.output_dir = common.out_dir;
    cfg.validate();
    std::filesystem::create_directories(cfg.output_dir);
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw airheat::IoError("cannot open " + path);
    return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string type = "otto";
    double r = 1.027;
    double p_start_gauge = 6900.0;
    double t_start = 300.0;
    double v_start = 1e-4;
    double p_high_gauge = 13000.0;
    double t_max = 321.0;
    bool has_t_max = false;
    unsigned points = 100;
};

void append_trace(std::vector<std::array<double, 4>>& rows, std::size_t step_idx,
                  const airheat::ProcessStep& step, const airheat::GasProperties& gas,
                  unsigned points) {
    using airheat::ProcessKind;
    for (unsigned k = 0; k <= points; ++k) {
        double f = static_cast<double>(k) / points;
        airheat::GasState g;
        if (step.kind == ProcessKind::isochoric) {
            double T = step.start.T + f * (step.end.T - step.start.T);
            g = airheat::advance_isochoric(step.start, T, gas).end;
        } else {
            double V = step.start.V + f * (step.end.V - step.start.V);
            switch (step.kind) {
                case ProcessKind::isobaric:
                    g = airheat::advance_isobaric(step.start, V, gas).end;
                    break;
                case ProcessKind::isentropic:
                    g = airheat::advance_isentropic(step.start, V, gas).end;
                    break;
                default:
                    g = airheat::advance_isothermal(step.start, V, gas).end;
                    break;
            }
        }
        rows.push_back({static_cast<double>(step_idx), g.P, g.V, g.T});
    }
}

int cmd_simulate(const CommonOpts& common, const SimulateOpts& opt) {
    airheat::RunConfig cfg = resolve_config(common);
    airheat::GasProperties gas = cfg.gas();
    double p_start_abs = cfg.ambient_pressure + opt.p_start_gauge;
    airheat::GasState start = airheat::state_from_tvn(
        opt.t_start, opt.v_start,
        p_start_abs * opt.v_start / (airheat::kGasConstant * opt.t_start));

    airheat::Cycle cycle;
    if (opt.type == "otto") {
        cycle = airheat::build_otto_cycle(start, opt.r, opt.t_max, gas);
    } else {
        double p_high = cfg.ambient_pressure + opt.p_high_gauge;
        if (opt.has_t_max) {
            // constant-load corner 3 is (P_high, r V1); T_max fixes x = T3/T1
            double x = opt.t_max / opt.t_start;
            if (opt.r >= x)
                throw airheat::ConstraintError(
                    "constant-load cycle: r exceeds the max expansion ratio "
                    "r_CL,max = x = T_max/T_start");
            p_high = p_start_abs * x / opt.r;
        }
        cycle = airheat::build_constant_load_cycle(start, p_high, opt.r, gas);
    }
    airheat::CycleMetrics m = airheat::evaluate(cycle);

    std::vector<std::array<double, 4>> rows;
    for (std::size_t i = 0; i < cycle.steps.size(); ++i)
        append_trace(rows, i, cycle.steps[i], gas, opt.points);

    std::string trace_path = cfg.output_dir + "/simulate_trace.csv";
    {
        std::ofstream out = open_output(trace_path);
        out << "step,P_abs_pa,V_m3,T_k\n";
        char buf[160];
        for (const auto& row : rows) {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n",
                          static_cast<int>(row[0]), row[1], row[2], row[3]);
            out << buf;
        }
    }

    std::string summary_path = cfg.output_dir + "/simulate_summary.txt";
    {
        std::ofstream out = open_output(summary_path);
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "cycle: %s\n"
                      "net_work_j: %.9g\nheat_in_j: %.9g\nheat_out_j: %.9g\n"
                      "efficiency: %.9g\n"
                      "T_min_k: %.9g\nT_max_k: %.9g\n"
                      "P_min_pa: %.9g\nP_max_pa: %.9g\n"
                      "V_min_m3: %.9g\nV_max_m3: %.9g\n",
                      cycle.label.c_str(), m.net_work, m.heat_in, m.heat_out,
                      m.efficiency, m.T_min, m.T_max, m.P_min, m.P_max, m.V_min,
                      m.V_max);
        out << buf;
        std::cout << buf;
    }
    std::cout << "wrote " << trace_path << " and " << summary_path << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- heatmap

struct HeatmapOpts {
    double x_min = 1.05, x_max = 2.0;
    double r_min = 1.01, r_max = 2.0;
    unsigned nx = 200, nr = 200;
    unsigned threads = 1;
    double scale_min = 0.0, scale_max = 1.0;
};

int cmd_heatmap(const CommonOpts& common, const HeatmapOpts& opt) {
    airheat::RunConfig cfg = resolve_config(common);
    airheat::RatioGrid grid =
        airheat::sweep_ratio_grid(opt.x_min, opt.x_max, opt.r_min, opt.r_max,
                                  opt.nx, opt.nr, cfg.gamma, cfg.c_v, opt.threads);
    std::string csv_path = cfg.output_dir + "/heatmap.csv";
    std::string svg_path = cfg.output_dir + "/heatmap.svg";
    airheat::write_grid_csv(grid, csv_path);
    airheat::ColorScale scale;
    scale.min = opt.scale_min;
    scale.max = opt.scale_max;
    airheat::render_heatmap_svg(grid, svg_path, scale);
    std::cout << "wrote " << csv_path << " and " << svg_path << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ design

struct DesignOpts {
    std::string mode = "constant_load";
    double p_expand_gauge = 13000.0;
    double p_restore_gauge = 11000.0;
    double m1 = 0.0;
    double theta_min_deg = 0.0;
    double theta_max_deg = 1.4;
    unsigned samples = 50;
};

void write_profile_csv(const airheat::LoadProfile& p, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "theta_deg,p_gauge_pa\n";
    char buf[80];
    for (std::size_t k = 0; k < p.theta.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", p.theta[k] / kDeg,
                      p.p_gauge[k]);
        out << buf;
    }
}

int cmd_design(const CommonOpts& common, const DesignOpts& opt) {
    airheat::RunConfig cfg = resolve_config(common);
    const airheat::LeverRig& rig = cfg.rig;
    airheat::LoadMode mode = opt.mode == "otto" ? airheat::LoadMode::otto
                                                : airheat::LoadMode::constant_load;
    double th0 = opt.theta_min_deg * kDeg;
    double th1 = opt.theta_max_deg * kDeg;

    double m2_expand = airheat::solve_mass_for_pressure(rig, th0, opt.p_expand_gauge,
                                                        mode, opt.m1);
    airheat::LoadProfile expand, restore;
    double m2_restore = 0.0;
    if (mode == airheat::LoadMode::otto) {
        expand = airheat::sample_profile(rig, mode, th0, th1, opt.samples, opt.m1,
                                         m2_expand);
        restore = airheat::sample_profile(rig, mode, th0, th1, opt.samples, opt.m1,
                                          0.0);
        // the expansion profile must fall with angle to approximate an isentrope
        for (std::size_t k = 1; k < expand.theta.size(); ++k)
            if (expand.p_gauge[k] >= expand.p_gauge[k - 1])
                throw airheat::ConstraintError(
                    "design: Otto load profile is not strictly decreasing; "
                    "increase m1 or r_my1");
    } else {
        m2_restore = airheat::solve_mass_for_pressure(rig, th0, opt.p_restore_gauge,
                                                      mode, 0.0);
        expand = airheat::sample_profile(rig, mode, th0, th1, opt.samples, 0.0,
                                         m2_expand);
        restore = airheat::sample_profile(rig, mode, th0, th1, opt.samples, 0.0,
                                          m2_restore);
    }
    airheat::PositiveWorkCheck check = airheat::check_positive_work(expand, restore);
    if (!check.positive)
        throw airheat::ConstraintError(
            "design: expansion load does not exceed restoring load (margin " +
            std::to_string(check.margin) + " Pa)");

    write_profile_csv(expand, cfg.output_dir + "/design_expand.csv");
    write_profile_csv(restore, cfg.output_dir + "/design_restore.csv");
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "mode: %s\nm2_expand_kg: %.9g\nm2_restore_kg: %.9g\n"
                  "m1_kg: %.9g\npositive_work: yes\nmin_margin_pa: %.9g\n",
                  opt.mode.c_str(), m2_expand, m2_restore, opt.m1, check.margin);
    std::cout << buf;
    std::cout << "wrote " << cfg.output_dir << "/design_expand.csv and "
              << cfg.output_dir << "/design_restore.csv\n";
    return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
    std::string log_path;
    std::string mode = "constant_load";
    double m1 = 0.0, m2 = 0.0, m2_expand = 0.0, m2_restore = 0.0;
    // optional second log for a constant-load vs Otto comparison
    std::string compare_log;
    std::string compare_mode = "otto";
    double compare_m2 = 0.0;
    double compare_r_mx2 = -1.0;
    // synthetic-log generation in place of a recorded file
    unsigned synthetic_cycles = 0;
    double synth_heat_s = 5.5;
    double synth_cool_s = 10.0;
    double synth_stroke_deg = 1.3;
    double synth_noise_angle_deg = 0.0;
};

airheat::LoadMode parse_mode(const std::string& mode) {
    return mode == "otto" ? airheat::LoadMode::otto : airheat::LoadMode::constant_load;
}

airheat::ExperimentReport analyze_one(const airheat::RunConfig& cfg,
                                      const std::vector<airheat::SensorSample>& samples,
                                      airheat::LoadMode mode,
                                      const airheat::LoadMasses& masses,
                                      double r_mx2_override = -1.0) {
    airheat::AnalysisParams params;
    params.rig = cfg.rig;
    if (r_mx2_override > 0.0) params.rig.r_mx2 = r_mx2_override;
    params.mode = mode;
    params.masses = masses;
    params.heater = cfg.heater;
    params.smoothing_window_s = cfg.smoothing_window_s;
    params.heater_threshold_v = cfg.heater_threshold_v;
    params.warmup_skip = cfg.warmup_skip;
    return airheat::analyze_samples(samples, params);
}

int cmd_analyze(const CommonOpts& common, const AnalyzeOpts& opt) {
    airheat::RunConfig cfg = resolve_config(common);
    airheat::LoadMode mode = parse_mode(opt.mode);
    airheat::LoadMasses masses;
    masses.m1 = opt.m1;
    masses.m2 = opt.m2;
    masses.m2_expand = opt.m2_expand;
    masses.m2_restore = opt.m2_restore;

    std::vector<airheat::SensorSample> samples;
    if (opt.synthetic_cycles > 0) {
        airheat::SyntheticConfig scfg;
        scfg.n_cycles = opt.synthetic_cycles + cfg.warmup_skip;
        scfg.heat_s = opt.synth_heat_s;
        scfg.cool_s = opt.synth_cool_s;
        scfg.stroke_deg = opt.synth_stroke_deg;
        scfg.noise_angle_deg = opt.synth_noise_angle_deg;
        scfg.seed = common.seed;
        airheat::SyntheticLog log = airheat::generate_synthetic(scfg);
        samples = std::move(log.samples);
        airheat::write_timeseries_csv(samples, cfg.output_dir + "/synthetic_log.csv");
    } else {
        if (opt.log_path.empty())
            throw airheat::DomainError("analyze: give a log file or --synthetic");
        samples = airheat::load_timeseries(opt.log_path);
    }

    airheat::ExperimentReport report = analyze_one(cfg, samples, mode, masses);
    if (report.cycles.empty())
        throw airheat::DataError("analyze: no complete cycles after warm-up skip");
    airheat::write_report_csv(report, cfg.output_dir + "/analyze_cycles.csv");

    std::string summary;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "mode: %s\ncycles_analyzed: %zu\n"
                  "mean_stroke_deg: %.6g\nmean_displacement_m: %.6g\n"
                  "mean_work_j: %.6g\nmean_heat_j: %.6g\n"
                  "mean_efficiency: %.6g (%.4g%%)\n",
                  opt.mode.c_str(), report.cycles.size(),
                  report.mean.stroke / kDeg, report.mean.displacement,
                  report.mean.work, report.mean.heat_in, report.mean.efficiency,
                  report.mean.efficiency * 100.0);
    summary += buf;

    if (!opt.compare_log.empty()) {
        airheat::LoadMasses cmasses;
        cmasses.m2 = opt.compare_m2;
        cmasses.m2_expand = opt.compare_m2;
        std::vector<airheat::SensorSample> csamples =
            airheat::load_timeseries(opt.compare_log);
        airheat::ExperimentReport creport =
            analyze_one(cfg, csamples, parse_mode(opt.compare_mode), cmasses,
                        opt.compare_r_mx2);
        if (creport.cycles.empty())
            throw airheat::DataError("analyze: comparison log has no complete cycles");
        double quotient = creport.mean.efficiency / report.mean.efficiency;
        std::snprintf(buf, sizeof buf,
                      "comparison_mode: %s\ncomparison_mean_efficiency: %.6g (%.4g%%)\n"
                      "efficiency_quotient: %.4g\n",
                      opt.compare_mode.c_str(), creport.mean.efficiency,
                      creport.mean.efficiency * 100.0, quotient);
        summary += buf;
        summary +=
            "note: the published improvement factor of 11.3 was likely computed\n"
            "from unrounded per-cycle values; the rounded reported efficiencies\n"
            "(0.032%/0.0021%) give a quotient near 15.2. Both are shown; neither\n"
            "is forced.\n";
    }
    summary +=
        "note: reported temperatures may underreport the constant-load tests\n"
        "because the thermocouple was repositioned during an actuator repair.\n";

    std::ofstream out = open_output(cfg.output_dir + "/analyze_summary.txt");
    out << summary;
    std::cout << summary;
    std::cout << "wrote " << cfg.output_dir << "/analyze_cycles.csv and "
              << cfg.output_dir << "/analyze_summary.txt\n";
    return kExitOk;
}

// ------------------------------------------------------------ characterize

struct CharacterizeOpts {
    double p1_gauge = 6900.0;  // before slow expansion
    double p2_gauge = 4055.0;  // after slow expansion
    double p_max_gauge = 14000.0;
};

int cmd_characterize(const CommonOpts& common, const CharacterizeOpts& opt) {
    airheat::RunConfig cfg = resolve_config(common);
    if (opt.p1_gauge < 0.0 || opt.p2_gauge < 0.0 || opt.p_max_gauge < 0.0)
        throw airheat::DomainError("characterize: gauge pressures must be non-negative");
    double p1_abs = cfg.ambient_pressure + opt.p1_gauge;
    double p2_abs = cfg.ambient_pressure + opt.p2_gauge;
    double pmax_abs = cfg.ambient_pressure + opt.p_max_gauge;

    double ratio = airheat::expansion_ratio_isothermal(p1_abs, p2_abs);
    double dp_comp = airheat::predict_isentropic_pressure_change(p1_abs, ratio,
                                                                 cfg.gamma);
    double dp_exp = airheat::predict_isentropic_pressure_change(pmax_abs, 1.0 / ratio,
                                                                cfg.gamma);
    double eta = airheat::predicted_otto_efficiency(ratio, cfg.gamma);

    char buf[640];
    std::snprintf(buf, sizeof buf,
                  "ambient_pressure_pa: %.9g\n"
                  "isothermal_expansion_ratio: %.6g\n"
                  "predicted_adiabatic_dp_compression_pa: %.6g\n"
                  "predicted_adiabatic_dp_expansion_pa: %.6g\n"
                  "predicted_otto_efficiency: %.6g (%.4g%%)\n",
                  cfg.ambient_pressure, ratio, dp_comp, dp_exp, eta, eta * 100.0);
    std::string text = buf;
    if (!airheat::plausible_expansion_ratio(ratio))
        text += "warning: expansion ratio exceeds the plausibility limit; check\n"
                "that inputs are gauge pressures relative to the configured ambient.\n";
    text +=
        "note: observed pressure spans exceed the adiabatic predictions; the\n"
        "residual is attributable to heat exchange during the nominally\n"
        "isentropic strokes.\n";
    std::ofstream out = open_output(cfg.output_dir + "/characterize.txt");
    out << text;
    std::cout << text;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"air-based soft heat engine design and analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config_path, "key=value config file");
    app.add_option("--out", common.out_dir, "output directory (overrides config)");
    app.add_option("--seed", common.seed, "seed for synthetic generation");

    SimulateOpts sim;
    CLI::App* simulate = app.add_subcommand("simulate", "simulate an ideal cycle");
    simulate->add_option("--type", sim.type, "constant_load or otto")
        ->check(CLI::IsMember({"constant_load", "otto"}));
    simulate->add_option("--r", sim.r, "expansion ratio");
    simulate->add_option("--p-start-gauge", sim.p_start_gauge, "start gauge pressure, Pa");
    simulate->add_option("--t-start", sim.t_start, "start temperature, K");
    simulate->add_option("--v-start", sim.v_start, "start volume, m^3");
    simulate->add_option("--p-high-gauge", sim.p_high_gauge,
                         "constant-load high gauge pressure, Pa");
    simulate->add_option("--t-max", sim.t_max, "Otto peak temperature, K");
    simulate->add_option("--points", sim.points, "trace points per process")
        ->check(CLI::Range(2u, 100000u));

    HeatmapOpts hm;
    CLI::App* heatmap = app.add_subcommand("heatmap",
                                           "constant-load/Otto efficiency ratio sweep");
    heatmap->add_option("--x-min", hm.x_min, "minimum temperature ratio");
    heatmap->add_option("--x-max", hm.x_max, "maximum temperature ratio");
    heatmap->add_option("--r-min", hm.r_min, "minimum expansion ratio");
    heatmap->add_option("--r-max", hm.r_max, "maximum expansion ratio");
    heatmap->add_option("--nx", hm.nx, "temperature-ratio grid points")
        ->check(CLI::Range(2u, 100000u));
    heatmap->add_option("--nr", hm.nr, "expansion-ratio grid points")
        ->check(CLI::Range(2u, 100000u));
    heatmap->add_option("--threads", hm.threads, "worker threads")
        ->check(CLI::Range(1u, 256u));
    heatmap->add_option("--scale-min", hm.scale_min, "color scale minimum");
    heatmap->add_option("--scale-max", hm.scale_max, "color scale maximum");

    DesignOpts des;
    CLI::App* design = app.add_subcommand("design", "solve lever load masses");
    design->add_option("--mode", des.mode, "constant_load or otto")
        ->check(CLI::IsMember({"constant_load", "otto"}));
    design->add_option("--p-expand-gauge", des.p_expand_gauge,
                       "expansion target gauge pressure, Pa");
    design->add_option("--p-restore-gauge", des.p_restore_gauge,
                       "restoring target gauge pressure, Pa (constant-load)");
    design->add_option("--m1", des.m1, "fixed offset mass, kg (Otto)");
    design->add_option("--theta-min-deg", des.theta_min_deg, "stroke start, deg");
    design->add_option("--theta-max-deg", des.theta_max_deg, "stroke end, deg");
    design->add_option("--samples", des.samples, "profile samples")
        ->check(CLI::Range(2u, 100000u));

    AnalyzeOpts an;
    CLI::App* analyze = app.add_subcommand("analyze", "per-cycle metrics from a log");
    analyze->add_option("log", an.log_path, "sensor log CSV");
    analyze->add_option("--mode", an.mode, "constant_load or otto")
        ->check(CLI::IsMember({"constant_load", "otto"}));
    analyze->add_option("--m1", an.m1, "fixed offset mass, kg");
    analyze->add_option("--m2", an.m2, "Otto removable mass, kg");
    analyze->add_option("--m2-expand", an.m2_expand, "constant-load expansion mass, kg");
    analyze->add_option("--m2-restore", an.m2_restore, "constant-load restoring mass, kg");
    analyze->add_option("--compare-log", an.compare_log, "second log to compare");
    analyze->add_option("--compare-mode", an.compare_mode, "mode of the second log")
        ->check(CLI::IsMember({"constant_load", "otto"}));
    analyze->add_option("--compare-m2", an.compare_m2, "lift mass for the second log, kg");
    analyze->add_option("--compare-r-mx2", an.compare_r_mx2,
                        "hang radius for the second log, m");
    analyze->add_option("--synthetic", an.synthetic_cycles,
                        "generate this many synthetic cycles instead of reading a log");
    analyze->add_option("--synth-heat-s", an.synth_heat_s, "synthetic heating time, s");
    analyze->add_option("--synth-cool-s", an.synth_cool_s, "synthetic cooling time, s");
    analyze->add_option("--synth-stroke-deg", an.synth_stroke_deg,
                        "synthetic stroke, deg");
    analyze->add_option("--synth-noise-angle-deg", an.synth_noise_angle_deg,
                        "synthetic angle noise sigma, deg");

    CharacterizeOpts ch;
    CLI::App* characterize =
        app.add_subcommand("characterize", "actuator characterization calculations");
    characterize->add_option("--p1-gauge", ch.p1_gauge,
                             "gauge pressure before slow expansion, Pa");
    characterize->add_option("--p2-gauge", ch.p2_gauge,
                             "gauge pressure after slow expansion, Pa");
    characterize->add_option("--p-max-gauge", ch.p_max_gauge,
                             "target maximum gauge pressure, Pa");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    sim.has_t_max = simulate->count("--t-max") > 0;

    try {
        if (simulate->parsed()) return cmd_simulate(common, sim);
        if (heatmap->parsed()) return cmd_heatmap(common, hm);
        if (design->parsed()) return cmd_design(common, des);
        if (analyze->parsed()) return cmd_analyze(common, an);
        if (characterize->parsed()) return cmd_characterize(common, ch);
    } catch (const airheat::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const airheat::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
