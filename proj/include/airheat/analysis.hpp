#ifndef AIRHEAT_ANALYSIS_HPP
#define AIRHEAT_ANALYSIS_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "airheat/cycles.hpp"
#include "airheat/rig.hpp"

namespace airheat {

/// Ratio estimates above this are likely unit mistakes (gauge vs absolute).
inline constexpr double kDefaultPlausibleRatioLimit = 1.5;

/// One timestamped multi-channel reading. Angle is stored in radians.
struct SensorSample {
    double t;              // s
    double pressure_gauge; // Pa
    double angle;          // rad
    double temperature;    // K
    double heater_voltage; // V
};

/// Maps CSV column names to channels. Optional linear calibrations are
/// applied to the raw column value before unit conversion.
struct ColumnMap {
    std::string time = "time_s";
    std::string pressure = "pressure_gauge_pa";
    std::string angle = "angle_deg";
    std::string temperature = "temperature_k";
    std::string heater = "heater_v";
    double angle_scale = 1.0, angle_offset = 0.0;             // applied in degrees
    double temperature_scale = 1.0, temperature_offset = 0.0; // applied in kelvin
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline double parse_double(const std::string& s, std::size_t row) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("unparsable numeric field '" + s + "' at data row " +
                        std::to_string(row));
    }
}

} // namespace detail

inline std::vector<SensorSample> load_timeseries(const std::string& path,
                                                 const ColumnMap& map = {}) {
    std::ifstream in(path);
    if (!in)
        throw IoError("load_timeseries: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("load_timeseries: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = detail::split_csv_row(line);
    auto column = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw SchemaError("load_timeseries: missing column '" + name + "' in " + path);
    };
    std::size_t c_t = column(map.time);
    std::size_t c_p = column(map.pressure);
    std::size_t c_a = column(map.angle);
    std::size_t c_T = column(map.temperature);
    std::size_t c_h = column(map.heater);

    std::vector<SensorSample> samples;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> fields = detail::split_csv_row(line);
        if (fields.size() < header.size())
            throw SchemaError("load_timeseries: short row " + std::to_string(row) +
                              " in " + path);
        SensorSample s;
        s.t = detail::parse_double(fields[c_t], row);
        s.pressure_gauge = detail::parse_double(fields[c_p], row);
        double angle_deg = detail::parse_double(fields[c_a], row) * map.angle_scale +
                           map.angle_offset;
        s.angle = angle_deg * std::numbers::pi / 180.0;
        s.temperature = detail::parse_double(fields[c_T], row) * map.temperature_scale +
                        map.temperature_offset;
        s.heater_voltage = detail::parse_double(fields[c_h], row);
        if (!samples.empty() && s.t < samples.back().t)
            throw DataError("load_timeseries: non-monotonic time at data row " +
                            std::to_string(row));
        samples.push_back(s);
    }
    return samples;
}

inline void write_timeseries_csv(const std::vector<SensorSample>& samples,
                                 const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("write_timeseries_csv: cannot open " + path);
    out << "time_s,pressure_gauge_pa,angle_deg,temperature_k,heater_v\n";
    char buf[200];
    for (const SensorSample& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                      s.pressure_gauge, s.angle * 180.0 / std::numbers::pi,
                      s.temperature, s.heater_voltage);
        out << buf;
    }
    if (!out)
        throw IoError("write_timeseries_csv: write failed for " + path);
}

/// Centered moving average of the angle channel over a time window;
/// windows shrink near the edges. Other channels pass through.
inline std::vector<SensorSample> smooth_angle(const std::vector<SensorSample>& samples,
                                              double window_s) {
    if (!(window_s > 0.0))
        throw DomainError("smooth_angle: window must be positive");
    std::vector<SensorSample> out = samples;
    const double half = window_s / 2.0;
    std::size_t lo = 0, hi = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        while (hi < samples.size() && samples[hi].t <= samples[i].t + half) {
            sum += samples[hi].angle;
            ++hi;
        }
        while (samples[lo].t < samples[i].t - half) {
            sum -= samples[lo].angle;
            ++lo;
        }
        out[i].angle = sum / static_cast<double>(hi - lo);
    }
    return out;
}

/// One heater-delimited engine cycle: [begin, end) sample indices spanning
/// a heater rising edge to the next rising edge.
struct CycleSegment {
    std::size_t begin;
    std::size_t end;
    double heater_on_duration; // s
    double theta_min, theta_max; // rad
    double P_min, P_max;         // Pa gauge
    double T_min, T_max;         // K
};

inline std::vector<CycleSegment> segment_cycles(const std::vector<SensorSample>& samples,
                                                double heater_threshold = 2.0) {
    std::vector<std::size_t> edges;
    // a log that starts heater-on begins a cycle at its first sample
    if (!samples.empty() && samples[0].heater_voltage > heater_threshold)
        edges.push_back(0);
    for (std::size_t k = 1; k < samples.size(); ++k)
        if (samples[k].heater_voltage > heater_threshold &&
            samples[k - 1].heater_voltage <= heater_threshold)
            edges.push_back(k);
    std::vector<CycleSegment> segments;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        CycleSegment seg{};
        seg.begin = edges[e];
        seg.end = edges[e + 1];
        seg.theta_min = seg.P_min = seg.T_min = std::numeric_limits<double>::infinity();
        seg.theta_max = seg.P_max = seg.T_max = -std::numeric_limits<double>::infinity();
        for (std::size_t k = seg.begin; k < seg.end; ++k) {
            const SensorSample& s = samples[k];
            if (s.heater_voltage > heater_threshold)
                seg.heater_on_duration += samples[k + 1].t - samples[k].t;
            seg.theta_min = std::min(seg.theta_min, s.angle);
            seg.theta_max = std::max(seg.theta_max, s.angle);
            seg.P_min = std::min(seg.P_min, s.pressure_gauge);
            seg.P_max = std::max(seg.P_max, s.pressure_gauge);
            seg.T_min = std::min(seg.T_min, s.temperature);
            seg.T_max = std::max(seg.T_max, s.temperature);
        }
        segments.push_back(seg);
    }
    return segments;
}

/// Masses hung on the rig for a test. Constant-load cycles lift the
/// difference between the expansion and restoring masses; Otto cycles
/// lift the removable mass m2.
struct LoadMasses {
    double m1 = 0.0;
    double m2 = 0.0;         // Otto removable mass
    double m2_expand = 0.0;  // constant-load expansion mass
    double m2_restore = 0.0; // constant-load restoring mass

    double lift_mass(LoadMode mode) const {
        return mode == LoadMode::otto ? m2 : m2_expand - m2_restore;
    }
};

struct HeaterPower {
    double volts = 3.92;
    double amps = 0.91;
};

struct CycleResult {
    double stroke;       // rad
    double displacement; // m
    double work;         // J
    double heat_in;      // J
    double efficiency;
};

inline CycleResult cycle_metrics(const CycleSegment& seg, const LeverRig& rig,
                                 LoadMode mode, const LoadMasses& masses,
                                 const HeaterPower& heater) {
    double heat = heater.volts * heater.amps * seg.heater_on_duration;
    if (!(heat > 0.0))
        throw DomainError("cycle_metrics: zero heat input, efficiency undefined");
    CycleResult r;
    r.stroke = seg.theta_max - seg.theta_min;
    // the lifted mass hangs at r_mx2 in both modes
    r.displacement = stroke_displacement(rig.r_mx2, seg.theta_min, seg.theta_max);
    r.work = net_cycle_work(masses.lift_mass(mode), r.displacement, rig.g);
    r.heat_in = heat;
    r.efficiency = r.work / r.heat_in;
    return r;
}

struct ExperimentReport {
    std::vector<CycleResult> cycles;
    CycleResult mean;
};

struct AnalysisParams {
    LeverRig rig;
    LoadMode mode = LoadMode::constant_load;
    LoadMasses masses;
    HeaterPower heater;
    double smoothing_window_s = 1.0;
    double heater_threshold_v = 2.0;
    std::size_t warmup_skip = 2;
};

/// Full pipeline: smooth, segment, skip warm-up cycles, compute metrics.
inline ExperimentReport analyze_samples(const std::vector<SensorSample>& samples,
                                        const AnalysisParams& params) {
    std::vector<SensorSample> smoothed = smooth_angle(samples, params.smoothing_window_s);
    std::vector<CycleSegment> segments =
        segment_cycles(smoothed, params.heater_threshold_v);
    ExperimentReport report{};
    std::size_t first = std::min(params.warmup_skip, segments.size());
    for (std::size_t k = first; k < segments.size(); ++k)
        report.cycles.push_back(
            cycle_metrics(segments[k], params.rig, params.mode, params.masses,
                          params.heater));
    if (!report.cycles.empty()) {
        for (const CycleResult& c : report.cycles) {
            report.mean.stroke += c.stroke;
            report.mean.displacement += c.displacement;
            report.mean.work += c.work;
            report.mean.heat_in += c.heat_in;
            report.mean.efficiency += c.efficiency;
        }
        double n = static_cast<double>(report.cycles.size());
        report.mean.stroke /= n;
        report.mean.displacement /= n;
        report.mean.work /= n;
        report.mean.heat_in /= n;
        report.mean.efficiency /= n;
    }
    return report;
}

/// Slow-expansion estimate V2/V1 = P1/P2 at constant temperature.
inline double expansion_ratio_isothermal(double P1_abs, double P2_abs) {
    if (!(P1_abs > 0.0) || !(P2_abs > 0.0))
        throw DomainError("expansion_ratio_isothermal: pressures must be positive");
    if (!(P1_abs >= P2_abs))
        throw DomainError("expansion_ratio_isothermal: expansion needs P1 >= P2");
    return P1_abs / P2_abs;
}

inline bool plausible_expansion_ratio(double ratio,
                                      double limit = kDefaultPlausibleRatioLimit) {
    return ratio <= limit;
}

/// Adiabatic pressure change for a volume change by `ratio`:
/// dP = P1 (ratio^gamma - 1). ratio > 1 is a compression.
inline double predict_isentropic_pressure_change(double P1_abs, double ratio,
                                                 double gamma) {
    if (!(ratio > 0.0))
        throw DomainError("predict_isentropic_pressure_change: ratio must be positive");
    return P1_abs * (std::pow(ratio, gamma) - 1.0);
}

inline double predicted_otto_efficiency(double ratio, double gamma) {
    if (!(ratio >= 1.0))
        throw DomainError("predicted_otto_efficiency: ratio must be >= 1");
    return efficiency_otto_ideal(ratio, gamma);
}

// ---------------------------------------------------------------------------
// Synthetic log generation (test oracle for the pipeline)

/// Deterministic standard-normal generator (Box-Muller over mt19937_64),
/// so outputs are byte-identical across platforms for a given seed.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform01() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct SyntheticConfig {
    std::size_t n_cycles = 4;
    double rate_hz = 50.0;
    double heat_s = 5.5;
    double cool_s = 10.0;
    double theta0_deg = 0.0;
    double stroke_deg = 1.3;
    double p_low_gauge = 7400.0;  // Pa
    double p_high_gauge = 14600.0;
    double temp_low_k = 310.0;
    double temp_high_k = 321.0;
    double heater_on_v = 4.0;
    double heater_off_v = 0.0;
    double noise_angle_deg = 0.0;
    double noise_pressure_pa = 0.0;
    double noise_temperature_k = 0.0;
    std::uint64_t seed = 0;
};

struct SyntheticTruth {
    double stroke;           // rad
    double theta_min;        // rad
    double theta_max;        // rad
    double heat_on_duration; // s, as sampled
    std::size_t n_cycles;
};

struct SyntheticLog {
    std::vector<SensorSample> samples;
    SyntheticTruth truth;
};

/// Trapezoidal angle waveform with plateaus at both extremes, square-wave
/// heater, seeded additive Gaussian noise. One extra heater rising edge is
/// appended so every requested cycle closes.
inline SyntheticLog generate_synthetic(const SyntheticConfig& cfg) {
    if (!(cfg.rate_hz > 0.0))
        throw DomainError("generate_synthetic: rate must be positive");
    if (cfg.noise_angle_deg < 0.0 || cfg.noise_pressure_pa < 0.0 ||
        cfg.noise_temperature_k < 0.0)
        throw DomainError("generate_synthetic: noise levels must be non-negative");

    const double dt = 1.0 / cfg.rate_hz;
    const std::size_t heat_n = static_cast<std::size_t>(std::llround(cfg.heat_s * cfg.rate_hz));
    const std::size_t cool_n = static_cast<std::size_t>(std::llround(cfg.cool_s * cfg.rate_hz));
    const std::size_t period_n = heat_n + cool_n;
    if (heat_n == 0 || cool_n == 0)
        throw DomainError("generate_synthetic: heat and cool phases must span samples");

    const double deg = std::numbers::pi / 180.0;
    const double theta0 = cfg.theta0_deg * deg;
    const double stroke = cfg.stroke_deg * deg;

    // plateau / ramp breakpoints as fractions of the period
    const std::size_t a = period_n * 15 / 100;
    const std::size_t b = period_n * 35 / 100;
    const std::size_t c = period_n * 65 / 100;
    const std::size_t d = period_n * 85 / 100;

    GaussianSource noise(cfg.seed);
    SyntheticLog log;
    // +1 sample: a final rising edge closes the last cycle.
    const std::size_t total = cfg.n_cycles * period_n + 1;
    log.samples.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t k = i % period_n;
        bool heater_on = k < heat_n;
        double angle;
        if (k < a)
            angle = theta0;
        else if (k < b)
            angle = theta0 + stroke * static_cast<double>(k - a) / static_cast<double>(b - a);
        else if (k < c)
            angle = theta0 + stroke;
        else if (k < d)
            angle = theta0 + stroke * static_cast<double>(d - k) / static_cast<double>(d - c);
        else
            angle = theta0;
        SensorSample s;
        s.t = static_cast<double>(i) * dt;
        s.angle = angle;
        if (cfg.noise_angle_deg > 0.0) s.angle += cfg.noise_angle_deg * deg * noise();
        s.pressure_gauge = heater_on ? cfg.p_high_gauge : cfg.p_low_gauge;
        if (cfg.noise_pressure_pa > 0.0) s.pressure_gauge += cfg.noise_pressure_pa * noise();
        s.temperature = heater_on ? cfg.temp_high_k : cfg.temp_low_k;
        if (cfg.noise_temperature_k > 0.0) s.temperature += cfg.noise_temperature_k * noise();
        s.heater_voltage = heater_on ? cfg.heater_on_v : cfg.heater_off_v;
        log.samples.push_back(s);
    }
    log.truth.theta_min = theta0;
    log.truth.theta_max = theta0 + stroke;
    log.truth.stroke = stroke;
    log.truth.heat_on_duration = static_cast<double>(heat_n) * dt;
    log.truth.n_cycles = cfg.n_cycles;
    return log;
}

inline void write_report_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("write_report_csv: cannot open " + path);
    out << "cycle_index,stroke_deg,displacement_m,work_j,heat_j,efficiency\n";
    char buf[200];
    for (std::size_t k = 0; k < report.cycles.size(); ++k) {
        const CycleResult& c = report.cycles[k];
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", k,
                      c.stroke * 180.0 / std::numbers::pi, c.displacement, c.work,
                      c.heat_in, c.efficiency);
        out << buf;
    }
    if (!out)
        throw IoError("write_report_csv: write failed for " + path);
}

} // namespace airheat

#endif
