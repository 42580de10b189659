#include "rectsim/harness.hpp"
#include "rectsim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace rectsim {

namespace {

struct Crossing {
    double t;
    int direction; // +1 rising, -1 falling
};

std::vector<Crossing> level_crossings(const std::vector<double>& time,
                                      const std::vector<double>& sig, double level)
{
    std::vector<Crossing> out;
    for (size_t k = 0; k + 1 < sig.size(); ++k) {
        double a = sig[k] - level, b = sig[k + 1] - level;
        if (a == 0.0 && b == 0.0) continue;
        if (a * b < 0.0 || (a == 0.0 && b != 0.0)) {
            double frac = (b - a) != 0.0 ? -a / (b - a) : 0.0;
            out.push_back({time[k] + frac * (time[k + 1] - time[k]), b > a ? +1 : -1});
        }
    }
    return out;
}

std::vector<double> magnitude(const std::vector<double>& sig)
{
    std::vector<double> out(sig.size());
    for (size_t i = 0; i < sig.size(); ++i) out[i] = std::abs(sig[i]);
    return out;
}

double nearest_crossing(const std::vector<Crossing>& xs, double t, bool& found)
{
    found = false;
    double best = 0.0, gap = 0.0;
    for (const Crossing& c : xs) {
        double d = std::abs(c.t - t);
        if (!found || d < gap) {
            best = c.t;
            gap = d;
            found = true;
        }
    }
    return best;
}

double peak_abs(const std::vector<double>& sig)
{
    double p = 0.0;
    for (double v : sig) p = std::max(p, std::abs(v));
    return p;
}

} // namespace

std::string_view to_string(ExperimentKind kind)
{
    switch (kind) {
        case ExperimentKind::Half: return "half";
        case ExperimentKind::FullNeg: return "full_neg";
        case ExperimentKind::FullPos: return "full_pos";
        case ExperimentKind::Square: return "square";
        case ExperimentKind::DcTemp: return "dc_temp";
    }
    return "?";
}

RectifierMetrics metrics(const std::vector<double>& time, const std::vector<double>& out,
                         const std::vector<double>& ideal, const std::vector<double>& input,
                         ExperimentKind kind, const ExperimentSpec& spec,
                         const RectifierParams& params)
{
    if (time.empty() || out.size() != time.size() || ideal.size() != time.size() ||
        input.size() != time.size())
        throw SimulationError("empty retained window");

    RectifierMetrics m;
    double peak = peak_abs(ideal);
    double sq = 0.0, pk = 0.0;
    for (size_t k = 0; k < out.size(); ++k) {
        double e = out[k] - ideal[k];
        sq += e * e;
        pk = std::max(pk, std::abs(e));
    }
    if (peak > 0.0) {
        m.nrmse = std::sqrt(sq / static_cast<double>(out.size())) / peak;
        m.peak_error = pk / peak;
    }

    double peak_in = peak_abs(input);

    if (kind == ExperimentKind::DcTemp) {
        // Even-symmetry over the sweep axis: compare f(x) against f(-x) for
        // |x| above the gate, normalized by the sweep extent.
        if (peak_in > 0.0) {
            double gate = spec.sym_gate * peak_in;
            double worst = 0.0;
            for (size_t k = 0; k < input.size(); ++k) {
                if (input[k] <= gate) continue;
                // locate the mirrored point
                double target = -input[k];
                size_t best = 0;
                double bgap = 1e300;
                for (size_t j = 0; j < input.size(); ++j) {
                    double d = std::abs(input[j] - target);
                    if (d < bgap) {
                        bgap = d;
                        best = j;
                    }
                }
                worst = std::max(worst, std::abs(out[k] - out[best]));
            }
            m.even_symmetry_error = worst / peak_in;
        }
        return m;
    }

    // Zero-crossing deviation: where the input crosses zero, compare the time
    // the simulated output reaches the threshold against the time the ideal
    // output does.
    std::vector<Crossing> in_x = level_crossings(time, input, 0.0);
    std::vector<Crossing> out_x, id_x;
    if (kind == ExperimentKind::Square) {
        double mid = 0.5 * (params.vdd + params.vss);
        out_x = level_crossings(time, out, mid);
        id_x = level_crossings(time, ideal, mid);
    } else {
        double thr = spec.zc_threshold * peak;
        out_x = level_crossings(time, magnitude(out), thr);
        id_x = level_crossings(time, magnitude(ideal), thr);
    }
    double window = time.back() - time.front();
    for (const Crossing& c : in_x) {
        bool fo = false, fi = false;
        double to = nearest_crossing(out_x, c.t, fo);
        double ti = nearest_crossing(id_x, c.t, fi);
        double dev = (fo && fi) ? std::abs(to - ti) : window;
        m.zero_crossing_deviation = std::max(m.zero_crossing_deviation, dev);
    }

    if (kind == ExperimentKind::Square && peak_in > 0.0) {
        double gate = spec.rail_gate * peak_in;
        for (size_t k = 0; k < out.size(); ++k)
            if (std::abs(input[k]) > gate)
                m.rail_error = std::max(m.rail_error, std::abs(out[k] - ideal[k]));
    }
    return m;
}

namespace {

std::vector<double> slice(const std::vector<double>& v, size_t from)
{
    return {v.begin() + static_cast<long>(from), v.end()};
}

Waveform bind_outputs(const Waveform& raw, const OutputMap& map, const RectifierParams& params)
{
    Waveform w;
    w.axis_name = raw.axis_name;
    w.axis = raw.axis;
    w.temperature = raw.temperature;
    w.analysis = raw.analysis;
    w.avg_supply_power = raw.avg_supply_power;

    const std::vector<double>& iin = raw.signal(map.iin);
    IdealTrace ideal = ideal_trace(iin, params);

    w.names = {"iin", "half_neg", "half_pos", "full_neg", "full_pos", "square",
               "ideal_half_neg", "ideal_half_pos", "ideal_full_neg", "ideal_full_pos",
               "ideal_square", "i_vdd", "i_vss"};
    w.samples = {iin,
                 raw.signal(map.half_neg),
                 raw.signal(map.half_pos),
                 raw.signal(map.full_neg),
                 raw.signal(map.full_pos),
                 raw.signal(map.square),
                 ideal.half_neg,
                 ideal.half_pos,
                 ideal.full_neg,
                 ideal.full_pos,
                 ideal.square,
                 raw.signal("I(VDD)"),
                 raw.signal("I(VSS)")};
    return w;
}

std::vector<std::string> signals_for(ExperimentKind kind)
{
    switch (kind) {
        case ExperimentKind::Half: return {"half_neg", "half_pos"};
        case ExperimentKind::FullNeg: return {"full_neg"};
        case ExperimentKind::FullPos: return {"full_pos"};
        case ExperimentKind::Square: return {"square"};
        case ExperimentKind::DcTemp: return {"full_pos"};
    }
    return {};
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const RectifierParams& params)
{
    if (spec.amplitude_pp <= 0.0 || spec.amplitude_pp > spec.max_amplitude_pp)
        throw SimulationError("input amplitude out of range (0, " +
                              format_number(spec.max_amplitude_pp) + "] A peak-to-peak");
    ExperimentResult result;
    result.spec = spec;

    NetlistDocument doc = build_rectifier(params);
    OutputMap map = output_map(doc);

    if (spec.kind == ExperimentKind::DcTemp) {
        if (spec.sweep_points < 2) throw SimulationError("sweep needs at least 2 points");
        double amp = spec.amplitude_pp;
        double step = 2.0 * amp / (spec.sweep_points - 1);
        for (double temp : spec.temperatures) {
            Waveform raw = run_dc_sweep(doc, "IIN", -amp, amp, step, temp, spec.engine);
            ExperimentRun run;
            run.frequency = 0.0;
            run.temperature = temp;
            run.wave = bind_outputs(raw, map, params);
            for (const std::string& sig : signals_for(spec.kind)) {
                RectifierMetrics m =
                    metrics(run.wave.axis, run.wave.signal(sig), run.wave.signal("ideal_" + sig),
                            run.wave.signal("iin"), spec.kind, spec, params);
                run.results.emplace_back(sig, m);
            }
            result.runs.push_back(std::move(run));
        }
        // Pairwise spread of the transfer curves across temperature.
        double worst = 0.0;
        for (size_t a = 0; a < result.runs.size(); ++a) {
            for (size_t b = a + 1; b < result.runs.size(); ++b) {
                const auto& fa = result.runs[a].wave.signal("full_pos");
                const auto& fb = result.runs[b].wave.signal("full_pos");
                for (size_t k = 0; k < fa.size() && k < fb.size(); ++k)
                    worst = std::max(worst, std::abs(fa[k] - fb[k]));
            }
        }
        result.temp_pairwise_max_deviation = worst;
        return result;
    }

    if (spec.periods < 2) throw SimulationError("need at least 2 periods (first is discarded)");
    double amplitude = 0.5 * spec.amplitude_pp;
    for (double freq : spec.frequencies) {
        if (freq <= 0.0) throw SimulationError("frequency must be positive");
        for (double temp : spec.temperatures) {
            NetlistDocument doc2 = doc;
            set_stimulus(doc2, "IIN", SinStim{0.0, amplitude, freq});
            double dt = 1.0 / (freq * spec.steps_per_period);
            double tstop = static_cast<double>(spec.periods) / freq;
            Waveform raw;
            try {
                raw = run_transient(doc2, dt, tstop, temp, spec.engine);
            } catch (const SimulationError& e) {
                throw SimulationError(std::string(e.what()) + " [freq=" + format_number(freq) +
                                      " Hz, temp=" + format_number(temp) + " C]");
            }
            ExperimentRun run;
            run.frequency = freq;
            run.temperature = temp;
            run.wave = bind_outputs(raw, map, params);

            size_t start = static_cast<size_t>(spec.steps_per_period); // drop first period
            std::vector<double> t = slice(run.wave.axis, start);
            std::vector<double> in = slice(run.wave.signal("iin"), start);
            std::vector<double> ivdd = slice(run.wave.signal("i_vdd"), start);
            std::vector<double> ivss = slice(run.wave.signal("i_vss"), start);
            double power = 0.0;
            for (size_t k = 0; k < ivdd.size(); ++k)
                power += -params.vdd * ivdd[k] - params.vss * ivss[k];
            power /= static_cast<double>(ivdd.size());

            for (const std::string& sig : signals_for(spec.kind)) {
                RectifierMetrics m = metrics(t, slice(run.wave.signal(sig), start),
                                             slice(run.wave.signal("ideal_" + sig), start), in,
                                             spec.kind, spec, params);
                m.avg_power = power;
                run.results.emplace_back(sig, m);
            }
            result.runs.push_back(std::move(run));
        }
    }
    return result;
}

void write_waveform_csv(const std::string& path, const Waveform& wave)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimulationError("cannot write " + path);
    out << "t";
    for (const std::string& n : wave.names) out << "," << n;
    out << "\n";
    for (size_t k = 0; k < wave.axis.size(); ++k) {
        out << format_csv(wave.axis[k]);
        for (const auto& sig : wave.samples) out << "," << format_csv(sig[k]);
        out << "\n";
    }
}

void write_metrics_csv(const std::string& path, const ExperimentResult& result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimulationError("cannot write " + path);
    out << "kind,signal,frequency_hz,temperature_c,nrmse,peak_error,zero_crossing_s,"
           "rail_error_v,avg_power_w,even_symmetry_error\n";
    for (const ExperimentRun& run : result.runs) {
        for (const auto& [sig, m] : run.results) {
            out << to_string(result.spec.kind) << "," << sig << "," << format_csv(run.frequency)
                << "," << format_csv(run.temperature) << "," << format_csv(m.nrmse) << ","
                << format_csv(m.peak_error) << "," << format_csv(m.zero_crossing_deviation)
                << "," << format_csv(m.rail_error) << "," << format_csv(m.avg_power) << ","
                << format_csv(m.even_symmetry_error) << "\n";
        }
    }
}

} // namespace rectsim
