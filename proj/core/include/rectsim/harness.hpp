#pragma once

#include "rectsim/engine.hpp"
#include "rectsim/rectifier.hpp"

#include <string>
#include <vector>

namespace rectsim {

enum class ExperimentKind { Half, FullNeg, FullPos, Square, DcTemp };

std::string_view to_string(ExperimentKind kind);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::FullPos;
    double amplitude_pp = 400e-6;            // input peak-to-peak, A
    double max_amplitude_pp = 400e-6;        // validation bound, configurable
    std::vector<double> frequencies{10e6};   // Hz (ignored for DcTemp)
    std::vector<double> temperatures{25.0};  // C
    int periods = 3;                         // simulated; first one discarded
    int steps_per_period = 1000;
    int sweep_points = 801;                  // DcTemp point count
    double zc_threshold = 0.05;              // output-reach level, fraction of ideal peak
    double rail_gate = 0.125;                // |iin| gate for rail error, fraction of peak
    double sym_gate = 0.10;                  // |iin| gate for symmetry, fraction of max
    EngineOptions engine;
};

struct RectifierMetrics {
    double nrmse = 0.0;                   // RMS(out - ideal) / peak |ideal|
    double peak_error = 0.0;              // max |out - ideal| / peak |ideal|
    double zero_crossing_deviation = 0.0; // s
    double rail_error = 0.0;              // V, square output only
    double avg_power = 0.0;               // W, supply delivery over the window
    double even_symmetry_error = 0.0;     // fraction, DC sweeps only
};

/// Error metrics of one output signal against the ideal reference over an
/// aligned retained window (the caller discards the startup period).
/// kind selects the measurement rules; avg_power is filled by the caller.
RectifierMetrics metrics(const std::vector<double>& time, const std::vector<double>& out,
                         const std::vector<double>& ideal, const std::vector<double>& input,
                         ExperimentKind kind, const ExperimentSpec& spec,
                         const RectifierParams& params);

struct ExperimentRun {
    double frequency = 0.0; // 0 for DC sweeps
    double temperature = 25.0;
    Waveform wave;          // bound signals: t, iin, outputs, ideal_* columns
    std::vector<std::pair<std::string, RectifierMetrics>> results; // per signal
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ExperimentRun> runs;
    /// DcTemp only: max |full_pos| gap between any two temperature curves.
    double temp_pairwise_max_deviation = 0.0;
};

/// Build the rectifier, run the experiment matrix and evaluate metrics
/// against the ideal reference applied to the sampled input.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RectifierParams& params);

/// CSV emission: "t,<name>,..." header, 9-significant-digit scientific cells.
void write_waveform_csv(const std::string& path, const Waveform& wave);
void write_metrics_csv(const std::string& path, const ExperimentResult& result);

/// Command line entry point (subcommands run / rectifier / emit-netlist /
/// ideal). Returns 0 on success, 1 on simulation failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args);

} // namespace rectsim
