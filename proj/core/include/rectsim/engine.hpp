#pragma once

#include "rectsim/devices.hpp"
#include "rectsim/netlist.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rectsim {

struct EngineOptions {
    double vtol = 1e-6;           // max node-voltage update at convergence, V
    double abstol = 1e-9;         // max KCL residual at convergence, A
    int max_iterations = 200;     // Newton iterations per solve
    double damping = 0.3;         // node-voltage step clamp per iteration, V
    double gmin = 1e-12;          // drain-source leak conductance, S
    int source_steps = 10;        // source-stepping ramp points
    bool gmin_stepping = true;
    bool source_stepping = true;
    int max_step_halvings = 4;    // transient retry depth
};

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense MNA system. Unknown ordering: node voltages for node_table indices
/// 1..N (row i holds node i+1), then one branch current per voltage source
/// in element order.
struct MnaSystem {
    int dimension = 0;
    std::vector<double> matrix; // row-major dimension x dimension
    std::vector<double> rhs;

    explicit MnaSystem(int n)
        : dimension(n), matrix(static_cast<size_t>(n) * n, 0.0), rhs(n, 0.0) {}

    double& at(int r, int c) { return matrix[static_cast<size_t>(r) * dimension + c]; }
    double at(int r, int c) const { return matrix[static_cast<size_t>(r) * dimension + c]; }

    /// Additive stamp; row/column -1 (ground) entries are dropped.
    void add(int r, int c, double v)
    {
        if (r >= 0 && c >= 0) at(r, c) += v;
    }
    void add_rhs(int r, double v)
    {
        if (r >= 0) rhs[r] += v;
    }
};

struct OperatingPoint {
    std::vector<std::pair<std::string, double>> node_voltages;   // non-ground nodes
    std::vector<std::pair<std::string, double>> source_currents; // V-source branches
    std::vector<std::pair<std::string, double>> device_currents; // MOSFET drain currents
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;      // max node KCL residual, A
    std::vector<double> raw;    // solution vector, reusable as a warm start

    double voltage(std::string_view node) const;
    double source_current(std::string_view name) const;
    double device_current(std::string_view name) const;
};

/// Uniformly sampled named signals over a time (or sweep) axis.
struct Waveform {
    std::string axis_name = "t";
    std::vector<double> axis;
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples; // [signal][sample]
    double temperature = 25.0;
    std::string analysis;
    double avg_supply_power = 0.0; // mean over samples of all V-source delivery, W

    bool has(std::string_view name) const;
    const std::vector<double>& signal(std::string_view name) const;
    size_t size() const { return axis.size(); }
};

/// Damped Newton DC operating point with gmin and source stepping fallbacks.
OperatingPoint solve_dc(const NetlistDocument& doc, double temp = 25.0,
                        const EngineOptions& opts = {}, const OperatingPoint* guess = nullptr);

/// Fixed-step trapezoidal transient from the t=0 operating point. Records
/// every node voltage (V(n)), source current (I(name)) and MOSFET drain
/// current (ID(name)) at floor(tstop/tstep)+1 uniform samples.
Waveform run_transient(const NetlistDocument& doc, double tstep, double tstop,
                       double temp = 25.0, const EngineOptions& opts = {});

/// DC sweep of a named V/I source with solution continuation; the waveform
/// axis carries the swept value.
Waveform run_dc_sweep(const NetlistDocument& doc, std::string_view source, double start,
                      double stop, double step, double temp = 25.0,
                      const EngineOptions& opts = {});

/// Assemble the linearized DC system at a trial unknown vector (zeros when
/// empty). Exposed for inspection and tests.
MnaSystem stamp_dc(const NetlistDocument& doc, const std::vector<double>& trial,
                   double temp = 25.0, const EngineOptions& opts = {});

/// Transient-mode assembly with trapezoidal companions; the previous-step
/// state is taken from the trial vector itself with zero branch currents.
MnaSystem stamp_transient(const NetlistDocument& doc, const std::vector<double>& trial,
                          double dt, double temp = 25.0, const EngineOptions& opts = {});

} // namespace rectsim
