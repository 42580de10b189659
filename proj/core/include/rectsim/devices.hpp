#pragma once

#include "rectsim/netlist.hpp"

namespace rectsim {

enum class MosRegion { Cutoff, Triode, Saturation };

/// One MOSFET evaluation at a trial bias point. id is the drain current in
/// the drain->source direction (negative for a conducting PMOS); gm, gds and
/// gmb are the exact partial derivatives of that branch equation with respect
/// to vgs, vds and vbs.
struct MosEval {
    double id = 0.0;
    double gm = 0.0;
    double gds = 0.0;
    double gmb = 0.0;
    MosRegion region = MosRegion::Cutoff;
    double cgs = 0.0;
    double cgd = 0.0;
    double cgb = 0.0;
};

struct MosCaps {
    double cgs = 0.0;
    double cgd = 0.0;
    double cgb = 0.0;
};

/// Per-instance parameters resolved from a model card at one temperature.
struct DeviceParams {
    Polarity polarity = Polarity::Nmos;
    double beta = 0.0;   // KP * W / L, temperature adjusted, A/V^2
    double vto = 0.0;    // temperature adjusted, signed per polarity, V
    double gamma = 0.0;  // V^1/2
    double phi = 0.7;    // V
    double lambda = 0.0; // 1/V, channel-length modulation (default off)
    double cgdo = 0.0;   // F/m overlap
    double cgso = 0.0;
    double cgbo = 0.0;
    double cox_total = 0.0; // F, 3.9*eps0/TOX * W * L (0 when TOX absent)
    double w = 0.0;
    double l = 0.0;
    double temperature = 25.0;
};

struct TempAdjusted {
    double vto = 0.0;
    double kp = 0.0;
};

/// Linear shift of |VTO| (-2 mV/K) and KP mobility scaling (T/Tnom)^-1.5
/// applied above Tnom = 27 C; identity at and below Tnom.
TempAdjusted temperature_adjust(const ModelCard& card, double temp_c);

/// Body-effect threshold: VTO(T) + GAMMA*(sqrt(PHI - vbs) - sqrt(PHI)), with
/// PHI - vbs clamped below at 1e-6 V. PMOS is evaluated on reflected
/// magnitudes and the sign restored.
double threshold_voltage(const ModelCard& card, double vbs, double temp_c);

DeviceParams resolve_device(const ModelCard& card, double w, double l, double temp_c);

/// Square-law DC evaluation with drain/source swap for vds < 0 and polarity
/// reflection for PMOS. gmin adds a linear drain-source leak.
MosEval mos_dc_params(const DeviceParams& p, double vgs, double vds, double vbs, double gmin);
MosEval mos_dc(const ModelCard& card, double w, double l, double vgs, double vds, double vbs,
               double temp_c, double gmin);

/// Overlap capacitances plus the Meyer partition of the intrinsic gate
/// capacitance: cutoff -> all to cgb, triode -> half cgs half cgd,
/// saturation -> 2/3 cgs and nothing to cgd.
MosCaps mos_caps_params(const DeviceParams& p, MosRegion region);
MosCaps mos_caps(const ModelCard& card, double w, double l, MosRegion region);

/// Value of a stimulus at time t (SPICE conventions).
double stimulus_value(const Stimulus& s, double t);

/// Stimulus value at t = 0, the DC operating-point drive.
double stimulus_dc(const Stimulus& s);

} // namespace rectsim
