#pragma once

#include "rectsim/netlist.hpp"

#include <map>
#include <string>
#include <vector>

namespace rectsim {

/// 0.5 um technology defaults for the two model cards.
ModelCard default_nmos_card();
ModelCard default_pmos_card();

struct RectifierParams {
    double vdd = 1.5;
    double vss = -1.5;
    ModelCard nmos_card = default_nmos_card();
    ModelCard pmos_card = default_pmos_card();
    double w = 1.5e-6;
    double l = 0.15e-6;
    /// Output/input W-ratio per mirror ("CM1".."CM5"), default 1.
    std::map<std::string, double> mirror_ratios;
};

/// Ideal behavioral outputs for one input current sample. The square output
/// is indeterminate at iin = 0; the standalone evaluation reports vss and
/// trace evaluation holds the previous value instead.
struct IdealOutputs {
    double half_neg = 0.0; // -max(iin, 0)
    double half_pos = 0.0; // -min(iin, 0)
    double full_neg = 0.0; // -|iin|
    double full_pos = 0.0; // +|iin|
    double square = 0.0;   // vss for iin > 0, vdd for iin < 0
};

IdealOutputs ideal_reference(double iin, const RectifierParams& params);

/// Vectorized oracle with previous-value hold for the square output at
/// iin = 0 (initial hold value is vss).
struct IdealTrace {
    std::vector<double> half_neg, half_pos, full_neg, full_pos, square;
};
IdealTrace ideal_trace(const std::vector<double>& iin, const RectifierParams& params);

/// Transistor-level rectifier netlist: comparator M1-M4, mirrors CM1-CM5
/// (M5-M17 with replica branches), output stage M18-M19, supplies, input
/// source IIN and one 0 V sense source per current output.
NetlistDocument build_rectifier(const RectifierParams& params);

/// Waveform-signal bindings of the built netlist's semantic outputs.
struct OutputMap {
    std::string iin;      // "I(IIN)"
    std::string half_neg; // "I(VOHN)"
    std::string half_pos; // "I(VOHP)"
    std::string full_neg; // "I(VOFN)"
    std::string full_pos; // "I(VOFP)"
    std::string square;   // "V(SQ)"
};

/// Resolve the bindings, throwing NetlistError naming the first missing one.
OutputMap output_map(const NetlistDocument& doc);

} // namespace rectsim
