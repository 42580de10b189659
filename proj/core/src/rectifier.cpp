#include "rectsim/rectifier.hpp"

#include <cmath>

namespace rectsim {

namespace {

// PMOS mirrors run 4x the base width (input and output devices alike, so
// every ratio stays exact). At the 400 uA full scale a unit-width PMOS diode
// needs |VTO| + vov = 2.37 V of headroom, which would push the NMOS branches
// feeding CM3/CM5 into triode and skew the folded full-wave sum.
constexpr double kPmosMirrorScale = 4.0;

ModelCard make_card(const char* name, Polarity pol,
                    std::initializer_list<std::pair<const char*, double>> params)
{
    ModelCard card;
    card.name = name;
    card.polarity = pol;
    for (const auto& [k, v] : params) card.params.emplace_back(k, v);
    return card;
}

} // namespace

ModelCard default_nmos_card()
{
    return make_card("CMOSN", Polarity::Nmos,
                     {{"LEVEL", 3},
                      {"TOX", 1.4e-8},
                      {"NSUB", 1e17},
                      {"GAMMA", 0.5483559},
                      {"PHI", 0.7},
                      {"VTO", 0.7640855},
                      {"DELTA", 3.0541177},
                      {"UO", 662.6984452},
                      {"ETA", 3.162045e-6},
                      {"THETA", 0.1013999},
                      {"KP", 1.259355e-4},
                      {"VMAX", 1.442228e5},
                      {"KAPPA", 0.3},
                      {"RSH", 7.513418e-3},
                      {"NFS", 1e12},
                      {"TPG", 1},
                      {"XJ", 3e-7},
                      {"LD", 1e-13},
                      {"WD", 2.334779e-7},
                      {"CGDO", 2.15e-10},
                      {"CGSO", 2.15e-10},
                      {"CGBO", 1e-10},
                      {"CJ", 4.258447e-4},
                      {"PB", 0.9140376},
                      {"MJ", 0.435903},
                      {"CJSW", 3.147465e-10},
                      {"MJSW", 0.1977689}});
}

ModelCard default_pmos_card()
{
    return make_card("CMOSP", Polarity::Pmos,
                     {{"LEVEL", 3},
                      {"TOX", 1.4e-8},
                      {"NSUB", 1e17},
                      {"GAMMA", 0.6243261},
                      {"PHI", 0.7},
                      {"VTO", -0.9444911},
                      {"DELTA", 0.1118368},
                      {"UO", 250},
                      {"ETA", 0},
                      {"THETA", 0.1633973},
                      {"KP", 3.924644e-5},
                      {"VMAX", 1e6},
                      {"KAPPA", 30.1015109},
                      {"RSH", 33.9672594},
                      {"NFS", 1e12},
                      {"TPG", -1},
                      {"XJ", 2e-7},
                      {"LD", 5e-13},
                      {"WD", 4.11531e-7},
                      {"CGDO", 2.34e-10},
                      {"CGSO", 2.34e-10},
                      {"CGBO", 1e-10},
                      {"CJ", 7.285722e-4},
                      {"PB", 0.96443},
                      {"MJ", 0.5},
                      {"CJSW", 2.955161e-10},
                      {"MJSW", 0.3184873}});
}

IdealOutputs ideal_reference(double iin, const RectifierParams& params)
{
    IdealOutputs out;
    out.full_pos = std::abs(iin);
    out.full_neg = -out.full_pos + 0.0; // avoid -0.0 for the zero sample
    if (iin > 0.0) {
        out.half_neg = -iin;
        out.half_pos = 0.0;
        out.square = params.vss;
    } else if (iin < 0.0) {
        out.half_neg = 0.0;
        out.half_pos = -iin;
        out.square = params.vdd;
    } else {
        out.square = params.vss; // fixed choice for the indeterminate point
    }
    return out;
}

IdealTrace ideal_trace(const std::vector<double>& iin, const RectifierParams& params)
{
    IdealTrace tr;
    size_t n = iin.size();
    tr.half_neg.reserve(n);
    tr.half_pos.reserve(n);
    tr.full_neg.reserve(n);
    tr.full_pos.reserve(n);
    tr.square.reserve(n);
    double hold = params.vss;
    for (double i : iin) {
        IdealOutputs o = ideal_reference(i, params);
        if (i != 0.0) hold = o.square;
        tr.half_neg.push_back(o.half_neg);
        tr.half_pos.push_back(o.half_pos);
        tr.full_neg.push_back(o.full_neg);
        tr.full_pos.push_back(o.full_pos);
        tr.square.push_back(hold);
    }
    return tr;
}

NetlistDocument build_rectifier(const RectifierParams& params)
{
    if (!(params.vdd > 0.0 && 0.0 > params.vss))
        throw NetlistError("rectifier supplies must satisfy vdd > 0 > vss");
    if (params.nmos_card.polarity == params.pmos_card.polarity)
        throw NetlistError("rectifier needs one NMOS and one PMOS card");
    if (params.w <= 0.0 || params.l <= 0.0)
        throw NetlistError("rectifier W and L must be positive");

    NetlistDocument doc;
    doc.title = "Current-mode multi-wave rectifier";

    auto ratio = [&](const char* mirror) {
        auto it = params.mirror_ratios.find(mirror);
        return it == params.mirror_ratios.end() ? 1.0 : it->second;
    };
    const double wn = params.w;
    const double wp = params.w * kPmosMirrorScale;
    const double l = params.l;
    const std::string nm = params.nmos_card.name;
    const std::string pm = params.pmos_card.name;

    auto mosfet = [&](const char* name, const char* d, const char* g, const char* s,
                      const char* b, const std::string& model, double w) {
        doc.elements.emplace_back(Mosfet{name, d, g, s, b, model, w, l});
    };

    doc.elements.emplace_back(VSource{"VDD", "VDD", "0", DcStim{params.vdd}});
    doc.elements.emplace_back(VSource{"VSS", "VSS", "0", DcStim{params.vss}});
    doc.elements.emplace_back(ISource{"IIN", "0", "X", DcStim{0.0}});

    // Class-AB current comparator: the input node X joins the sources of the
    // complementary pair M1/M2 whose gates are driven by the feedback
    // inverter M3/M4. Positive input leaves X through M1 into CM1, negative
    // input is replenished through M2 from CM2.
    mosfet("M1", "NC1", "B", "X", "VDD", pm, params.w);
    mosfet("M2", "NC2", "B", "X", "VSS", nm, params.w);
    mosfet("M3", "B", "X", "VSS", "VSS", nm, params.w);
    mosfet("M4", "B", "X", "VDD", "VDD", pm, params.w);

    // CM1: NMOS mirror, half-wave negative output plus the M7 replica.
    mosfet("M5", "NC1", "NC1", "VSS", "VSS", nm, wn);
    mosfet("M6", "OHN", "NC1", "VSS", "VSS", nm, wn * ratio("CM1"));
    mosfet("M7", "NC3", "NC1", "VSS", "VSS", nm, wn * ratio("CM1"));

    // CM2: PMOS mirror, half-wave positive output plus the M10 replica.
    mosfet("M8", "NC2", "NC2", "VDD", "VDD", pm, wp);
    mosfet("M9", "OHP", "NC2", "VDD", "VDD", pm, wp * ratio("CM2"));
    mosfet("M10", "NSUM", "NC2", "VDD", "VDD", pm, wp * ratio("CM2"));

    // CM3 folds the M7 copy back to a sourced current into the summing node.
    mosfet("M11", "NC3", "NC3", "VDD", "VDD", pm, wp);
    mosfet("M12", "NSUM", "NC3", "VDD", "VDD", pm, wp * ratio("CM3"));

    // CM4 sinks the summed |iin|: full-wave negative output at M14, with the
    // M15 replica feeding CM5.
    mosfet("M13", "NSUM", "NSUM", "VSS", "VSS", nm, wn);
    mosfet("M14", "OFN", "NSUM", "VSS", "VSS", nm, wn * ratio("CM4"));
    mosfet("M15", "NC5", "NSUM", "VSS", "VSS", nm, wn * ratio("CM4"));

    // CM5 re-sources it: full-wave positive output at M17.
    mosfet("M16", "NC5", "NC5", "VDD", "VDD", pm, wp);
    mosfet("M17", "OFP", "NC5", "VDD", "VDD", pm, wp * ratio("CM5"));

    // Output stage for the square wave. The gates ride the CM2/CM1 diode
    // nodes: for iin > 0 the CM1 diode turns M19 on while the idle CM2 diode
    // keeps M18 cut off, so SQ rests at VSS (and mirrored for iin < 0).
    mosfet("M18", "SQ", "NC2", "VDD", "VDD", pm, params.w);
    mosfet("M19", "SQ", "NC1", "VSS", "VSS", nm, params.w);

    doc.elements.emplace_back(VSource{"VOHN", "OHN", "0", DcStim{0.0}});
    doc.elements.emplace_back(VSource{"VOHP", "OHP", "0", DcStim{0.0}});
    doc.elements.emplace_back(VSource{"VOFN", "OFN", "0", DcStim{0.0}});
    doc.elements.emplace_back(VSource{"VOFP", "OFP", "0", DcStim{0.0}});

    doc.models.push_back(params.nmos_card);
    doc.models.push_back(params.pmos_card);
    return doc;
}

OutputMap output_map(const NetlistDocument& doc)
{
    auto require_sense = [&](const char* name) {
        const Element* e = doc.find_element(name);
        if (!e || !std::holds_alternative<VSource>(*e))
            throw NetlistError(std::string("rectifier binding missing: sense source ") + name);
        return "I(" + std::string(name) + ")";
    };
    const Element* iin = doc.find_element("IIN");
    if (!iin || !std::holds_alternative<ISource>(*iin))
        throw NetlistError("rectifier binding missing: input source IIN");

    bool has_sq = false;
    for (const Element& e : doc.elements)
        if (const auto* m = std::get_if<Mosfet>(&e))
            if (m->drain == "SQ" || m->gate == "SQ" || m->source == "SQ") has_sq = true;
    if (!has_sq) throw NetlistError("rectifier binding missing: square output node SQ");

    OutputMap map;
    map.iin = "I(IIN)";
    map.half_neg = require_sense("VOHN");
    map.half_pos = require_sense("VOHP");
    map.full_neg = require_sense("VOFN");
    map.full_pos = require_sense("VOFP");
    map.square = "V(SQ)";
    return map;
}

} // namespace rectsim
