#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rectsim {

enum class Polarity { Nmos, Pmos };

/// Named MOSFET parameter set. Parameters keep their parse order and exact
/// parsed values so a card re-serializes with every entry intact.
struct ModelCard {
    std::string name;
    Polarity polarity = Polarity::Nmos;
    std::vector<std::pair<std::string, double>> params;

    std::optional<double> find(std::string_view key) const;
    double get(std::string_view key, double fallback) const;
    int level() const { return static_cast<int>(get("LEVEL", 1.0)); }
    void set(std::string_view key, double value);

    bool operator==(const ModelCard&) const = default;
};

struct DcStim {
    double value = 0.0;
    bool operator==(const DcStim&) const = default;
};
struct SinStim {
    double offset = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;
    double delay = 0.0;
    double damping = 0.0;
    bool operator==(const SinStim&) const = default;
};
struct PulseStim {
    double v1 = 0.0;
    double v2 = 0.0;
    double delay = 0.0;
    double rise = 0.0;
    double fall = 0.0;
    double width = 0.0;
    double period = 0.0;
    bool operator==(const PulseStim&) const = default;
};
struct PwlStim {
    std::vector<std::pair<double, double>> points; // (time, value)
    bool operator==(const PwlStim&) const = default;
};
using Stimulus = std::variant<DcStim, SinStim, PulseStim, PwlStim>;

struct Mosfet {
    std::string name;
    std::string drain, gate, source, bulk;
    std::string model;
    double w = 0.0; // meters
    double l = 0.0; // meters
    bool operator==(const Mosfet&) const = default;
};
struct Resistor {
    std::string name;
    std::string pos, neg;
    double ohms = 0.0;
    bool operator==(const Resistor&) const = default;
};
struct Capacitor {
    std::string name;
    std::string pos, neg;
    double farads = 0.0;
    std::optional<double> initial_volts;
    bool operator==(const Capacitor&) const = default;
};
struct VSource {
    std::string name;
    std::string pos, neg;
    Stimulus stim = DcStim{};
    bool operator==(const VSource&) const = default;
};
struct ISource {
    std::string name;
    std::string pos, neg;
    Stimulus stim = DcStim{};
    bool operator==(const ISource&) const = default;
};
using Element = std::variant<Mosfet, Resistor, Capacitor, VSource, ISource>;

std::string_view element_name(const Element& e);

struct TranAnalysis {
    double step = 0.0;
    double stop = 0.0;
    std::optional<double> max_step;
    bool operator==(const TranAnalysis&) const = default;
};
struct DcSweepAnalysis {
    std::string source;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    bool operator==(const DcSweepAnalysis&) const = default;
};
struct OpAnalysis {
    bool operator==(const OpAnalysis&) const = default;
};
using AnalysisDirective = std::variant<TranAnalysis, DcSweepAnalysis, OpAnalysis>;

/// A parsed circuit. Tokens are upper-cased during parsing (SPICE is
/// case-insensitive); the title line is kept verbatim.
struct NetlistDocument {
    std::string title;
    std::vector<Element> elements;
    std::vector<ModelCard> models;
    std::vector<AnalysisDirective> analyses;
    std::vector<double> temperatures;
    std::vector<std::string> warnings; // non-fatal validation notes

    const ModelCard* find_model(std::string_view name) const;
    Element* find_element(std::string_view name);
    const Element* find_element(std::string_view name) const;

    /// Structural equality; warnings are parse artifacts and do not count.
    bool operator==(const NetlistDocument& o) const
    {
        return title == o.title && elements == o.elements && models == o.models &&
               analyses == o.analyses && temperatures == o.temperatures;
    }
};

class NetlistError : public std::runtime_error {
public:
    NetlistError(std::string message, int line = 0)
        : std::runtime_error(std::move(message)), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parse a full netlist (first line is the title, `.END` optional).
/// Throws NetlistError with a line number on malformed input.
NetlistDocument parse(std::string_view text);

/// Canonical text form; parse(serialize(d)) is structurally equal to d.
std::string serialize(const NetlistDocument& doc);

/// Ground "0" at index 0, remaining nodes dense in first-appearance order.
/// Throws NetlistError if no element references node "0".
std::vector<std::pair<std::string, int>> node_table(const NetlistDocument& doc);

/// Replace the stimulus of the named V/I source. Throws if absent.
void set_stimulus(NetlistDocument& doc, std::string_view source, const Stimulus& stim);

} // namespace rectsim
