#include "rectsim/harness.hpp"
#include "rectsim/numeric.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rectsim {

namespace {

namespace fs = std::filesystem;

std::string default_out_dir()
{
    const char* env = std::getenv("RECTSIM_OUT");
    return env && *env ? env : ".";
}

std::string temp_tag(double t)
{
    return "T" + format_number(t);
}

int cmd_run(const std::string& path, std::vector<double> temps, const std::string& outdir)
{
    if (!fs::exists(path)) {
        std::cerr << "file not found: " << path << "\n";
        return 2;
    }
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();

    NetlistDocument doc;
    try {
        doc = parse(buf.str());
    } catch (const NetlistError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 2;
    }
    for (const std::string& w : doc.warnings) std::cerr << "warning: " << w << "\n";

    if (temps.empty()) temps = doc.temperatures;
    if (temps.empty()) temps = {25.0};

    std::vector<AnalysisDirective> analyses = doc.analyses;
    if (analyses.empty()) analyses.emplace_back(OpAnalysis{});

    fs::create_directories(outdir);
    std::string stem = fs::path(path).stem().string();

    try {
        for (size_t i = 0; i < analyses.size(); ++i) {
            for (double t : temps) {
                std::string base = outdir + "/" + stem + "_";
                if (const auto* tr = std::get_if<TranAnalysis>(&analyses[i])) {
                    Waveform w = run_transient(doc, tr->step, tr->stop, t);
                    std::string file = base + "tran" + std::to_string(i + 1) + "_" +
                                       temp_tag(t) + ".csv";
                    write_waveform_csv(file, w);
                    std::cout << file << " (" << w.size() << " samples, avg supply power "
                              << format_csv(w.avg_supply_power) << " W)\n";
                } else if (const auto* dc = std::get_if<DcSweepAnalysis>(&analyses[i])) {
                    Waveform w = run_dc_sweep(doc, dc->source, dc->start, dc->stop, dc->step, t);
                    std::string file =
                        base + "dc" + std::to_string(i + 1) + "_" + temp_tag(t) + ".csv";
                    write_waveform_csv(file, w);
                    std::cout << file << " (" << w.size() << " points)\n";
                } else {
                    OperatingPoint op = solve_dc(doc, t);
                    std::string file =
                        base + "op" + std::to_string(i + 1) + "_" + temp_tag(t) + ".csv";
                    Waveform w;
                    w.temperature = t;
                    w.analysis = "op";
                    w.axis = {0.0};
                    for (const auto& [n, v] : op.node_voltages) {
                        w.names.push_back("V(" + n + ")");
                        w.samples.push_back({v});
                    }
                    for (const auto& [n, v] : op.source_currents) {
                        w.names.push_back("I(" + n + ")");
                        w.samples.push_back({v});
                    }
                    for (const auto& [n, v] : op.device_currents) {
                        w.names.push_back("ID(" + n + ")");
                        w.samples.push_back({v});
                    }
                    write_waveform_csv(file, w);
                    std::cout << file << " (" << op.iterations << " iterations, residual "
                              << format_csv(op.residual) << " A)\n";
                }
            }
        }
    } catch (const SimulationError& e) {
        std::cerr << "simulation failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_rectifier(const ExperimentSpec& spec, const std::string& outdir)
{
    fs::create_directories(outdir);
    ExperimentResult result;
    try {
        result = run_experiment(spec, RectifierParams{});
    } catch (const SimulationError& e) {
        std::cerr << "simulation failed: " << e.what() << "\n";
        return 1;
    }
    for (const ExperimentRun& run : result.runs) {
        std::string file = outdir + "/" + std::string(to_string(spec.kind));
        if (spec.kind != ExperimentKind::DcTemp)
            file += "_f" + format_number(run.frequency);
        file += "_" + temp_tag(run.temperature) + ".csv";
        write_waveform_csv(file, run.wave);
        for (const auto& [sig, m] : run.results) {
            std::cout << to_string(spec.kind) << " " << sig
                      << " f=" << format_number(run.frequency)
                      << " T=" << format_number(run.temperature)
                      << " nrmse=" << format_csv(m.nrmse)
                      << " zc=" << format_csv(m.zero_crossing_deviation)
                      << " power=" << format_csv(m.avg_power) << "\n";
        }
    }
    if (spec.kind == ExperimentKind::DcTemp && result.runs.size() > 1)
        std::cout << "pairwise max transfer deviation: "
                  << format_csv(result.temp_pairwise_max_deviation) << " A\n";
    write_metrics_csv(outdir + "/metrics.csv", result);
    std::cout << outdir << "/metrics.csv\n";
    return 0;
}

int cmd_emit_netlist(const std::string& outfile)
{
    NetlistDocument doc = build_rectifier(RectifierParams{});
    set_stimulus(doc, "IIN", SinStim{0.0, 200e-6, 10e6});
    doc.analyses.emplace_back(TranAnalysis{1e-10, 3e-7, {}});
    std::ofstream out(outfile, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << outfile << "\n";
        return 2;
    }
    out << serialize(doc);
    std::cout << outfile << "\n";
    return 0;
}

int cmd_ideal(double amp, int points, const std::string& outfile)
{
    if (amp <= 0.0 || points < 2) {
        std::cerr << "ideal: need --amp > 0 and --points >= 2\n";
        return 2;
    }
    RectifierParams params;
    std::vector<double> iin(static_cast<size_t>(points));
    for (int k = 0; k < points; ++k)
        iin[static_cast<size_t>(k)] = -amp + 2.0 * amp * k / (points - 1);
    IdealTrace tr = ideal_trace(iin, params);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!outfile.empty()) {
        file.open(outfile, std::ios::binary);
        if (!file) {
            std::cerr << "cannot write " << outfile << "\n";
            return 2;
        }
        out = &file;
    }
    *out << "t,iin,half_neg,half_pos,full_neg,full_pos,square\n";
    for (size_t k = 0; k < iin.size(); ++k) {
        *out << format_csv(iin[k]) << "," << format_csv(iin[k]) << ","
             << format_csv(tr.half_neg[k]) << "," << format_csv(tr.half_pos[k]) << ","
             << format_csv(tr.full_neg[k]) << "," << format_csv(tr.full_pos[k]) << ","
             << format_csv(tr.square[k]) << "\n";
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"SPICE-subset simulator and current-mode multi-wave rectifier harness"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Parse a netlist and execute its analysis directives");
    std::string netlist_path;
    std::vector<double> run_temps;
    std::string run_out = default_out_dir();
    run->add_option("netlist", netlist_path, "netlist file")->required();
    run->add_option("--temp", run_temps, "override temperature(s), C");
    run->add_option("--out", run_out, "output directory (default $RECTSIM_OUT or .)");

    // rectifier
    auto* rect = app.add_subcommand("rectifier", "Run a rectifier experiment against the ideal");
    std::string kind_name = "full_pos";
    ExperimentSpec spec;
    std::string rect_out = default_out_dir();
    std::vector<double> freqs{10e6};
    std::vector<double> temps{25.0};
    rect->add_option("--kind", kind_name, "half|full_neg|full_pos|square|dc_temp")->required();
    rect->add_option("--amp", spec.amplitude_pp, "input current, A peak-to-peak (default 400u)");
    rect->add_option("--freq", freqs, "frequencies, Hz")->delimiter(',');
    rect->add_option("--temp", temps, "temperatures, C")->delimiter(',');
    rect->add_option("--periods", spec.periods, "simulated periods (default 3)");
    rect->add_option("--spp", spec.steps_per_period, "steps per period (default 1000)");
    rect->add_option("--points", spec.sweep_points, "dc_temp sweep points (default 801)");
    rect->add_option("--out", rect_out, "output directory (default $RECTSIM_OUT or .)");

    // emit-netlist
    auto* emit = app.add_subcommand("emit-netlist", "Write the built rectifier netlist fixture");
    std::string emit_out = "rectifier.cir";
    emit->add_option("--out", emit_out, "output file (default rectifier.cir)");

    // ideal
    auto* ideal = app.add_subcommand("ideal", "Tabulate the ideal rectifier outputs");
    double ideal_amp = 400e-6;
    int ideal_points = 1001;
    std::string ideal_out;
    ideal->add_option("--amp", ideal_amp, "max |iin|, A (table spans [-amp, +amp])");
    ideal->add_option("--points", ideal_points, "table rows (default 1001)");
    ideal->add_option("--out", ideal_out, "output file (default stdout)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::stringstream dummy;
        int code = app.exit(e, dummy, dummy);
        if (code == 0) { // --help and friends
            std::cout << dummy.str();
            return 0;
        }
        std::cerr << dummy.str();
        return 2;
    }

    if (run->parsed()) return cmd_run(netlist_path, run_temps, run_out);
    if (rect->parsed()) {
        if (kind_name == "half") spec.kind = ExperimentKind::Half;
        else if (kind_name == "full_neg") spec.kind = ExperimentKind::FullNeg;
        else if (kind_name == "full_pos") spec.kind = ExperimentKind::FullPos;
        else if (kind_name == "square") spec.kind = ExperimentKind::Square;
        else if (kind_name == "dc_temp") spec.kind = ExperimentKind::DcTemp;
        else {
            std::cerr << "unknown --kind '" << kind_name << "'\n";
            return 2;
        }
        spec.frequencies = freqs;
        spec.temperatures = temps;
        return cmd_rectifier(spec, rect_out);
    }
    if (emit->parsed()) return cmd_emit_netlist(emit_out);
    if (ideal->parsed()) return cmd_ideal(ideal_amp, ideal_points, ideal_out);
    return 2;
}

} // namespace rectsim
