#include "rectsim/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rectsim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Synthetic {
    std::vector<double> t, in, ideal;
};

// Two ideal full-wave periods at 10 MHz, 1000 steps per period.
Synthetic synthetic_full_pos()
{
    Synthetic s;
    double f = 10e6;
    int spp = 1000;
    for (int k = 0; k <= 2 * spp; ++k) {
        double t = k / (f * spp);
        double iin = 200e-6 * std::sin(2 * kPi * f * t);
        s.t.push_back(t);
        s.in.push_back(iin);
        s.ideal.push_back(std::abs(iin));
    }
    return s;
}

fs::path temp_dir(const char* tag)
{
    fs::path dir = fs::temp_directory_path() / (std::string("rectsim_test_") + tag);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("metrics of a signal against itself are all zero")
{
    Synthetic s = synthetic_full_pos();
    ExperimentSpec spec;
    RectifierMetrics m =
        metrics(s.t, s.ideal, s.ideal, s.in, ExperimentKind::FullPos, spec, RectifierParams{});
    CHECK(m.nrmse == 0.0);
    CHECK(m.peak_error == 0.0);
    CHECK(m.zero_crossing_deviation == 0.0);
    CHECK(m.rail_error == 0.0);
}

TEST_CASE("constant offset maps to nrmse and peak error")
{
    Synthetic s = synthetic_full_pos();
    std::vector<double> out = s.ideal;
    for (double& v : out) v += 4e-6;
    ExperimentSpec spec;
    RectifierMetrics m =
        metrics(s.t, out, s.ideal, s.in, ExperimentKind::FullPos, spec, RectifierParams{});
    CHECK(m.nrmse == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(m.peak_error == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("one-sample delay shows up as 1e-10 s of crossing deviation")
{
    Synthetic s = synthetic_full_pos();
    std::vector<double> out(s.ideal.size());
    out[0] = s.ideal[0];
    for (size_t k = 1; k < out.size(); ++k) out[k] = s.ideal[k - 1];
    ExperimentSpec spec;
    RectifierMetrics m =
        metrics(s.t, out, s.ideal, s.in, ExperimentKind::FullPos, spec, RectifierParams{});
    CHECK(m.zero_crossing_deviation == doctest::Approx(1e-10).epsilon(0.05));
}

TEST_CASE("zero-amplitude window yields zero error fields")
{
    std::vector<double> t{0, 1e-9, 2e-9}, z{0, 0, 0};
    ExperimentSpec spec;
    RectifierMetrics m = metrics(t, z, z, z, ExperimentKind::FullPos, spec, RectifierParams{});
    CHECK(m.nrmse == 0.0);
    CHECK(m.peak_error == 0.0);
}

TEST_CASE("empty retained window is an error")
{
    ExperimentSpec spec;
    CHECK_THROWS_AS(metrics({}, {}, {}, {}, ExperimentKind::FullPos, spec, RectifierParams{}),
                    SimulationError);
}

TEST_CASE("experiment amplitude bounds")
{
    ExperimentSpec spec;
    spec.amplitude_pp = 500e-6; // beyond the default 400 uA p-p bound
    CHECK_THROWS_AS(run_experiment(spec, RectifierParams{}), SimulationError);
    spec.amplitude_pp = 0.0;
    CHECK_THROWS_AS(run_experiment(spec, RectifierParams{}), SimulationError);
}

TEST_CASE("full experiment at reduced resolution")
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::FullPos;
    spec.frequencies = {10e6};
    spec.periods = 2;
    spec.steps_per_period = 200;
    ExperimentResult result = run_experiment(spec, RectifierParams{});
    REQUIRE(result.runs.size() == 1);
    REQUIRE(result.runs[0].results.size() == 1);
    const RectifierMetrics& m = result.runs[0].results[0].second;
    CHECK(m.nrmse < 0.10);
    CHECK(m.avg_power > 0.0);
    CHECK(m.avg_power < 0.1);
    CHECK(result.runs[0].wave.size() == 401);
}

TEST_CASE("half kind reports both phases")
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Half;
    spec.periods = 2;
    spec.steps_per_period = 200;
    ExperimentResult result = run_experiment(spec, RectifierParams{});
    REQUIRE(result.runs.size() == 1);
    REQUIRE(result.runs[0].results.size() == 2);
    CHECK(result.runs[0].results[0].first == "half_neg");
    CHECK(result.runs[0].results[1].first == "half_pos");
}

TEST_CASE("csv files are deterministic across runs")
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Square;
    spec.periods = 2;
    spec.steps_per_period = 100;
    fs::path dir = temp_dir("csv");

    auto emit = [&](const char* name) {
        ExperimentResult r = run_experiment(spec, RectifierParams{});
        write_waveform_csv((dir / name).string(), r.runs[0].wave);
        std::ifstream in(dir / name, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    std::string a = emit("a.csv");
    std::string b = emit("b.csv");
    CHECK(a == b);
    CHECK(a.rfind("t,iin,half_neg,half_pos,full_neg,full_pos,square,ideal_half_neg", 0) == 0);
}

TEST_CASE("cli: missing netlist file exits 2")
{
    CHECK(run_cli({"run", "/nonexistent/missing.cir"}) == 2);
}

TEST_CASE("cli: netlist parse errors exit 2")
{
    fs::path dir = temp_dir("badcir");
    fs::path cir = dir / "bad.cir";
    std::ofstream(cir) << "broken\nQ1 1 2 3 QM\n";
    CHECK(run_cli({"run", cir.string()}) == 2);
}

TEST_CASE("cli: bad usage exits 2")
{
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"rectifier", "--kind", "bogus"}) == 2);
    CHECK(run_cli({}) == 2);
}

TEST_CASE("cli: emit-netlist round-trips through run")
{
    fs::path dir = temp_dir("emit");
    fs::path cir = dir / "rect.cir";
    REQUIRE(run_cli({"emit-netlist", "--out", cir.string()}) == 0);

    std::ifstream in(cir, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    NetlistDocument doc = parse(buf.str());
    int mosfets = 0;
    for (const Element& e : doc.elements)
        if (std::holds_alternative<Mosfet>(e)) ++mosfets;
    CHECK(mosfets == 19);
    REQUIRE(doc.analyses.size() == 1);

    // shorten the directive so the smoke run stays quick
    std::get<TranAnalysis>(doc.analyses[0]) = TranAnalysis{1e-9, 5e-8, {}};
    std::ofstream out(cir, std::ios::binary);
    out << serialize(doc);
    out.close();
    CHECK(run_cli({"run", cir.string(), "--out", dir.string()}) == 0);
    CHECK(fs::exists(dir / "rect_tran1_T25.csv"));
}

TEST_CASE("cli: ideal oracle table")
{
    fs::path dir = temp_dir("ideal");
    fs::path csv = dir / "ideal.csv";
    REQUIRE(run_cli({"ideal", "--amp", "400e-6", "--points", "11", "--out", csv.string()}) == 0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,iin,half_neg,half_pos,full_neg,full_pos,square");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 11);
}

TEST_CASE("cli: rectifier experiment writes waveform and metrics csv")
{
    fs::path dir = temp_dir("exp");
    REQUIRE(run_cli({"rectifier", "--kind", "full_pos", "--amp", "400e-6", "--freq", "1e7",
                     "--temp", "25", "--periods", "2", "--spp", "100", "--out",
                     dir.string()}) == 0);
    CHECK(fs::exists(dir / "full_pos_f10000000_T25.csv"));
    CHECK(fs::exists(dir / "metrics.csv"));
}
