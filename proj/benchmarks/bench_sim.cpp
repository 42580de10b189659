#include <benchmark/benchmark.h>

#include "rectsim/engine.hpp"
#include "rectsim/rectifier.hpp"

using namespace rectsim;

static void BM_MosEval(benchmark::State& state)
{
    DeviceParams p = resolve_device(default_nmos_card(), 1.5e-6, 0.15e-6, 25.0);
    double vgs = 1.2;
    for (auto _ : state) {
        MosEval e = mos_dc_params(p, vgs, 0.9, -0.2, 1e-12);
        benchmark::DoNotOptimize(e);
        vgs = 1.2 + 1e-9 * (e.id > 0);
    }
}
BENCHMARK(BM_MosEval);

static void BM_ParseRectifierNetlist(benchmark::State& state)
{
    std::string text = serialize(build_rectifier(RectifierParams{}));
    for (auto _ : state) {
        NetlistDocument doc = parse(text);
        benchmark::DoNotOptimize(doc);
    }
}
BENCHMARK(BM_ParseRectifierNetlist);

static void BM_RectifierDcSolve(benchmark::State& state)
{
    NetlistDocument doc = build_rectifier(RectifierParams{});
    set_stimulus(doc, "IIN", DcStim{state.range(0) * 1e-6});
    for (auto _ : state) {
        OperatingPoint op = solve_dc(doc);
        benchmark::DoNotOptimize(op);
    }
}
BENCHMARK(BM_RectifierDcSolve)->Arg(10)->Arg(200)->Arg(400);

static void BM_RectifierTransientPeriod(benchmark::State& state)
{
    NetlistDocument doc = build_rectifier(RectifierParams{});
    set_stimulus(doc, "IIN", SinStim{0.0, 200e-6, 10e6});
    double spp = static_cast<double>(state.range(0));
    for (auto _ : state) {
        Waveform w = run_transient(doc, 1e-7 / spp, 1e-7, 25.0);
        benchmark::DoNotOptimize(w);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RectifierTransientPeriod)->Arg(250)->Arg(1000);

BENCHMARK_MAIN();
