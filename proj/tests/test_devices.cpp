#include "rectsim/devices.hpp"
#include "rectsim/rectifier.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rectsim;

namespace {

const ModelCard& nmos()
{
    static ModelCard card = default_nmos_card();
    return card;
}
const ModelCard& pmos()
{
    static ModelCard card = default_pmos_card();
    return card;
}

} // namespace

TEST_CASE("threshold voltage")
{
    CHECK(threshold_voltage(nmos(), 0.0, 25.0) == doctest::Approx(0.7640855).epsilon(1e-12));

    // body effect, evaluated directly from the formula
    double expected = 0.7640855 + 0.5483559 * (std::sqrt(1.7) - std::sqrt(0.7));
    CHECK(threshold_voltage(nmos(), -1.0, 25.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.0202667).epsilon(1e-7));

    ModelCard flat = nmos();
    flat.set("GAMMA", 0.0);
    CHECK(threshold_voltage(flat, -1.3, 25.0) == 0.7640855);

    // PMOS: reflected magnitudes, sign restored
    CHECK(threshold_voltage(pmos(), 0.0, 25.0) == doctest::Approx(-0.9444911).epsilon(1e-12));
    CHECK(threshold_voltage(pmos(), 0.5, 25.0) < -0.9444911);
}

TEST_CASE("square-law regions")
{
    const double kp = 1.259355e-4;
    const double w = 1.5e-6, l = 0.15e-6; // W/L = 10

    SUBCASE("saturation")
    {
        MosEval e = mos_dc(nmos(), w, l, 1.2640855, 1.2, 0.0, 25.0, 0.0);
        double id = 0.5 * kp * 10.0 * 0.5 * 0.5;
        CHECK(e.id == doctest::Approx(id).epsilon(1e-12));
        CHECK(id == doctest::Approx(1.5741938e-4).epsilon(1e-7));
        CHECK(e.gm == doctest::Approx(kp * 10.0 * 0.5).epsilon(1e-12));
        CHECK(e.gm == doctest::Approx(6.296775e-4).epsilon(1e-7));
        CHECK(e.gds == 0.0);
        CHECK(e.region == MosRegion::Saturation);
    }
    SUBCASE("triode")
    {
        MosEval e = mos_dc(nmos(), w, l, 1.2640855, 0.1, 0.0, 25.0, 0.0);
        double id = kp * 10.0 * (0.5 * 0.1 - 0.5 * 0.1 * 0.1);
        CHECK(e.id == doctest::Approx(id).epsilon(1e-12));
        CHECK(id == doctest::Approx(5.6671e-5).epsilon(1e-4));
        CHECK(e.region == MosRegion::Triode);
    }
    SUBCASE("cutoff")
    {
        MosEval e = mos_dc(nmos(), w, l, 0.5, 1.0, 0.0, 25.0, 0.0);
        CHECK(e.id == 0.0);
        CHECK(e.region == MosRegion::Cutoff);

        MosEval leak = mos_dc(nmos(), w, l, 0.5, 1.0, 0.0, 25.0, 1e-12);
        CHECK(leak.id == doctest::Approx(1e-12).epsilon(1e-9));
    }
}

TEST_CASE("capacitances")
{
    MosCaps c = mos_caps(nmos(), 1.5e-6, 0.15e-6, MosRegion::Saturation);
    CHECK(c.cgd >= 2.15e-10 * 1.5e-6); // overlap floor
    CHECK(c.cgd == doctest::Approx(3.225e-16).epsilon(1e-6));

    double cox = 3.9 * 8.854e-12 / 1.4e-8 * 1.5e-6 * 0.15e-6;
    CHECK(cox == doctest::Approx(5.549e-16).epsilon(1e-3));
    CHECK(c.cgs == doctest::Approx(2.15e-10 * 1.5e-6 + 2.0 / 3.0 * cox).epsilon(1e-9));

    MosCaps off = mos_caps(nmos(), 1.5e-6, 0.15e-6, MosRegion::Cutoff);
    CHECK(off.cgs == doctest::Approx(2.15e-10 * 1.5e-6).epsilon(1e-12)); // no intrinsic term
    CHECK(off.cgb == doctest::Approx(1e-10 * 0.15e-6 + cox).epsilon(1e-9));

    MosCaps tri = mos_caps(nmos(), 1.5e-6, 0.15e-6, MosRegion::Triode);
    CHECK(tri.cgs == doctest::Approx(2.15e-10 * 1.5e-6 + 0.5 * cox).epsilon(1e-9));
    CHECK(tri.cgd == tri.cgs);
}

TEST_CASE("temperature adjustment")
{
    SUBCASE("Tnom identity")
    {
        TempAdjusted a = temperature_adjust(nmos(), 27.0);
        CHECK(a.vto == 0.7640855);
        CHECK(a.kp == 1.259355e-4);
    }
    SUBCASE("identity below Tnom")
    {
        TempAdjusted a = temperature_adjust(nmos(), 25.0);
        CHECK(a.vto == 0.7640855);
        CHECK(a.kp == 1.259355e-4);
    }
    SUBCASE("hot corner")
    {
        TempAdjusted a = temperature_adjust(nmos(), 100.0);
        CHECK(a.vto == doctest::Approx(0.7640855 - 0.002 * 73).epsilon(1e-12));
        CHECK(a.vto == doctest::Approx(0.6180855).epsilon(1e-9));
        double factor = std::pow((100.0 + 273.15) / 300.15, -1.5);
        CHECK(a.kp == doctest::Approx(1.259355e-4 * factor).epsilon(1e-12));

        TempAdjusted p = temperature_adjust(pmos(), 100.0);
        CHECK(p.vto == doctest::Approx(-0.9444911 + 0.002 * 73).epsilon(1e-12));
    }
}

TEST_CASE("stimulus evaluation")
{
    Stimulus sine = SinStim{0.0, 200e-6, 1e7};
    CHECK(stimulus_value(sine, 25e-9) == doctest::Approx(2.0e-4).epsilon(1e-12));
    CHECK(stimulus_value(sine, 0.0) == 0.0);
    CHECK(stimulus_value(sine, 75e-9) == doctest::Approx(-2.0e-4).epsilon(1e-12));

    Stimulus delayed = SinStim{1e-3, 1.0, 1e6, 5e-7, 0.0};
    CHECK(stimulus_value(delayed, 1e-7) == 1e-3);

    Stimulus damped = SinStim{0.0, 1.0, 1e6, 0.0, 1e6};
    CHECK(stimulus_value(damped, 2.5e-7) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));

    Stimulus ramp = PwlStim{{{0.0, 0.0}, {1e-6, 1.0}}};
    CHECK(stimulus_value(ramp, 5e-7) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stimulus_value(ramp, 2e-6) == 1.0);

    Stimulus pulse = PulseStim{0.0, 1.0, 1e-9, 1e-9, 1e-9, 5e-9, 10e-9};
    CHECK(stimulus_value(pulse, 0.0) == 0.0);
    CHECK(stimulus_value(pulse, 1.5e-9) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stimulus_value(pulse, 3e-9) == 1.0);
    CHECK(stimulus_value(pulse, 7.5e-9) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stimulus_value(pulse, 9e-9) == 0.0);
    CHECK(stimulus_value(pulse, 11.5e-9) == doctest::Approx(0.5).epsilon(1e-12)); // periodic

    CHECK(stimulus_value(DcStim{-3.0}, 123.0) == -3.0);
}

TEST_CASE("derivatives match finite differences")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    const double h = 1e-7;
    int checked = 0;
    for (int trial = 0; trial < 4000 && checked < 1200; ++trial) {
        const ModelCard& card = (trial % 2) ? pmos() : nmos();
        double vgs = uni(rng), vds = uni(rng), vbs = uni(rng);

        // Stay away from region boundaries.
        double vt = threshold_voltage(card, vbs, 25.0);
        double vov = (card.polarity == Polarity::Nmos) ? vgs - vt : vt - vgs;
        double vmag = std::abs(vds);
        if (std::abs(vov) < 1e-4) continue;
        if (std::abs(vmag - std::abs(vov)) < 1e-4) continue;
        if (vmag < 1e-4) continue;
        // keep the swapped frame off its own boundaries too
        double vt2 = threshold_voltage(card, vbs - vds, 25.0);
        double vov2 = (card.polarity == Polarity::Nmos) ? (vgs - vds) - vt2 : vt2 - (vgs - vds);
        if (std::abs(vov2) < 1e-4 || std::abs(vmag - std::abs(vov2)) < 1e-4) continue;
        ++checked;

        auto id = [&](double g, double d, double b) {
            return mos_dc(card, 1.5e-6, 0.15e-6, g, d, b, 25.0, 1e-12).id;
        };
        MosEval e = mos_dc(card, 1.5e-6, 0.15e-6, vgs, vds, vbs, 25.0, 1e-12);
        double fd_gm = (id(vgs + h, vds, vbs) - id(vgs - h, vds, vbs)) / (2 * h);
        double fd_gds = (id(vgs, vds + h, vbs) - id(vgs, vds - h, vbs)) / (2 * h);
        double fd_gmb = (id(vgs, vds, vbs + h) - id(vgs, vds, vbs - h)) / (2 * h);
        CAPTURE(vgs);
        CAPTURE(vds);
        CAPTURE(vbs);
        double tol_gm = std::max(1e-6, 1e-4 * std::abs(fd_gm));
        double tol_gds = std::max(1e-6, 1e-4 * std::abs(fd_gds));
        double tol_gmb = std::max(1e-6, 1e-4 * std::abs(fd_gmb));
        CHECK(std::abs(e.gm - fd_gm) <= tol_gm);
        CHECK(std::abs(e.gds - fd_gds) <= tol_gds);
        CHECK(std::abs(e.gmb - fd_gmb) <= tol_gmb);
    }
    CHECK(checked >= 1000);
}

TEST_CASE("current continuity at region boundaries")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ovr(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
        double vov = ovr(rng);
        double vgs = 0.7640855 + vov;
        MosEval lo = mos_dc(nmos(), 1.5e-6, 0.15e-6, vgs, vov * (1 - 1e-12), 0.0, 25.0, 0.0);
        MosEval hi = mos_dc(nmos(), 1.5e-6, 0.15e-6, vgs, vov * (1 + 1e-12), 0.0, 25.0, 0.0);
        CHECK(std::abs(lo.id - hi.id) <= 1e-15);
    }
    // cutoff edge: id -> gmin*vds as vov -> 0+
    for (double eps : {1e-6, 1e-9, 1e-12}) {
        MosEval e = mos_dc(nmos(), 1.5e-6, 0.15e-6, 0.7640855 + eps, 1.0, 0.0, 25.0, 1e-12);
        CHECK(e.id - 1e-12 * 1.0 <= 0.5 * 1.259355e-3 * eps * eps + 1e-18);
    }
}

TEST_CASE("polarity mirror")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    ModelCard nmosized = pmos();
    nmosized.polarity = Polarity::Nmos;
    nmosized.set("VTO", -pmos().get("VTO", 0.0));
    for (int i = 0; i < 500; ++i) {
        double vgs = uni(rng), vds = uni(rng), vbs = uni(rng);
        MosEval p = mos_dc(pmos(), 1.5e-6, 0.15e-6, vgs, vds, vbs, 25.0, 1e-12);
        MosEval n = mos_dc(nmosized, 1.5e-6, 0.15e-6, -vgs, -vds, -vbs, 25.0, 1e-12);
        CHECK(p.id == doctest::Approx(-n.id).epsilon(1e-12));
        CHECK(p.gm == doctest::Approx(n.gm).epsilon(1e-12));
        CHECK(p.gds == doctest::Approx(n.gds).epsilon(1e-12));
        CHECK(p.region == n.region);
    }
}

TEST_CASE("mirror ratio law on shared vgs")
{
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ovr(0.1, 0.8);
    std::uniform_real_distribution<double> ratio(0.25, 8.0);
    for (int i = 0; i < 300; ++i) {
        double vgs = 0.7640855 + ovr(rng);
        double r = ratio(rng);
        MosEval a = mos_dc(nmos(), 1.5e-6, 0.15e-6, vgs, 1.4, 0.0, 25.0, 0.0);
        MosEval b = mos_dc(nmos(), 1.5e-6 * r, 0.15e-6, vgs, 1.2, 0.0, 25.0, 0.0);
        REQUIRE(a.region == MosRegion::Saturation);
        REQUIRE(b.region == MosRegion::Saturation);
        CHECK(b.id / a.id == doctest::Approx(r).epsilon(1e-12));
    }
}
