#include "rectsim/devices.hpp"

#include <algorithm>
#include <cmath>

namespace rectsim {

namespace {

constexpr double kTnom = 27.0;       // C
constexpr double kVtoTc = 2.0e-3;    // V per C above Tnom
constexpr double kEps0 = 8.854e-12;  // F/m
constexpr double kEpsSiO2 = 3.9;
constexpr double kPhiFloor = 1e-6;   // V, clamp for PHI - vbs

// Raw NMOS-frame evaluation, requires vds >= 0. Returns id plus exact
// partials of the branch equation.
struct RawEval {
    double id, gm, gds, gmb;
    MosRegion region;
};

RawEval nmos_eval(const DeviceParams& p, double vgs, double vds, double vbs, double gmin)
{
    double sphi = std::sqrt(p.phi);
    double arg = p.phi - vbs;
    double dvt_dvbs;
    double sarg;
    if (arg <= kPhiFloor) {
        sarg = std::sqrt(kPhiFloor);
        dvt_dvbs = 0.0; // clamped, threshold no longer tracks vbs
    } else {
        sarg = std::sqrt(arg);
        dvt_dvbs = -p.gamma / (2.0 * sarg);
    }
    double vt = p.vto + p.gamma * (sarg - sphi);
    double vov = vgs - vt;

    RawEval r{gmin * vds, 0.0, gmin, 0.0, MosRegion::Cutoff};
    if (vov <= 0.0) return r;

    double clm = 1.0 + p.lambda * vds;
    if (vds < vov) {
        r.region = MosRegion::Triode;
        double core = vov * vds - 0.5 * vds * vds;
        r.id += p.beta * core * clm;
        r.gm = p.beta * vds * clm;
        r.gds += p.beta * (vov - vds) * clm + p.beta * core * p.lambda;
        r.gmb = p.beta * vds * clm * (-dvt_dvbs);
    } else {
        r.region = MosRegion::Saturation;
        double half = 0.5 * p.beta * vov * vov;
        r.id += half * clm;
        r.gm = p.beta * vov * clm;
        r.gds += half * p.lambda;
        r.gmb = p.beta * vov * clm * (-dvt_dvbs);
    }
    return r;
}

} // namespace

TempAdjusted temperature_adjust(const ModelCard& card, double temp_c)
{
    double vto = card.get("VTO", 0.0);
    double kp = card.get("KP", 2e-5);
    double teff = std::max(temp_c, kTnom);
    double shift = kVtoTc * (teff - kTnom);
    // |VTO| shrinks with temperature for both polarities.
    if (vto >= 0.0) vto = vto - shift;
    else vto = vto + shift;
    kp *= std::pow((teff + 273.15) / (kTnom + 273.15), -1.5);
    return {vto, kp};
}

double threshold_voltage(const ModelCard& card, double vbs, double temp_c)
{
    TempAdjusted adj = temperature_adjust(card, temp_c);
    double gamma = card.get("GAMMA", 0.0);
    double phi = std::max(card.get("PHI", 0.7), kPhiFloor);
    bool pmos = card.polarity == Polarity::Pmos;
    double vbs_n = pmos ? -vbs : vbs;
    double arg = std::max(phi - vbs_n, kPhiFloor);
    double vt = std::abs(adj.vto) + gamma * (std::sqrt(arg) - std::sqrt(phi));
    return pmos ? -vt : vt;
}

DeviceParams resolve_device(const ModelCard& card, double w, double l, double temp_c)
{
    TempAdjusted adj = temperature_adjust(card, temp_c);
    DeviceParams p;
    p.polarity = card.polarity;
    p.beta = adj.kp * w / l;
    p.vto = adj.vto;
    p.gamma = card.get("GAMMA", 0.0);
    p.phi = std::max(card.get("PHI", 0.7), kPhiFloor);
    p.lambda = card.get("LAMBDA", 0.0);
    p.cgdo = card.get("CGDO", 0.0);
    p.cgso = card.get("CGSO", 0.0);
    p.cgbo = card.get("CGBO", 0.0);
    double tox = card.get("TOX", 0.0);
    p.cox_total = tox > 0.0 ? kEpsSiO2 * kEps0 / tox * w * l : 0.0;
    p.w = w;
    p.l = l;
    p.temperature = temp_c;
    return p;
}

MosEval mos_dc_params(const DeviceParams& p, double vgs, double vds, double vbs, double gmin)
{
    // PMOS reflects onto the NMOS frame: id_p(v) = -id_n(-v), conductances
    // carry over unchanged.
    double sign = 1.0;
    double g = vgs, d = vds, b = vbs;
    if (p.polarity == Polarity::Pmos) {
        sign = -1.0;
        g = -vgs;
        d = -vds;
        b = -vbs;
    }
    DeviceParams pn = p;
    pn.vto = std::abs(p.vto);

    bool swapped = d < 0.0;
    RawEval raw;
    if (swapped) {
        // Exchange drain and source: evaluate at the mirrored bias and map
        // the partials back through the chain rule.
        raw = nmos_eval(pn, g - d, -d, b - d, gmin);
        double e1 = raw.gm, e2 = raw.gds, e3 = raw.gmb;
        raw.id = -raw.id;
        raw.gm = -e1;
        raw.gds = e1 + e2 + e3;
        raw.gmb = -e3;
    } else {
        raw = nmos_eval(pn, g, d, b, gmin);
    }

    MosEval out;
    out.id = sign * raw.id;
    out.gm = raw.gm;
    out.gds = raw.gds;
    out.gmb = raw.gmb;
    out.region = raw.region;
    MosCaps caps = mos_caps_params(p, raw.region);
    if (swapped) std::swap(caps.cgs, caps.cgd);
    out.cgs = caps.cgs;
    out.cgd = caps.cgd;
    out.cgb = caps.cgb;
    return out;
}

MosEval mos_dc(const ModelCard& card, double w, double l, double vgs, double vds, double vbs,
               double temp_c, double gmin)
{
    return mos_dc_params(resolve_device(card, w, l, temp_c), vgs, vds, vbs, gmin);
}

MosCaps mos_caps_params(const DeviceParams& p, MosRegion region)
{
    MosCaps c;
    c.cgs = p.cgso * p.w;
    c.cgd = p.cgdo * p.w;
    c.cgb = p.cgbo * p.l;
    switch (region) {
        case MosRegion::Cutoff: c.cgb += p.cox_total; break;
        case MosRegion::Triode:
            c.cgs += 0.5 * p.cox_total;
            c.cgd += 0.5 * p.cox_total;
            break;
        case MosRegion::Saturation: c.cgs += (2.0 / 3.0) * p.cox_total; break;
    }
    return c;
}

MosCaps mos_caps(const ModelCard& card, double w, double l, MosRegion region)
{
    return mos_caps_params(resolve_device(card, w, l, 25.0), region);
}

double stimulus_value(const Stimulus& s, double t)
{
    struct V {
        double t;
        double operator()(const DcStim& d) const { return d.value; }
        double operator()(const SinStim& x) const
        {
            constexpr double two_pi = 6.283185307179586476925286766559;
            if (t < x.delay) return x.offset;
            double tau = t - x.delay;
            double wave = std::sin(two_pi * x.frequency * tau);
            if (x.damping != 0.0) wave *= std::exp(-x.damping * tau);
            return x.offset + x.amplitude * wave;
        }
        double operator()(const PulseStim& x) const
        {
            if (t < x.delay) return x.v1;
            double tp = t - x.delay;
            if (x.period > 0.0) tp = std::fmod(tp, x.period);
            if (tp < x.rise)
                return x.rise > 0.0 ? x.v1 + (x.v2 - x.v1) * (tp / x.rise) : x.v2;
            tp -= x.rise;
            if (tp < x.width) return x.v2;
            tp -= x.width;
            if (tp < x.fall)
                return x.fall > 0.0 ? x.v2 + (x.v1 - x.v2) * (tp / x.fall) : x.v1;
            return x.v1;
        }
        double operator()(const PwlStim& x) const
        {
            const auto& pts = x.points;
            if (pts.empty()) return 0.0;
            if (t <= pts.front().first) return pts.front().second;
            if (t >= pts.back().first) return pts.back().second;
            for (size_t i = 1; i < pts.size(); ++i) {
                if (t <= pts[i].first) {
                    double t0 = pts[i - 1].first, v0 = pts[i - 1].second;
                    double t1 = pts[i].first, v1 = pts[i].second;
                    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
                }
            }
            return pts.back().second;
        }
    };
    return std::visit(V{t}, s);
}

double stimulus_dc(const Stimulus& s)
{
    return stimulus_value(s, 0.0);
}

} // namespace rectsim
