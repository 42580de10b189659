#include "rectsim/engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace rectsim {

namespace {

struct CMos {
    std::string name;
    int d, g, s, b; // node_table indices, 0 = ground
    DeviceParams p;
};
struct CRes {
    int pos, neg;
    double conductance;
};
struct CCap {
    std::string name;
    int pos, neg;
    double farads;
    std::optional<double> ic;
};
struct CSrc {
    std::string name;
    int pos, neg;
    Stimulus stim;
    std::optional<double> override_value; // sweep override
};

// One trapezoidal companion branch: an explicit capacitor or one of the
// three MOSFET gate capacitances. Capacitance is refreshed per step for
// MOSFET branches (Meyer values follow the operating region).
struct Dyn {
    int pos, neg;
    double c;
    double v_prev;
    double i_prev;
};

class Sim {
public:
    Sim(const NetlistDocument& doc, double temp, const EngineOptions& opts) : opts_(opts)
    {
        table_ = node_table(doc);
        for (const auto& [name, idx] : table_) index_[name] = idx;
        nn_ = static_cast<int>(table_.size()) - 1;

        for (const Element& e : doc.elements) {
            if (const auto* m = std::get_if<Mosfet>(&e)) {
                const ModelCard* card = doc.find_model(m->model);
                if (!card) throw SimulationError("unresolved model for " + m->name);
                CMos cm;
                cm.name = m->name;
                cm.d = index_.at(m->drain);
                cm.g = index_.at(m->gate);
                cm.s = index_.at(m->source);
                cm.b = index_.at(m->bulk);
                cm.p = resolve_device(*card, m->w, m->l, temp);
                mos_.push_back(std::move(cm));
            } else if (const auto* r = std::get_if<Resistor>(&e)) {
                res_.push_back({index_.at(r->pos), index_.at(r->neg), 1.0 / r->ohms});
            } else if (const auto* c = std::get_if<Capacitor>(&e)) {
                caps_.push_back({c->name, index_.at(c->pos), index_.at(c->neg), c->farads,
                                 c->initial_volts});
            } else if (const auto* v = std::get_if<VSource>(&e)) {
                vsrc_.push_back({v->name, index_.at(v->pos), index_.at(v->neg), v->stim, {}});
            } else if (const auto* i = std::get_if<ISource>(&e)) {
                isrc_.push_back({i->name, index_.at(i->pos), index_.at(i->neg), i->stim, {}});
            }
        }
        nv_ = static_cast<int>(vsrc_.size());
    }

    int unknowns() const { return nn_ + nv_; }
    int nodes() const { return nn_; }

    struct Ctx {
        double time = 0.0;
        double scale = 1.0;          // source-stepping ramp factor
        double gmin = 1e-12;
        const std::vector<Dyn>* dyn = nullptr; // transient companions
        double dt = 0.0;
        bool hold_ic_caps = false;   // t=0 solve: caps with IC act as sources
    };

    // Row index of a node (-1 for ground).
    static int row(int node) { return node - 1; }
    double nodev(const std::vector<double>& x, int node) const
    {
        return node == 0 ? 0.0 : x[static_cast<size_t>(node) - 1];
    }

    double source_value(const CSrc& s, const Ctx& ctx) const
    {
        double v = s.override_value ? *s.override_value : stimulus_value(s.stim, ctx.time);
        return v * ctx.scale;
    }

    MnaSystem assemble(const std::vector<double>& x, const Ctx& ctx) const
    {
        int extra = ctx.hold_ic_caps ? static_cast<int>(ic_cap_count()) : 0;
        MnaSystem sys(unknowns() + extra);

        for (const CRes& r : res_) {
            int a = row(r.pos), b = row(r.neg);
            sys.add(a, a, r.conductance);
            sys.add(b, b, r.conductance);
            sys.add(a, b, -r.conductance);
            sys.add(b, a, -r.conductance);
        }
        for (const CSrc& s : isrc_) {
            double v = source_value(s, ctx);
            sys.add_rhs(row(s.pos), -v);
            sys.add_rhs(row(s.neg), v);
        }
        for (int k = 0; k < nv_; ++k) {
            const CSrc& s = vsrc_[static_cast<size_t>(k)];
            int br = nn_ + k;
            int a = row(s.pos), b = row(s.neg);
            sys.add(a, br, 1.0);
            sys.add(b, br, -1.0);
            sys.add(br, a, 1.0);
            sys.add(br, b, -1.0);
            sys.add_rhs(br, source_value(s, ctx));
        }
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            MosEval e = mos_dc_params(m.p, vgs, vds, vbs, ctx.gmin);
            double ieq = e.id - e.gm * vgs - e.gds * vds - e.gmb * vbs;
            int d = row(m.d), g = row(m.g), s = row(m.s), b = row(m.b);
            sys.add(d, g, e.gm);
            sys.add(d, d, e.gds);
            sys.add(d, b, e.gmb);
            sys.add(d, s, -(e.gm + e.gds + e.gmb));
            sys.add(s, g, -e.gm);
            sys.add(s, d, -e.gds);
            sys.add(s, b, -e.gmb);
            sys.add(s, s, e.gm + e.gds + e.gmb);
            sys.add_rhs(d, -ieq);
            sys.add_rhs(s, ieq);
        }
        if (ctx.dyn) {
            for (const Dyn& dd : *ctx.dyn) {
                double geq = 2.0 * dd.c / ctx.dt;
                double ieq = -geq * dd.v_prev - dd.i_prev;
                int a = row(dd.pos), b = row(dd.neg);
                sys.add(a, a, geq);
                sys.add(b, b, geq);
                sys.add(a, b, -geq);
                sys.add(b, a, -geq);
                sys.add_rhs(a, -ieq);
                sys.add_rhs(b, ieq);
            }
        }
        if (ctx.hold_ic_caps) {
            // The t=0 solve pins IC-annotated capacitors at their initial
            // voltage through a temporary source branch each.
            int k = unknowns();
            for (const CCap& c : caps_) {
                if (!c.ic) continue;
                int a = row(c.pos), b = row(c.neg);
                sys.add(a, k, 1.0);
                sys.add(b, k, -1.0);
                sys.add(k, a, 1.0);
                sys.add(k, b, -1.0);
                sys.add_rhs(k, *c.ic * ctx.scale);
                ++k;
            }
        }
        return sys;
    }

    // Max absolute node-KCL residual using the nonlinear device equations.
    double residual(const std::vector<double>& x, const Ctx& ctx) const
    {
        std::vector<double> r(static_cast<size_t>(nn_), 0.0);
        auto leave = [&](int node, double i) {
            if (node > 0) r[static_cast<size_t>(node) - 1] += i;
        };
        for (const CRes& rr : res_) {
            double i = rr.conductance * (nodev(x, rr.pos) - nodev(x, rr.neg));
            leave(rr.pos, i);
            leave(rr.neg, -i);
        }
        for (const CSrc& s : isrc_) {
            double v = source_value(s, ctx);
            leave(s.pos, v);
            leave(s.neg, -v);
        }
        for (int k = 0; k < nv_; ++k) {
            double i = x[static_cast<size_t>(nn_ + k)];
            leave(vsrc_[static_cast<size_t>(k)].pos, i);
            leave(vsrc_[static_cast<size_t>(k)].neg, -i);
        }
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            MosEval e = mos_dc_params(m.p, vgs, vds, vbs, ctx.gmin);
            leave(m.d, e.id);
            leave(m.s, -e.id);
        }
        if (ctx.dyn) {
            for (const Dyn& dd : *ctx.dyn) {
                double geq = 2.0 * dd.c / ctx.dt;
                double v = nodev(x, dd.pos) - nodev(x, dd.neg);
                double i = geq * (v - dd.v_prev) - dd.i_prev;
                leave(dd.pos, i);
                leave(dd.neg, -i);
            }
        }
        if (ctx.hold_ic_caps) {
            size_t k = static_cast<size_t>(unknowns());
            for (const CCap& c : caps_) {
                if (!c.ic) continue;
                double i = x[k++];
                leave(c.pos, i);
                leave(c.neg, -i);
            }
        }
        double worst = 0.0;
        for (double v : r) worst = std::max(worst, std::abs(v));
        return worst;
    }

    struct NewtonOutcome {
        bool converged = false;
        int iterations = 0;
        double residual = 0.0;
    };

    NewtonOutcome newton(std::vector<double>& x, const Ctx& ctx) const
    {
        int n = unknowns() + (ctx.hold_ic_caps ? static_cast<int>(ic_cap_count()) : 0);
        if (static_cast<int>(x.size()) != n) x.assign(static_cast<size_t>(n), 0.0);
        NewtonOutcome out;
        double res_cur = residual(x, ctx);
        for (int pass = 0; pass < opts_.max_iterations; ++pass) {
            MnaSystem sys = assemble(x, ctx);
            Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
                a(sys.matrix.data(), n, n);
            Eigen::Map<Eigen::VectorXd> b(sys.rhs.data(), n);
            Eigen::VectorXd xnew = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
            if (!xnew.allFinite()) throw SimulationError("singular matrix");

            // Take the full Newton step when it improves the KCL residual;
            // otherwise fall back to the per-node voltage clamp.
            std::vector<double> full(xnew.data(), xnew.data() + n);
            double res_full = residual(full, ctx);
            double maxdv = 0.0;
            for (int i = 0; i < nn_; ++i)
                maxdv = std::max(maxdv, std::abs(xnew[i] - x[static_cast<size_t>(i)]));
            if (res_full <= res_cur || maxdv <= opts_.damping) {
                x = std::move(full);
                res_cur = res_full;
            } else {
                for (int i = 0; i < n; ++i) {
                    double dx = xnew[i] - x[static_cast<size_t>(i)];
                    if (i < nn_) dx = std::clamp(dx, -opts_.damping, opts_.damping);
                    x[static_cast<size_t>(i)] += dx;
                }
                res_cur = residual(x, ctx);
            }
            if (maxdv > opts_.vtol) ++out.iterations;
            out.residual = res_cur;
            if (maxdv <= opts_.vtol && out.residual <= opts_.abstol) {
                out.converged = true;
                if (out.iterations == 0) out.iterations = 1;
                return out;
            }
        }
        return out;
    }

    // Plain Newton, then a gmin ladder, then source stepping.
    NewtonOutcome solve_op(std::vector<double>& x, double time, bool hold_ic) const
    {
        Ctx ctx;
        ctx.time = time;
        ctx.gmin = opts_.gmin;
        ctx.hold_ic_caps = hold_ic;

        std::vector<double> work = x;
        NewtonOutcome out = newton(work, ctx);
        if (out.converged) {
            x = work;
            return out;
        }
        if (opts_.gmin_stepping) {
            std::vector<double> gx;
            bool ladder_ok = true;
            for (double g = 1e-3; g >= opts_.gmin * 0.999; g /= 10.0) {
                Ctx gctx = ctx;
                gctx.gmin = g;
                NewtonOutcome step = newton(gx, gctx);
                if (!step.converged) {
                    ladder_ok = false;
                    break;
                }
            }
            if (ladder_ok) {
                NewtonOutcome fin = newton(gx, ctx);
                if (fin.converged) {
                    x = gx;
                    return fin;
                }
            }
        }
        if (opts_.source_stepping) {
            std::vector<double> sx;
            bool ramp_ok = true;
            NewtonOutcome last;
            for (int k = 1; k <= opts_.source_steps; ++k) {
                Ctx sctx = ctx;
                sctx.scale = static_cast<double>(k) / opts_.source_steps;
                last = newton(sx, sctx);
                if (!last.converged) {
                    ramp_ok = false;
                    break;
                }
            }
            if (ramp_ok) {
                x = sx;
                return last;
            }
        }
        return out; // carries the last plain-Newton residual
    }

    size_t ic_cap_count() const
    {
        size_t n = 0;
        for (const CCap& c : caps_)
            if (c.ic) ++n;
        return n;
    }

    void set_override(std::string_view name, double value)
    {
        for (CSrc& s : vsrc_)
            if (s.name == name) s.override_value = value;
        for (CSrc& s : isrc_)
            if (s.name == name) s.override_value = value;
    }

    // --- result packaging -------------------------------------------------

    OperatingPoint make_op(const std::vector<double>& x, const NewtonOutcome& o,
                           const Ctx& ctx) const
    {
        OperatingPoint op;
        for (int i = 1; i <= nn_; ++i)
            op.node_voltages.emplace_back(table_[static_cast<size_t>(i)].first,
                                          x[static_cast<size_t>(i) - 1]);
        for (int k = 0; k < nv_; ++k)
            op.source_currents.emplace_back(vsrc_[static_cast<size_t>(k)].name,
                                            x[static_cast<size_t>(nn_ + k)]);
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            MosEval e = mos_dc_params(m.p, vgs, vds, vbs, ctx.gmin);
            op.device_currents.emplace_back(m.name, e.id);
        }
        op.converged = o.converged;
        op.iterations = o.iterations;
        op.residual = o.residual;
        op.raw.assign(x.begin(), x.begin() + unknowns());
        return op;
    }

    std::vector<std::string> signal_names() const
    {
        std::vector<std::string> names;
        for (int i = 1; i <= nn_; ++i)
            names.push_back("V(" + table_[static_cast<size_t>(i)].first + ")");
        for (const CSrc& s : vsrc_) names.push_back("I(" + s.name + ")");
        for (const CSrc& s : isrc_) names.push_back("I(" + s.name + ")");
        for (const CMos& m : mos_) names.push_back("ID(" + m.name + ")");
        return names;
    }

    void record(const std::vector<double>& x, const Ctx& ctx, Waveform& w, double axis) const
    {
        w.axis.push_back(axis);
        size_t col = 0;
        for (int i = 0; i < nn_; ++i) w.samples[col++].push_back(x[static_cast<size_t>(i)]);
        for (int k = 0; k < nv_; ++k)
            w.samples[col++].push_back(x[static_cast<size_t>(nn_ + k)]);
        for (const CSrc& s : isrc_) w.samples[col++].push_back(source_value(s, ctx));
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            w.samples[col++].push_back(mos_dc_params(m.p, vgs, vds, vbs, ctx.gmin).id);
        }
    }

    double delivered_power(const std::vector<double>& x, const Ctx& ctx) const
    {
        double p = 0.0;
        for (int k = 0; k < nv_; ++k)
            p -= source_value(vsrc_[static_cast<size_t>(k)], ctx) *
                 x[static_cast<size_t>(nn_ + k)];
        return p;
    }

    // --- transient helpers --------------------------------------------------

    std::vector<Dyn> init_dynamic(const std::vector<double>& x) const
    {
        std::vector<Dyn> dyn;
        size_t ic_branch = static_cast<size_t>(unknowns());
        for (const CCap& c : caps_) {
            Dyn d{c.pos, c.neg, c.farads, nodev(x, c.pos) - nodev(x, c.neg), 0.0};
            if (c.ic && x.size() > ic_branch) d.i_prev = x[ic_branch++];
            dyn.push_back(d);
        }
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            MosEval e = mos_dc_params(m.p, vgs, vds, vbs, opts_.gmin);
            dyn.push_back({m.g, m.s, e.cgs, vgs, 0.0});
            dyn.push_back({m.g, m.d, e.cgd, vgs - vds, 0.0});
            dyn.push_back({m.g, m.b, e.cgb, vgs - vbs, 0.0});
        }
        return dyn;
    }

    void commit_step(const std::vector<double>& x, std::vector<Dyn>& dyn, double dt) const
    {
        for (Dyn& d : dyn) {
            double v = nodev(x, d.pos) - nodev(x, d.neg);
            double geq = 2.0 * d.c / dt;
            double i = geq * (v - d.v_prev) - d.i_prev;
            d.v_prev = v;
            d.i_prev = i;
        }
        // Refresh Meyer capacitances for the next step.
        size_t k = caps_.size();
        for (const CMos& m : mos_) {
            double vgs = nodev(x, m.g) - nodev(x, m.s);
            double vds = nodev(x, m.d) - nodev(x, m.s);
            double vbs = nodev(x, m.b) - nodev(x, m.s);
            MosEval e = mos_dc_params(m.p, vgs, vds, vbs, opts_.gmin);
            dyn[k++].c = e.cgs;
            dyn[k++].c = e.cgd;
            dyn[k++].c = e.cgb;
        }
    }

    // One trapezoidal interval [t, t+dt], recursively halved on Newton
    // failure up to opts_.max_step_halvings.
    void advance(std::vector<double>& x, std::vector<Dyn>& dyn, double t, double dt,
                 int depth) const
    {
        Ctx ctx;
        ctx.time = t + dt;
        ctx.gmin = opts_.gmin;
        ctx.dyn = &dyn;
        ctx.dt = dt;
        std::vector<double> trial = x;
        NewtonOutcome o = newton(trial, ctx);
        if (o.converged) {
            commit_step(trial, dyn, dt);
            x = trial;
            return;
        }
        if (depth >= opts_.max_step_halvings)
            throw SimulationError("transient Newton failure at t=" + std::to_string(t + dt) +
                                  " s (residual " + std::to_string(o.residual) + " A)");
        advance(x, dyn, t, dt / 2.0, depth + 1);
        advance(x, dyn, t + dt / 2.0, dt / 2.0, depth + 1);
    }

    const EngineOptions opts_;
    int nn_ = 0;
    int nv_ = 0;
    std::vector<std::pair<std::string, int>> table_;
    std::map<std::string, int> index_;
    std::vector<CMos> mos_;
    std::vector<CRes> res_;
    std::vector<CCap> caps_;
    std::vector<CSrc> vsrc_;
    std::vector<CSrc> isrc_;
};

Waveform make_waveform(const Sim& sim, double temp)
{
    Waveform w;
    w.temperature = temp;
    w.names = sim.signal_names();
    w.samples.assign(w.names.size(), {});
    return w;
}

} // namespace

double OperatingPoint::voltage(std::string_view node) const
{
    if (node == "0") return 0.0;
    for (const auto& [n, v] : node_voltages)
        if (n == node) return v;
    throw SimulationError("no node named '" + std::string(node) + "'");
}

double OperatingPoint::source_current(std::string_view name) const
{
    for (const auto& [n, v] : source_currents)
        if (n == name) return v;
    throw SimulationError("no voltage source named '" + std::string(name) + "'");
}

double OperatingPoint::device_current(std::string_view name) const
{
    for (const auto& [n, v] : device_currents)
        if (n == name) return v;
    throw SimulationError("no MOSFET named '" + std::string(name) + "'");
}

bool Waveform::has(std::string_view name) const
{
    for (const auto& n : names)
        if (n == name) return true;
    return false;
}

const std::vector<double>& Waveform::signal(std::string_view name) const
{
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return samples[i];
    throw SimulationError("no signal named '" + std::string(name) + "'");
}

OperatingPoint solve_dc(const NetlistDocument& doc, double temp, const EngineOptions& opts,
                        const OperatingPoint* guess)
{
    Sim sim(doc, temp, opts);
    std::vector<double> x;
    if (guess && static_cast<int>(guess->raw.size()) == sim.unknowns()) x = guess->raw;
    Sim::NewtonOutcome o = sim.solve_op(x, 0.0, /*hold_ic=*/false);
    if (!o.converged)
        throw SimulationError("DC operating point did not converge (last residual " +
                              std::to_string(o.residual) + " A)");
    Sim::Ctx ctx;
    ctx.gmin = opts.gmin;
    return sim.make_op(x, o, ctx);
}

Waveform run_transient(const NetlistDocument& doc, double tstep, double tstop, double temp,
                       const EngineOptions& opts)
{
    if (tstep <= 0.0 || tstop < tstep)
        throw SimulationError("invalid transient interval");
    Sim sim(doc, temp, opts);

    std::vector<double> x;
    Sim::NewtonOutcome o = sim.solve_op(x, 0.0, /*hold_ic=*/true);
    if (!o.converged)
        throw SimulationError("transient initial operating point did not converge (residual " +
                              std::to_string(o.residual) + " A)");
    std::vector<Dyn> dyn = sim.init_dynamic(x);
    x.resize(static_cast<size_t>(sim.unknowns()));

    Waveform w = make_waveform(sim, temp);
    w.analysis = "tran step=" + std::to_string(tstep) + " stop=" + std::to_string(tstop);

    Sim::Ctx rctx;
    rctx.gmin = opts.gmin;
    rctx.time = 0.0;
    sim.record(x, rctx, w, 0.0);
    double power = sim.delivered_power(x, rctx);

    long steps = static_cast<long>(std::floor(tstop / tstep + 1e-9));
    for (long k = 1; k <= steps; ++k) {
        double t0 = (k - 1) * tstep;
        sim.advance(x, dyn, t0, tstep, 0);
        rctx.time = k * tstep;
        sim.record(x, rctx, w, k * tstep);
        power += sim.delivered_power(x, rctx);
    }
    w.avg_supply_power = power / static_cast<double>(steps + 1);
    return w;
}

Waveform run_dc_sweep(const NetlistDocument& doc, std::string_view source, double start,
                      double stop, double step, double temp, const EngineOptions& opts)
{
    Sim sim(doc, temp, opts);

    bool found = false;
    for (const Element& e : doc.elements) {
        if (element_name(e) == source &&
            (std::holds_alternative<VSource>(e) || std::holds_alternative<ISource>(e)))
            found = true;
    }
    if (!found)
        throw SimulationError("no source named '" + std::string(source) + "' to sweep");

    Waveform w = make_waveform(sim, temp);
    w.analysis = "dc sweep " + std::string(source);

    std::vector<double> points;
    if (start == stop) {
        points.push_back(start);
    } else {
        double dir = stop > start ? 1.0 : -1.0;
        double h = std::abs(step);
        if (h <= 0.0) throw SimulationError("sweep step must be nonzero");
        long count = static_cast<long>(std::floor((stop - start) / (dir * h) + 1e-9));
        for (long k = 0; k <= count; ++k) points.push_back(start + dir * h * k);
    }

    std::vector<double> x;
    bool first = true;
    for (double value : points) {
        sim.set_override(source, value);
        Sim::NewtonOutcome o;
        if (first) {
            o = sim.solve_op(x, 0.0, false);
        } else {
            Sim::Ctx ctx;
            ctx.gmin = opts.gmin;
            o = sim.newton(x, ctx);
            if (!o.converged) o = sim.solve_op(x, 0.0, false);
        }
        if (!o.converged)
            throw SimulationError("DC sweep did not converge at " + std::string(source) + "=" +
                                  std::to_string(value) + " (residual " +
                                  std::to_string(o.residual) + " A)");
        Sim::Ctx rctx;
        rctx.gmin = opts.gmin;
        sim.record(x, rctx, w, value);
        first = false;
    }
    return w;
}

MnaSystem stamp_dc(const NetlistDocument& doc, const std::vector<double>& trial, double temp,
                   const EngineOptions& opts)
{
    Sim sim(doc, temp, opts);
    std::vector<double> x = trial;
    x.resize(static_cast<size_t>(sim.unknowns()), 0.0);
    Sim::Ctx ctx;
    ctx.gmin = opts.gmin;
    return sim.assemble(x, ctx);
}

MnaSystem stamp_transient(const NetlistDocument& doc, const std::vector<double>& trial, double dt,
                          double temp, const EngineOptions& opts)
{
    Sim sim(doc, temp, opts);
    std::vector<double> x = trial;
    x.resize(static_cast<size_t>(sim.unknowns()), 0.0);
    std::vector<Dyn> dyn = sim.init_dynamic(x);
    Sim::Ctx ctx;
    ctx.gmin = opts.gmin;
    ctx.dyn = &dyn;
    ctx.dt = dt;
    ctx.time = dt;
    return sim.assemble(x, ctx);
}

} // namespace rectsim
