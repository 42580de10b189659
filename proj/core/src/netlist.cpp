#include "rectsim/netlist.hpp"
#include "rectsim/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace rectsim {

namespace {

std::string upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

struct Token {
    std::string text;
    int line;
};

struct Statement {
    std::vector<Token> tokens;
    int line; // physical line the statement started on
};

bool is_identifier_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// Split one physical line into tokens. Whitespace, commas and parentheses
// separate tokens; '=' is emitted as its own token.
std::vector<Token> tokenize_line(std::string_view line, int lineno)
{
    std::vector<Token> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({upper(cur), lineno});
            cur.clear();
        }
    };
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')') {
            flush();
        } else if (c == '=') {
            flush();
            out.push_back({"=", lineno});
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NetlistDocument run()
    {
        collect_statements();
        for (const Statement& st : statements_) parse_statement(st);
        validate();
        return std::move(doc_);
    }

private:
    std::string_view text_;
    std::vector<Statement> statements_;
    NetlistDocument doc_;
    std::vector<int> element_lines_; // parallel to doc_.elements
    bool ended_ = false;

    [[noreturn]] static void fail(const std::string& message, int line)
    {
        throw NetlistError(message + " at line " + std::to_string(line), line);
    }

    void collect_statements()
    {
        int lineno = 0;
        size_t pos = 0;
        bool first = true;
        while (pos <= text_.size()) {
            size_t eol = text_.find('\n', pos);
            std::string_view raw = (eol == std::string_view::npos)
                                       ? text_.substr(pos)
                                       : text_.substr(pos, eol - pos);
            pos = (eol == std::string_view::npos) ? text_.size() + 1 : eol + 1;
            ++lineno;
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
            if (first) {
                doc_.title = std::string(trim(raw));
                first = false;
                continue;
            }
            std::string_view line = trim(raw);
            if (line.empty() || line.front() == '*') continue;
            if (line.front() == '+') {
                if (statements_.empty())
                    fail("continuation line with nothing to continue", lineno);
                auto toks = tokenize_line(line.substr(1), lineno);
                auto& dst = statements_.back().tokens;
                dst.insert(dst.end(), toks.begin(), toks.end());
                continue;
            }
            auto toks = tokenize_line(line, lineno);
            if (toks.empty()) continue;
            // A "NAME = value ..." line continues a preceding .MODEL card even
            // without a '+': model tables are often printed that way.
            if (toks.size() >= 2 && toks[1].text == "=" && !statements_.empty() &&
                statements_.back().tokens.front().text == ".MODEL" &&
                is_identifier_start(toks[0].text.front())) {
                auto& dst = statements_.back().tokens;
                dst.insert(dst.end(), toks.begin(), toks.end());
                continue;
            }
            statements_.push_back({std::move(toks), lineno});
        }
    }

    double number(const Token& t, const char* what) const
    {
        auto v = parse_spice_number(t.text);
        if (!v) fail(std::string("malformed number '") + t.text + "' in " + what, t.line);
        return *v;
    }

    void parse_statement(const Statement& st)
    {
        if (ended_) return;
        const std::string& head = st.tokens.front().text;
        if (head.front() == '.') {
            parse_directive(st);
            return;
        }
        switch (head.front()) {
            case 'M': parse_mosfet(st); break;
            case 'R': parse_resistor(st); break;
            case 'C': parse_capacitor(st); break;
            case 'V': parse_source(st, /*voltage=*/true); break;
            case 'I': parse_source(st, /*voltage=*/false); break;
            default:
                fail(std::string("unsupported element type '") + head.front() + "'", st.line);
        }
        element_lines_.push_back(st.line);
    }

    void expect_count(const Statement& st, size_t n, const char* form)
    {
        if (st.tokens.size() != n)
            fail(std::string("syntax error, expected '") + form + "'", st.line);
    }

    void parse_resistor(const Statement& st)
    {
        expect_count(st, 4, "Rname n+ n- value");
        Resistor r;
        r.name = st.tokens[0].text;
        r.pos = st.tokens[1].text;
        r.neg = st.tokens[2].text;
        r.ohms = number(st.tokens[3], "resistor value");
        if (r.ohms <= 0) fail("resistance must be positive", st.line);
        doc_.elements.emplace_back(std::move(r));
    }

    void parse_capacitor(const Statement& st)
    {
        if (st.tokens.size() != 4 && st.tokens.size() != 7)
            fail("syntax error, expected 'Cname n+ n- value [IC=v]'", st.line);
        Capacitor c;
        c.name = st.tokens[0].text;
        c.pos = st.tokens[1].text;
        c.neg = st.tokens[2].text;
        c.farads = number(st.tokens[3], "capacitor value");
        if (c.farads <= 0) fail("capacitance must be positive", st.line);
        if (st.tokens.size() == 7) {
            if (st.tokens[4].text != "IC" || st.tokens[5].text != "=")
                fail("syntax error, expected IC=<volts>", st.line);
            c.initial_volts = number(st.tokens[6], "capacitor initial condition");
        }
        doc_.elements.emplace_back(std::move(c));
    }

    Stimulus parse_stimulus(const Statement& st, size_t from) const
    {
        const auto& t = st.tokens;
        if (from >= t.size()) fail("missing source value", st.line);
        const std::string& kind = t[from].text;
        auto arg = [&](size_t i, const char* what) { return number(t[from + i], what); };
        size_t argc = t.size() - from - 1;

        if (kind == "DC") {
            if (argc != 1) fail("syntax error, expected DC <value>", st.line);
            return DcStim{arg(1, "DC value")};
        }
        if (kind == "SIN") {
            if (argc < 3 || argc > 5)
                fail("syntax error, expected SIN(offset amplitude freq [delay [damping]])", st.line);
            SinStim s;
            s.offset = arg(1, "SIN offset");
            s.amplitude = arg(2, "SIN amplitude");
            s.frequency = arg(3, "SIN frequency");
            if (argc >= 4) s.delay = arg(4, "SIN delay");
            if (argc >= 5) s.damping = arg(5, "SIN damping");
            if (s.frequency <= 0) fail("SIN frequency must be positive", st.line);
            return s;
        }
        if (kind == "PULSE") {
            if (argc < 2 || argc > 7)
                fail("syntax error, expected PULSE(v1 v2 [delay rise fall width period])", st.line);
            PulseStim p;
            p.v1 = arg(1, "PULSE v1");
            p.v2 = arg(2, "PULSE v2");
            if (argc >= 3) p.delay = arg(3, "PULSE delay");
            if (argc >= 4) p.rise = arg(4, "PULSE rise");
            if (argc >= 5) p.fall = arg(5, "PULSE fall");
            if (argc >= 6) p.width = arg(6, "PULSE width");
            if (argc >= 7) p.period = arg(7, "PULSE period");
            return p;
        }
        if (kind == "PWL") {
            if (argc < 2 || argc % 2 != 0)
                fail("syntax error, expected PWL(t1 v1 t2 v2 ...)", st.line);
            PwlStim p;
            for (size_t i = 1; i + 1 <= argc; i += 2)
                p.points.emplace_back(arg(i, "PWL time"), arg(i + 1, "PWL value"));
            for (size_t i = 1; i < p.points.size(); ++i)
                if (p.points[i].first <= p.points[i - 1].first)
                    fail("PWL times must be strictly increasing", st.line);
            return p;
        }
        // Bare value means DC.
        if (argc != 0) fail(std::string("syntax error near '") + kind + "'", st.line);
        auto v = parse_spice_number(kind);
        if (!v) fail(std::string("malformed number '") + kind + "' in source value", st.line);
        return DcStim{*v};
    }

    void parse_source(const Statement& st, bool voltage)
    {
        if (st.tokens.size() < 4) fail("syntax error, expected name n+ n- value", st.line);
        Stimulus stim = parse_stimulus(st, 3);
        if (voltage) {
            VSource v{st.tokens[0].text, st.tokens[1].text, st.tokens[2].text, stim};
            doc_.elements.emplace_back(std::move(v));
        } else {
            ISource i{st.tokens[0].text, st.tokens[1].text, st.tokens[2].text, stim};
            doc_.elements.emplace_back(std::move(i));
        }
    }

    void parse_mosfet(const Statement& st)
    {
        // Mname d g s b model W=<val> L=<val>  (W/L in either order)
        if (st.tokens.size() != 12)
            fail("syntax error, expected 'Mname d g s b model W=<w> L=<l>'", st.line);
        Mosfet m;
        m.name = st.tokens[0].text;
        m.drain = st.tokens[1].text;
        m.gate = st.tokens[2].text;
        m.source = st.tokens[3].text;
        m.bulk = st.tokens[4].text;
        m.model = st.tokens[5].text;
        bool have_w = false, have_l = false;
        for (size_t i = 6; i + 2 < st.tokens.size() + 1; i += 3) {
            const std::string& key = st.tokens[i].text;
            if (st.tokens[i + 1].text != "=")
                fail("syntax error in MOSFET parameters, expected KEY=value", st.line);
            double v = number(st.tokens[i + 2], "MOSFET parameter");
            if (key == "W") { m.w = v; have_w = true; }
            else if (key == "L") { m.l = v; have_l = true; }
            else fail(std::string("unknown MOSFET parameter '") + key + "'", st.line);
        }
        if (!have_w || !have_l) fail("MOSFET requires both W= and L=", st.line);
        if (m.w <= 0 || m.l <= 0) fail("MOSFET W and L must be positive", st.line);
        doc_.elements.emplace_back(std::move(m));
    }

    void parse_directive(const Statement& st)
    {
        const std::string& head = st.tokens.front().text;
        if (head == ".END") { ended_ = true; return; }
        if (head == ".MODEL") { parse_model(st); return; }
        if (head == ".TRAN") {
            if (st.tokens.size() < 3 || st.tokens.size() > 4)
                fail("syntax error, expected '.TRAN step stop [maxstep]'", st.line);
            TranAnalysis a;
            a.step = number(st.tokens[1], ".TRAN step");
            a.stop = number(st.tokens[2], ".TRAN stop");
            if (st.tokens.size() == 4) a.max_step = number(st.tokens[3], ".TRAN maxstep");
            if (a.step <= 0) fail(".TRAN step must be positive", st.line);
            if (a.stop <= 0) fail(".TRAN stop must be positive", st.line);
            doc_.analyses.emplace_back(a);
            return;
        }
        if (head == ".DC") {
            if (st.tokens.size() != 5)
                fail("syntax error, expected '.DC source start stop step'", st.line);
            DcSweepAnalysis a;
            a.source = st.tokens[1].text;
            a.start = number(st.tokens[2], ".DC start");
            a.stop = number(st.tokens[3], ".DC stop");
            a.step = number(st.tokens[4], ".DC step");
            if (a.step <= 0) fail(".DC step must be positive", st.line);
            if (a.stop <= a.start) fail(".DC stop must exceed start", st.line);
            if ((a.stop - a.start) / a.step < 1.0)
                fail(".DC sweep must cover at least 2 points", st.line);
            doc_.analyses.emplace_back(a);
            return;
        }
        if (head == ".OP") {
            doc_.analyses.emplace_back(OpAnalysis{});
            return;
        }
        if (head == ".TEMP") {
            if (st.tokens.size() < 2) fail("syntax error, expected '.TEMP t1 [t2 ...]'", st.line);
            for (size_t i = 1; i < st.tokens.size(); ++i)
                doc_.temperatures.push_back(number(st.tokens[i], ".TEMP value"));
            return;
        }
        fail(std::string("unknown directive '") + head + "'", st.line);
    }

    void parse_model(const Statement& st)
    {
        if (st.tokens.size() < 3)
            fail("syntax error, expected '.MODEL name NMOS|PMOS [params]'", st.line);
        ModelCard card;
        card.name = st.tokens[1].text;
        const std::string& pol = st.tokens[2].text;
        if (pol == "NMOS") card.polarity = Polarity::Nmos;
        else if (pol == "PMOS") card.polarity = Polarity::Pmos;
        else fail(std::string("unsupported model type '") + pol + "'", st.line);
        size_t i = 3;
        while (i < st.tokens.size()) {
            if (st.tokens.size() - i < 3) fail("dangling model parameter", st.line);
            const std::string& key = st.tokens[i].text;
            if (st.tokens[i + 1].text != "=")
                fail("syntax error in model parameters, expected NAME = value", st.line);
            double v = number(st.tokens[i + 2], "model parameter");
            if (card.find(key)) fail(std::string("duplicate model parameter '") + key + "'", st.line);
            card.params.emplace_back(key, v);
            i += 3;
        }
        for (const ModelCard& existing : doc_.models)
            if (existing.name == card.name)
                fail(std::string("duplicate model name '") + card.name + "'", st.line);
        doc_.models.push_back(std::move(card));
    }

    void validate()
    {
        std::set<std::string> names;
        for (size_t i = 0; i < doc_.elements.size(); ++i) {
            std::string name(element_name(doc_.elements[i]));
            if (!names.insert(name).second)
                fail(std::string("duplicate element name '") + name + "'", element_lines_[i]);
            if (const auto* m = std::get_if<Mosfet>(&doc_.elements[i])) {
                if (!doc_.find_model(m->model))
                    fail(std::string("unresolved model name '") + m->model + "' for element '" +
                             m->name + "'",
                         element_lines_[i]);
            }
        }
        for (const ModelCard& card : doc_.models) {
            auto warn = [&](const std::string& msg) {
                doc_.warnings.push_back("model " + card.name + ": " + msg);
            };
            if (card.get("PHI", 0.7) <= 0) warn("PHI should be positive");
            if (card.get("KP", 2e-5) <= 0) warn("KP should be positive");
            auto vto = card.find("VTO");
            if (vto) {
                if (card.polarity == Polarity::Pmos && *vto > 0)
                    warn("PMOS VTO is positive");
                if (card.polarity == Polarity::Nmos && *vto < 0)
                    warn("NMOS VTO is negative");
            }
        }
    }
};

} // namespace

std::optional<double> ModelCard::find(std::string_view key) const
{
    for (const auto& [k, v] : params)
        if (k == key) return v;
    return std::nullopt;
}

double ModelCard::get(std::string_view key, double fallback) const
{
    auto v = find(key);
    return v ? *v : fallback;
}

void ModelCard::set(std::string_view key, double value)
{
    for (auto& [k, v] : params)
        if (k == key) {
            v = value;
            return;
        }
    params.emplace_back(std::string(key), value);
}

std::string_view element_name(const Element& e)
{
    return std::visit([](const auto& x) -> std::string_view { return x.name; }, e);
}

const ModelCard* NetlistDocument::find_model(std::string_view name) const
{
    for (const ModelCard& m : models)
        if (m.name == name) return &m;
    return nullptr;
}

Element* NetlistDocument::find_element(std::string_view name)
{
    for (Element& e : elements)
        if (element_name(e) == name) return &e;
    return nullptr;
}

const Element* NetlistDocument::find_element(std::string_view name) const
{
    for (const Element& e : elements)
        if (element_name(e) == name) return &e;
    return nullptr;
}

NetlistDocument parse(std::string_view text)
{
    return Parser(text).run();
}

namespace {

std::string stim_text(const Stimulus& s)
{
    struct V {
        std::string operator()(const DcStim& d) const { return "DC " + format_number(d.value); }
        std::string operator()(const SinStim& x) const
        {
            return "SIN(" + format_number(x.offset) + " " + format_number(x.amplitude) + " " +
                   format_number(x.frequency) + " " + format_number(x.delay) + " " +
                   format_number(x.damping) + ")";
        }
        std::string operator()(const PulseStim& x) const
        {
            return "PULSE(" + format_number(x.v1) + " " + format_number(x.v2) + " " +
                   format_number(x.delay) + " " + format_number(x.rise) + " " +
                   format_number(x.fall) + " " + format_number(x.width) + " " +
                   format_number(x.period) + ")";
        }
        std::string operator()(const PwlStim& x) const
        {
            std::string out = "PWL(";
            for (size_t i = 0; i < x.points.size(); ++i) {
                if (i) out += " ";
                out += format_number(x.points[i].first) + " " + format_number(x.points[i].second);
            }
            return out + ")";
        }
    };
    return std::visit(V{}, s);
}

} // namespace

std::string serialize(const NetlistDocument& doc)
{
    std::string out = doc.title + "\n";
    for (const Element& e : doc.elements) {
        struct V {
            std::string operator()(const Mosfet& m) const
            {
                return m.name + " " + m.drain + " " + m.gate + " " + m.source + " " + m.bulk +
                       " " + m.model + " W=" + format_number(m.w) + " L=" + format_number(m.l);
            }
            std::string operator()(const Resistor& r) const
            {
                return r.name + " " + r.pos + " " + r.neg + " " + format_number(r.ohms);
            }
            std::string operator()(const Capacitor& c) const
            {
                std::string line =
                    c.name + " " + c.pos + " " + c.neg + " " + format_number(c.farads);
                if (c.initial_volts) line += " IC=" + format_number(*c.initial_volts);
                return line;
            }
            std::string operator()(const VSource& v) const
            {
                return v.name + " " + v.pos + " " + v.neg + " " + stim_text(v.stim);
            }
            std::string operator()(const ISource& i) const
            {
                return i.name + " " + i.pos + " " + i.neg + " " + stim_text(i.stim);
            }
        };
        out += std::visit(V{}, e) + "\n";
    }
    for (const ModelCard& m : doc.models) {
        std::string line = ".MODEL " + m.name + " " +
                           (m.polarity == Polarity::Nmos ? "NMOS" : "PMOS");
        for (const auto& [k, v] : m.params) line += " " + k + "=" + format_number(v);
        out += line + "\n";
    }
    for (const AnalysisDirective& a : doc.analyses) {
        struct V {
            std::string operator()(const TranAnalysis& t) const
            {
                std::string line = ".TRAN " + format_number(t.step) + " " + format_number(t.stop);
                if (t.max_step) line += " " + format_number(*t.max_step);
                return line;
            }
            std::string operator()(const DcSweepAnalysis& d) const
            {
                return ".DC " + d.source + " " + format_number(d.start) + " " +
                       format_number(d.stop) + " " + format_number(d.step);
            }
            std::string operator()(const OpAnalysis&) const { return ".OP"; }
        };
        out += std::visit(V{}, a) + "\n";
    }
    if (!doc.temperatures.empty()) {
        std::string line = ".TEMP";
        for (double t : doc.temperatures) line += " " + format_number(t);
        out += line + "\n";
    }
    out += ".END\n";
    return out;
}

std::vector<std::pair<std::string, int>> node_table(const NetlistDocument& doc)
{
    std::vector<std::pair<std::string, int>> table;
    std::map<std::string, int> index;
    bool has_ground = false;
    auto add = [&](const std::string& node) {
        if (node == "0") {
            has_ground = true;
            return;
        }
        if (index.emplace(node, 0).second) table.emplace_back(node, 0);
    };
    for (const Element& e : doc.elements) {
        struct Visitor {
            decltype(add)& fn;
            void operator()(const Mosfet& m) const { fn(m.drain); fn(m.gate); fn(m.source); fn(m.bulk); }
            void operator()(const Resistor& r) const { fn(r.pos); fn(r.neg); }
            void operator()(const Capacitor& c) const { fn(c.pos); fn(c.neg); }
            void operator()(const VSource& v) const { fn(v.pos); fn(v.neg); }
            void operator()(const ISource& i) const { fn(i.pos); fn(i.neg); }
        };
        std::visit(Visitor{add}, e);
    }
    if (!has_ground) throw NetlistError("no ground node");
    std::vector<std::pair<std::string, int>> out;
    out.reserve(table.size() + 1);
    out.emplace_back("0", 0);
    int next = 1;
    for (auto& [name, _] : table) out.emplace_back(name, next++);
    return out;
}

void set_stimulus(NetlistDocument& doc, std::string_view source, const Stimulus& stim)
{
    Element* e = doc.find_element(source);
    if (!e) throw NetlistError("no source named '" + std::string(source) + "'");
    if (auto* v = std::get_if<VSource>(e)) {
        v->stim = stim;
        return;
    }
    if (auto* i = std::get_if<ISource>(e)) {
        i->stim = stim;
        return;
    }
    throw NetlistError("element '" + std::string(source) + "' is not a source");
}

} // namespace rectsim
