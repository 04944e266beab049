#include "pipedrive/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pipedrive/analytic.hpp"
#include "pipedrive/compare.hpp"
#include "pipedrive/fd_solver.hpp"

namespace pipedrive {

namespace {

constexpr const char* tool_version = "1.0.0";

enum class Dim { Length, Pressure, Force, Time, Density, Frequency, None, Word };

struct KeyInfo {
    std::string_view section;
    std::string_view key;
    Dim dim;
    bool list;
};

constexpr KeyInfo known_keys[] = {
    {"pipe", "R", Dim::Length, false},          {"pipe", "h", Dim::Length, false},
    {"pipe", "L", Dim::Length, false},          {"pipe", "L1", Dim::Length, false},
    {"pipe", "E", Dim::Pressure, false},        {"pipe", "rho", Dim::Density, false},
    {"friction", "tau0", Dim::Pressure, false}, {"friction", "active", Dim::Length, true},
    {"pulse", "shape", Dim::Word, false},       {"pulse", "P0", Dim::Force, false},
    {"pulse", "sigma0", Dim::Pressure, false},  {"pulse", "t0", Dim::Time, false},
    {"pulse", "omega", Dim::Frequency, false},  {"pulse", "samples", Dim::None, true},
    {"grid", "hz", Dim::Length, false},         {"grid", "courant", Dim::None, false},
    {"grid", "ht", Dim::Time, false},           {"grid", "t_end", Dim::Time, false},
    {"grid", "guard", Dim::Length, false},      {"output", "snapshots", Dim::Time, true},
    {"output", "probes", Dim::Length, true},    {"sweep", "param", Dim::Word, false},
    {"sweep", "values", Dim::None, true},       {"sweep", "metric", Dim::Word, false},
    {"sweep", "probe", Dim::Length, false},     {"sweep", "abscissa", Dim::Word, false},
    {"sweep", "fit", Dim::Word, false},         {"sweep", "exposed", Dim::Length, false},
};

struct SweepParam {
    std::string_view name;
    Dim dim;
};

constexpr SweepParam sweep_params[] = {
    {"R", Dim::Length},     {"h", Dim::Length},  {"L", Dim::Length},      {"L1", Dim::Length},
    {"E", Dim::Pressure},   {"rho", Dim::Density}, {"tau0", Dim::Pressure}, {"Ftp", Dim::Force},
    {"P0", Dim::Force},     {"t0", Dim::Time},   {"omega", Dim::Frequency},
};

std::optional<Dim> sweep_dim(std::string_view name)
{
    for (const auto& p : sweep_params)
        if (p.name == name) return p.dim;
    return std::nullopt;
}

std::optional<double> unit_factor(Dim dim, std::string_view u)
{
    struct U {
        Dim dim;
        std::string_view name;
        double factor;
    };
    static constexpr U table[] = {
        {Dim::Length, "m", 1.0},          {Dim::Length, "mm", 1e-3},
        {Dim::Length, "cm", 1e-2},        {Dim::Length, "km", 1e3},
        {Dim::Pressure, "Pa", 1.0},       {Dim::Pressure, "kPa", 1e3},
        {Dim::Pressure, "MPa", 1e6},      {Dim::Pressure, "GPa", 1e9},
        {Dim::Force, "N", 1.0},           {Dim::Force, "kN", 1e3},
        {Dim::Force, "MN", 1e6},          {Dim::Time, "s", 1.0},
        {Dim::Time, "ms", 1e-3},          {Dim::Time, "us", 1e-6},
        {Dim::Density, "kg/m3", 1.0},     {Dim::Density, "kg/m^3", 1.0},
        {Dim::Frequency, "rad/s", 1.0},   {Dim::Frequency, "1/s", 1.0},
        {Dim::Frequency, "rad/ms", 1e3},  {Dim::Frequency, "1/ms", 1e3},
    };
    if (u.empty()) return 1.0;
    for (const auto& e : table)
        if (e.dim == dim && e.name == u) return e.factor;
    return std::nullopt;
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_number(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

struct Entry {
    int line = 0;
    std::string value;
};

using Entries = std::map<std::string, Entry>;

std::vector<double> numbers(const Entry& e, Dim dim)
{
    std::string_view v = trim(e.value);
    std::string_view unit;
    const auto sp = v.find_last_of(" \t");
    if (sp != std::string_view::npos && !to_number(v.substr(sp + 1))) {
        unit = v.substr(sp + 1);
        v = trim(v.substr(0, sp));
    } else if (sp == std::string_view::npos && !to_number(v) && !v.empty()) {
        throw ConfigParseError(e.line, "expected a number, got '" + std::string(v) + "'");
    }
    const auto f = unit_factor(dim, unit);
    if (!f) throw ConfigParseError(e.line, "unit '" + std::string(unit) + "' does not fit this key");
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const std::string_view item = trim(v.substr(0, comma));
        const auto x = to_number(item);
        if (!x) throw ConfigParseError(e.line, "expected a number, got '" + std::string(item) + "'");
        out.push_back(*x * *f);
        if (comma == std::string_view::npos) break;
        v = v.substr(comma + 1);
    }
    if (out.empty()) throw ConfigParseError(e.line, "missing value");
    return out;
}

double number(const Entry& e, Dim dim)
{
    const auto v = numbers(e, dim);
    if (v.size() != 1) throw ConfigParseError(e.line, "expected a single value");
    return v.front();
}

bool flag(const Entry& e)
{
    const auto v = trim(e.value);
    if (v == "on" || v == "true" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "no") return false;
    throw ConfigParseError(e.line, "expected on/off, got '" + std::string(v) + "'");
}

std::string g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g17(v[i]);
    return s;
}

Entries read_entries(std::string_view text)
{
    Entries out;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigParseError(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            const bool known = std::any_of(std::begin(known_keys), std::end(known_keys),
                                           [&](const KeyInfo& k) { return k.section == section; });
            if (!known) throw ConfigParseError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigParseError(line_no, "expected key = value");
        if (section.empty()) throw ConfigParseError(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const bool known = std::any_of(std::begin(known_keys), std::end(known_keys),
                                       [&](const KeyInfo& k) { return k.section == section && k.key == key; });
        if (!known) throw ConfigParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
        const std::string full = section + "." + key;
        if (out.count(full)) throw ConfigParseError(line_no, "duplicate key '" + key + "'");
        out[full] = {line_no, std::string(trim(line.substr(eq + 1)))};
    }
    return out;
}

} // namespace

RunConfig parse_config(std::string_view text)
{
    const Entries entries = read_entries(text);
    std::vector<Diagnostic> missing;
    const auto has = [&](const char* k) { return entries.count(k) > 0; };
    const auto get = [&](const char* k, Dim dim, double& dst, bool required) {
        if (has(k)) dst = number(entries.at(k), dim);
        else if (required) missing.push_back({k, "missing"});
    };

    RunConfig cfg;
    auto& pipe = cfg.problem.pipe;
    get("pipe.R", Dim::Length, pipe.R, true);
    get("pipe.h", Dim::Length, pipe.h, true);
    get("pipe.L", Dim::Length, pipe.L, true);
    pipe.L1 = pipe.L;
    get("pipe.L1", Dim::Length, pipe.L1, false);
    get("pipe.E", Dim::Pressure, pipe.E, true);
    get("pipe.rho", Dim::Density, pipe.rho, true);

    get("friction.tau0", Dim::Pressure, cfg.problem.friction.tau0, false);
    if (has("friction.active")) {
        const auto& e = entries.at("friction.active");
        const auto v = numbers(e, Dim::Length);
        if (v.size() != 2) throw ConfigParseError(e.line, "active interval needs two bounds");
        cfg.problem.friction.active = Interval{v[0], v[1]};
    }

    auto& pulse = cfg.problem.pulse;
    if (has("pulse.shape")) {
        const auto& e = entries.at("pulse.shape");
        const auto s = parse_shape(trim(e.value));
        if (!s) throw ConfigParseError(e.line, "unknown pulse shape '" + e.value + "'");
        pulse.shape = *s;
    } else {
        missing.push_back({"pulse.shape", "missing"});
    }
    get("pulse.P0", Dim::Force, pulse.P0, false);
    if (pulse.finite()) {
        get("pulse.t0", Dim::Time, pulse.t0, true);
        if (pulse.t0 > 0.0) pulse.omega = std::numbers::pi / pulse.t0;
        if (has("pulse.omega"))
            throw ConfigParseError(entries.at("pulse.omega").line,
                                   "omega is fixed by t0 for finite pulses");
    } else {
        get("pulse.omega", Dim::Frequency, pulse.omega, true);
        if (has("pulse.t0"))
            throw ConfigParseError(entries.at("pulse.t0").line, "t0 does not apply to a sine load");
    }
    if (pulse.shape == PulseShape::Custom) {
        if (has("pulse.samples")) pulse.samples = numbers(entries.at("pulse.samples"), Dim::None);
        else missing.push_back({"pulse.samples", "missing"});
    } else if (has("pulse.samples")) {
        throw ConfigParseError(entries.at("pulse.samples").line, "samples apply to custom pulses only");
    }
    if (has("pulse.sigma0")) {
        const auto& e = entries.at("pulse.sigma0");
        if (has("pulse.P0")) throw ConfigParseError(e.line, "give either P0 or sigma0, not both");
        const double sigma0 = number(e, Dim::Pressure);
        pulse.P0 = sigma0 * std::numbers::pi * pipe.h * (2.0 * pipe.R - pipe.h);
    } else if (!has("pulse.P0")) {
        missing.push_back({"pulse.P0", "missing"});
    }

    get("grid.hz", Dim::Length, cfg.grid.h_z, true);
    get("grid.courant", Dim::None, cfg.grid.courant, false);
    get("grid.ht", Dim::Time, cfg.grid.h_t, false);
    if (has("grid.ht") && !(cfg.grid.h_t > 0.0))
        throw ConfigParseError(entries.at("grid.ht").line, "time step must be positive");
    get("grid.t_end", Dim::Time, cfg.grid.t_end, true);
    get("grid.guard", Dim::Length, cfg.grid.guard, false);

    if (has("output.snapshots")) cfg.output.snapshots = numbers(entries.at("output.snapshots"), Dim::Time);
    if (has("output.probes")) cfg.output.probes = numbers(entries.at("output.probes"), Dim::Length);

    const bool any_sweep = std::any_of(entries.begin(), entries.end(),
                                       [](const auto& kv) { return kv.first.rfind("sweep.", 0) == 0; });
    if (any_sweep) {
        SweepSpec sw;
        if (!has("sweep.param")) {
            missing.push_back({"sweep.param", "missing"});
        } else {
            const auto& e = entries.at("sweep.param");
            sw.param = std::string(trim(e.value));
            const auto dim = sweep_dim(sw.param);
            if (!dim) throw ConfigParseError(e.line, "cannot sweep over '" + sw.param + "'");
            if (has("sweep.values")) sw.values = numbers(entries.at("sweep.values"), *dim);
            else missing.push_back({"sweep.values", "missing"});
        }
        if (has("sweep.metric")) {
            const auto& e = entries.at("sweep.metric");
            const auto v = trim(e.value);
            if (v == "final_slip") sw.metric = SweepMetric::FinalSlip;
            else if (v == "displacement") sw.metric = SweepMetric::Displacement;
            else throw ConfigParseError(e.line, "metric must be final_slip or displacement");
        }
        get("sweep.probe", Dim::Length, sw.probe_z, false);
        if (has("sweep.abscissa")) {
            const auto& e = entries.at("sweep.abscissa");
            const auto v = trim(e.value);
            if (v == "value") sw.abscissa = SweepAbscissa::Value;
            else if (v == "friction_force") sw.abscissa = SweepAbscissa::FrictionForce;
            else throw ConfigParseError(e.line, "abscissa must be value or friction_force");
        }
        if (has("sweep.fit")) sw.fit = flag(entries.at("sweep.fit"));
        if (has("sweep.exposed")) sw.exposed = number(entries.at("sweep.exposed"), Dim::Length);
        cfg.sweep = std::move(sw);
    }

    if (!missing.empty()) throw ValidationError(std::move(missing));
    auto diags = validate_run_config(cfg);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg)
{
    const auto& p = cfg.problem;
    std::ostringstream o;
    o << "[pipe]\n"
      << "R = " << g17(p.pipe.R) << " m\n"
      << "h = " << g17(p.pipe.h) << " m\n"
      << "L = " << g17(p.pipe.L) << " m\n"
      << "L1 = " << g17(p.pipe.L1) << " m\n"
      << "E = " << g17(p.pipe.E) << " Pa\n"
      << "rho = " << g17(p.pipe.rho) << " kg/m3\n\n";
    o << "[friction]\n" << "tau0 = " << g17(p.friction.tau0) << " Pa\n";
    if (p.friction.active)
        o << "active = " << g17(p.friction.active->lo) << ", " << g17(p.friction.active->hi) << " m\n";
    o << "\n[pulse]\n" << "shape = " << shape_name(p.pulse.shape) << "\n"
      << "P0 = " << g17(p.pulse.P0) << " N\n";
    if (p.pulse.finite()) o << "t0 = " << g17(p.pulse.t0) << " s\n";
    else o << "omega = " << g17(p.pulse.omega) << " rad/s\n";
    if (p.pulse.shape == PulseShape::Custom) o << "samples = " << join(p.pulse.samples) << "\n";
    o << "\n[grid]\n" << "hz = " << g17(cfg.grid.h_z) << " m\n"
      << "courant = " << g17(cfg.grid.courant) << "\n";
    if (cfg.grid.h_t > 0.0) o << "ht = " << g17(cfg.grid.h_t) << " s\n";
    o << "t_end = " << g17(cfg.grid.t_end) << " s\n"
      << "guard = " << g17(cfg.grid.guard) << " m\n";
    if (!cfg.output.snapshots.empty() || !cfg.output.probes.empty()) {
        o << "\n[output]\n";
        if (!cfg.output.snapshots.empty()) o << "snapshots = " << join(cfg.output.snapshots) << " s\n";
        if (!cfg.output.probes.empty()) o << "probes = " << join(cfg.output.probes) << " m\n";
    }
    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        static constexpr std::string_view si[] = {"m", "Pa", "N", "s", "kg/m3", "rad/s", "", ""};
        const auto dim = sweep_dim(s.param).value_or(Dim::None);
        o << "\n[sweep]\n" << "param = " << s.param << "\n"
          << "values = " << join(s.values) << " " << si[static_cast<int>(dim)] << "\n"
          << "metric = " << (s.metric == SweepMetric::FinalSlip ? "final_slip" : "displacement") << "\n"
          << "probe = " << g17(s.probe_z) << " m\n"
          << "abscissa = " << (s.abscissa == SweepAbscissa::Value ? "value" : "friction_force") << "\n"
          << "fit = " << (s.fit ? "on" : "off") << "\n";
        if (s.exposed) o << "exposed = " << g17(*s.exposed) << " m\n";
    }
    return o.str();
}

RunConfig apply_sweep_value(const RunConfig& cfg, double value)
{
    if (!cfg.sweep) throw std::invalid_argument("configuration has no sweep");
    RunConfig out = cfg;
    out.sweep.reset();
    auto& p = out.problem;
    const std::string& name = cfg.sweep->param;
    if (name == "R") p.pipe.R = value;
    else if (name == "h") p.pipe.h = value;
    else if (name == "L") p.pipe.L = value;
    else if (name == "L1") p.pipe.L1 = value;
    else if (name == "E") p.pipe.E = value;
    else if (name == "rho") p.pipe.rho = value;
    else if (name == "tau0") p.friction.tau0 = value;
    else if (name == "P0") p.pulse.P0 = value;
    else if (name == "t0") {
        p.pulse.t0 = value;
        p.pulse.omega = std::numbers::pi / value;
    } else if (name == "omega") p.pulse.omega = value;
    if (cfg.sweep->exposed) p.pipe.L = p.pipe.L1 + *cfg.sweep->exposed;
    if (name == "Ftp") {
        const double P_t = 2.0 * std::numbers::pi * p.pipe.R;
        p.friction.tau0 = value / (P_t * active_interval(p.pipe, p.friction).length());
    }
    return out;
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg)
{
    std::vector<RunConfig> out;
    if (!cfg.sweep) return {cfg};
    for (double v : cfg.sweep->values) out.push_back(apply_sweep_value(cfg, v));
    return out;
}

std::vector<Diagnostic> validate_run_config(const RunConfig& cfg)
{
    const auto& p = cfg.problem;
    auto d = validate_config(p.pipe, p.friction, p.pulse, cfg.grid);
    for (double t : cfg.output.snapshots)
        if (!(t >= 0.0 && t <= cfg.grid.t_end * (1.0 + 1e-12))) {
            d.push_back({"output.snapshots", "snapshot time outside [0, t_end]"});
            break;
        }
    for (double z : cfg.output.probes)
        if (!(z >= 0.0 && z <= p.pipe.L * (1.0 + 1e-12))) {
            d.push_back({"output.probes", "probe position outside [0, L]"});
            break;
        }
    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        if (!sweep_dim(s.param)) d.push_back({"sweep.param", "unknown sweep parameter"});
        if (s.values.empty()) d.push_back({"sweep.values", "no sweep values"});
        if (s.exposed && !(*s.exposed >= 0.0))
            d.push_back({"sweep.exposed", "exposed length must be non-negative"});
        if (d.empty())
            for (double v : s.values) {
                const RunConfig m = apply_sweep_value(cfg, v);
                auto md = validate_config(m.problem.pipe, m.problem.friction, m.problem.pulse, m.grid);
                if (!(s.probe_z >= 0.0 && s.probe_z <= m.problem.pipe.L))
                    md.push_back({"sweep.probe", "probe position outside [0, L]"});
                for (auto& x : md) {
                    x.message += " (sweep value " + g17(v) + ")";
                    d.push_back(std::move(x));
                }
            }
    }
    return d;
}

std::string to_csv(const ResultTable& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (std::size_t i = 0; i < t.units.size(); ++i) out += (i ? "," : "") + t.units[i];
    out += '\n';
    char buf[32];
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.11e", row[i]);
            if (i) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::optional<Command> parse_command(std::string_view name)
{
    if (name == "simulate") return Command::Simulate;
    if (name == "analytic") return Command::Analytic;
    if (name == "compare") return Command::Compare;
    if (name == "sweep") return Command::Sweep;
    return std::nullopt;
}

namespace {

using Field = std::function<double(double, double)>;

// Analytic counterpart of the simulation tables.
struct Oracle {
    std::string name;
    Field U;
    Field V_profile; // used for fixed-time snapshots
    Field V_history; // used for fixed-section probes
};

Oracle make_oracle(const AnalyticParams& ap, std::string variant, std::vector<std::string>& warnings)
{
    const auto shape = ap.pulse.shape;
    if (variant == "auto") {
        if (shape == PulseShape::ContinuousSine) variant = "corrected";
        else if (shape == PulseShape::Custom) variant = "generic";
        else if (!ap.full_embedment) {
            variant = shape == PulseShape::SemiSine ? "semi-infinite" : "generic";
            warnings.push_back("partial embedment: no reflection formula applies, using " + variant);
        } else variant = shape == PulseShape::SemiSine ? "finite-rod" : "rect";
    }
    Oracle o;
    o.name = variant;
    if (variant == "semi-infinite") {
        o.U = [ap](double z, double t) { return displacement_semi_infinite(ap, z, t); };
        o.V_profile = [ap](double z, double t) { return velocity_semi_infinite_profile(ap, z, t); };
        o.V_history = [ap](double z, double t) { return velocity_semi_infinite(ap, z, t); };
    } else if (variant == "finite-rod") {
        o.U = [ap](double z, double t) { return displacement_finite_rod(ap, z, t); };
        o.V_profile = o.V_history = [ap](double z, double t) { return velocity_finite_rod(ap, z, t); };
    } else if (variant == "rect") {
        o.U = [ap](double z, double t) { return displacement_rect_finite(ap, z, t); };
        o.V_profile = o.V_history = [ap](double z, double t) { return velocity_rect_finite(ap, z, t); };
    } else if (variant == "generic") {
        o.U = [ap](double z, double t) { return displacement_generic_pulse(ap, z, t); };
        o.V_profile = o.V_history = [ap](double z, double t) { return velocity_generic_pulse(ap, z, t); };
    } else {
        HarmonicVariant hv;
        if (variant == "mechanical-analogue") hv = HarmonicVariant::MechanicalAnalogue;
        else if (variant == "complex-amplitudes") hv = HarmonicVariant::ComplexAmplitudes;
        else if (variant == "corrected") hv = HarmonicVariant::Corrected;
        else throw std::invalid_argument("unknown analytic variant '" + variant + "'");
        if (shape != PulseShape::ContinuousSine)
            throw std::invalid_argument("harmonic variants need a continuous sine load");
        o.U = [ap, hv](double z, double t) { return harmonic_solution(ap, z, t, hv); };
        o.V_profile = o.V_history = [ap, hv](double z, double t) { return harmonic_velocity(ap, z, t, hv); };
    }
    return o;
}

nlohmann::json grid_json(const ResolvedGrid& g)
{
    return {{"h_z", g.h_z}, {"h_t", g.h_t}, {"courant", g.courant},
            {"n_z", g.n_z}, {"n_steps", g.n_steps}, {"guard", g.guard}};
}

nlohmann::json base_manifest(Command cmd, const RunConfig& cfg, const CommandOptions& opt)
{
    static constexpr const char* names[] = {"simulate", "analytic", "compare", "sweep"};
    const DerivedProps d = derive_properties(cfg.problem.pipe, cfg.problem.friction);
    const ResolvedGrid g = resolve_grid(cfg.grid, d.c, cfg.problem.pipe.L);
    nlohmann::json m;
    m["tool"] = "pipedrive";
    m["version"] = tool_version;
    m["command"] = names[static_cast<int>(cmd)];
    m["variant"] = opt.variant;
    m["front_exclusion"] = opt.front_exclusion;
    m["units"] = "SI (m, s, N, Pa, kg)";
    m["config"] = serialize_config(cfg);
    m["grid"] = grid_json(g);
    m["courant"] = g.courant;
    m["derived"] = {{"c", d.c}, {"S_t", d.S_t}, {"P_t", d.P_t}, {"a_f", d.a_f}, {"F_tp", d.F_tp}};
    return m;
}

std::vector<double> levels_times(const ResolvedGrid& g)
{
    std::vector<double> t;
    for (long n = 1; n <= g.n_steps; ++n) t.push_back(static_cast<double>(n) * g.h_t);
    return t;
}

nlohmann::json report_json(const ComparisonReport& r)
{
    return {{"l2_rel", r.l2_rel}, {"linf_rel", r.linf_rel}, {"linf_location", r.linf_location},
            {"peak_reference", r.peak_reference}, {"samples", r.samples}};
}

std::optional<ComparisonReport> try_norms(const std::vector<double>& x, const std::vector<double>& a,
                                          const std::vector<double>& b, const std::vector<bool>& keep)
{
    try {
        return error_norms(x, a, b, keep);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void push_report(std::vector<double>& row, const std::optional<ComparisonReport>& r)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.push_back(r ? r->l2_rel : nan);
    row.push_back(r ? r->linf_rel : nan);
    row.push_back(r ? r->linf_location : nan);
    row.push_back(r ? r->peak_reference : nan);
}

} // namespace

CommandOutput execute(Command cmd, const RunConfig& cfg, const CommandOptions& opt)
{
    auto diags = validate_run_config(cfg);
    if (!diags.empty()) throw ValidationError(std::move(diags));

    CommandOutput out;
    out.manifest = base_manifest(cmd, cfg, opt);
    const RunRequest req{cfg.output.snapshots, cfg.output.probes};

    if (cmd == Command::Sweep) {
        if (!cfg.sweep) throw ValidationError(std::vector<Diagnostic>{{"sweep", "sweep command needs a [sweep] section"}});
        const auto& sw = *cfg.sweep;
        ResultTable table{"sweep", {"value", "abscissa", sw.metric == SweepMetric::FinalSlip ? "final_slip" : "displacement"},
                          {"SI", sw.abscissa == SweepAbscissa::FrictionForce ? "N" : "SI", "m"}, {}};
        std::vector<double> xs, ys;
        for (double v : sw.values) {
            const RunConfig member = apply_sweep_value(cfg, v);
            const auto res = run(member.problem, member.grid, {{}, {sw.probe_z}});
            for (const auto& w : res.warnings) out.warnings.push_back(w);
            const auto& series = res.probes.front();
            double metric = 0.0;
            if (sw.metric == SweepMetric::FinalSlip) metric = final_slip(series);
            else metric = series.U.empty() ? res.final_U[series.node] : series.U.back();
            const double x = sw.abscissa == SweepAbscissa::FrictionForce
                                 ? derive_properties(member.problem.pipe, member.problem.friction).F_tp
                                 : v;
            table.rows.push_back({v, x, metric});
            xs.push_back(x);
            ys.push_back(metric);
        }
        out.tables.push_back(std::move(table));
        if (sw.fit) {
            const PowerLawFit f = fit_power_law(xs, ys);
            out.tables.push_back({"fit", {"coeff", "exponent", "r_squared"}, {"SI", "1", "1"},
                                  {{f.coeff, f.exponent, f.r_squared}}});
            out.manifest["fit"] = {{"coeff", f.coeff}, {"exponent", f.exponent}, {"r_squared", f.r_squared}};
        }
        out.manifest["warnings"] = out.warnings;
        return out;
    }

    const Problem& prob = cfg.problem;
    const DerivedProps d = derive_properties(prob.pipe, prob.friction);
    const ResolvedGrid g = resolve_grid(cfg.grid, d.c, prob.pipe.L);

    std::optional<SimulationResult> sim;
    if (cmd == Command::Simulate || cmd == Command::Compare) {
        sim = run(prob, cfg.grid, req);
        out.warnings = sim->warnings;
    }

    std::optional<Oracle> oracle;
    std::vector<double> z(static_cast<std::size_t>(g.n_z + 1));
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = static_cast<double>(j) * g.h_z;
    if (cmd == Command::Analytic || cmd == Command::Compare) {
        oracle = make_oracle(AnalyticParams::from(prob), opt.variant, out.warnings);
        out.manifest["variant"] = oracle->name;
    }

    // Snapshot times and probe nodes follow the solver's snapping rules.
    std::vector<std::pair<double, double>> snaps; // requested, snapped
    for (double t : cfg.output.snapshots) {
        const long lvl = std::clamp(std::lround(t / g.h_t), 0L, g.n_steps);
        snaps.emplace_back(t, static_cast<double>(lvl) * g.h_t);
    }
    std::vector<double> probe_nodes;
    for (double zp : cfg.output.probes)
        probe_nodes.push_back(static_cast<double>(std::clamp(std::lround(zp / g.h_z), 0L, g.n_z)) * g.h_z);
    if (cmd == Command::Analytic)
        for (std::size_t i = 0; i < probe_nodes.size(); ++i)
            if (std::abs(probe_nodes[i] - cfg.output.probes[i]) > 1e-9 * g.h_z)
                out.warnings.push_back("probe z = " + g17(cfg.output.probes[i]) + " m snapped to node z = "
                                       + g17(probe_nodes[i]) + " m");

    const std::vector<double> times = levels_times(g);
    const bool both = cmd == Command::Compare;

    ResultTable snap_t{"snapshots", {"t", "z", "U", "V"}, {"s", "m", "m", "m/s"}, {}};
    ResultTable probe_t{"probes", {"t", "z", "U", "V"}, {"s", "m", "m", "m/s"}, {}};
    if (both) {
        snap_t.columns = {"t", "z", "U_fd", "V_fd", "U_an", "V_an"};
        snap_t.units = {"s", "m", "m", "m/s", "m", "m/s"};
        probe_t.columns = snap_t.columns;
        probe_t.units = snap_t.units;
    }
    ResultTable report{"report",
                       {"t", "V_l2_rel", "V_linf_rel", "V_linf_z", "V_peak", "U_l2_rel", "U_linf_rel", "U_linf_z", "U_peak"},
                       {"s", "1", "1", "m", "m/s", "1", "1", "m", "m"},
                       {}};
    ResultTable probe_report{"probe_report",
                             {"z", "V_l2_rel", "V_linf_rel", "V_linf_t", "V_peak", "U_l2_rel", "U_linf_rel", "U_linf_t", "U_peak"},
                             {"m", "1", "1", "s", "m/s", "1", "1", "s", "m"},
                             {}};

    std::vector<double> jx, jn, ja;
    std::vector<bool> jkeep;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const double t = snaps[i].second;
        std::vector<double> Ua(z.size()), Va(z.size());
        if (oracle)
            for (std::size_t j = 0; j < z.size(); ++j) {
                Ua[j] = oracle->U(z[j], t);
                Va[j] = oracle->V_profile(z[j], t);
            }
        const std::vector<double>* U = oracle ? &Ua : &sim->snapshots[i].U;
        const std::vector<double>* V = oracle ? &Va : &sim->snapshots[i].V;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (both)
                snap_t.rows.push_back({t, z[j], sim->snapshots[i].U[j], sim->snapshots[i].V[j], Ua[j], Va[j]});
            else
                snap_t.rows.push_back({t, z[j], (*U)[j], (*V)[j]});
        }
        if (both) {
            const auto& s = sim->snapshots[i];
            std::vector<bool> keepV(z.size(), true), keepU(z.size(), true);
            if (opt.front_exclusion) {
                keepV = edge_exclusion_mask(z, Va, 2.0 * g.h_z, {d.c * t});
                keepU = edge_exclusion_mask(z, Ua, 2.0 * g.h_z, {d.c * t});
            }
            std::vector<double> row{t};
            push_report(row, try_norms(z, s.V, Va, keepV));
            push_report(row, try_norms(z, s.U, Ua, keepU));
            report.rows.push_back(std::move(row));
            jx.insert(jx.end(), z.begin(), z.end());
            jn.insert(jn.end(), s.V.begin(), s.V.end());
            ja.insert(ja.end(), Va.begin(), Va.end());
            jkeep.insert(jkeep.end(), keepV.begin(), keepV.end());
        }
    }
    if (both && !jx.empty())
        if (const auto r = try_norms(jx, jn, ja, jkeep)) out.manifest["snapshot_velocity_joint"] = report_json(*r);

    for (std::size_t k = 0; k < probe_nodes.size(); ++k) {
        const double zp = probe_nodes[k];
        std::vector<double> Ua(times.size()), Va(times.size());
        if (oracle)
            for (std::size_t n = 0; n < times.size(); ++n) {
                Ua[n] = oracle->U(zp, times[n]);
                Va[n] = oracle->V_history(zp, times[n]);
            }
        for (std::size_t n = 0; n < times.size(); ++n) {
            if (both)
                probe_t.rows.push_back({times[n], zp, sim->probes[k].U[n], sim->probes[k].V[n], Ua[n], Va[n]});
            else if (oracle)
                probe_t.rows.push_back({times[n], zp, Ua[n], Va[n]});
            else
                probe_t.rows.push_back({times[n], zp, sim->probes[k].U[n], sim->probes[k].V[n]});
        }
        if (both && !times.empty()) {
            std::vector<bool> keepV(times.size(), true), keepU(times.size(), true);
            if (opt.front_exclusion) {
                keepV = edge_exclusion_mask(times, Va, 2.0 * g.h_t);
                keepU = edge_exclusion_mask(times, Ua, 2.0 * g.h_t);
            }
            std::vector<double> row{zp};
            push_report(row, try_norms(times, sim->probes[k].V, Va, keepV));
            push_report(row, try_norms(times, sim->probes[k].U, Ua, keepU));
            probe_report.rows.push_back(std::move(row));
        }
    }

    out.tables.push_back(std::move(snap_t));
    out.tables.push_back(std::move(probe_t));
    if (sim) {
        ResultTable fin{"final_profile", {"z", "U"}, {"m", "m"}, {}};
        for (std::size_t j = 0; j < z.size(); ++j) fin.rows.push_back({z[j], sim->final_U[j]});
        out.tables.push_back(std::move(fin));
        ResultTable peak{"peak_speed", {"t", "V_max"}, {"s", "m/s"}, {}};
        for (std::size_t n = 0; n < sim->peak_t.size(); ++n) peak.rows.push_back({sim->peak_t[n], sim->peak_speed[n]});
        out.tables.push_back(std::move(peak));
    }
    if (both) {
        out.tables.push_back(std::move(report));
        out.tables.push_back(std::move(probe_report));
    }
    out.manifest["warnings"] = out.warnings;
    return out;
}

void write_outputs(const CommandOutput& output, const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> written;
    const auto put = [&](const fs::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        written.push_back(path);
        f << text;
        f.close();
        if (!f) throw std::runtime_error("failed to write " + path.string());
    };
    try {
        fs::create_directories(dir);
        nlohmann::json manifest = output.manifest;
        manifest["files"] = nlohmann::json::array();
        for (const auto& t : output.tables) {
            put(dir / (t.name + ".csv"), to_csv(t));
            manifest["files"].push_back(t.name + ".csv");
        }
        put(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
}

int run_command(Command cmd, const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                const CommandOptions& options, std::ostream& log)
{
    try {
        const RunConfig cfg = load_config(config_path);
        const CommandOutput out = execute(cmd, cfg, options);
        for (const auto& w : out.warnings) log << "warning: " << w << '\n';
        write_outputs(out, out_dir);
        return 0;
    } catch (const ValidationError& e) {
        for (const auto& d : e.diagnostics()) log << "error: " << d.field << ": " << d.message << '\n';
        return 1;
    } catch (const ConfigParseError& e) {
        log << "error: " << config_path.string() << ": " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        log << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace pipedrive
