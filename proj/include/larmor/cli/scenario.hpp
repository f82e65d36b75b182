#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "larmor/core/types.hpp"

namespace larmor::cli {

enum class Mode { ClassicalEquivalence, QuantumPipeline, EigenstateExpansion, HillStability, Case1, Case2 };

inline const std::vector<std::pair<std::string, Mode>>& mode_names() {
    static const std::vector<std::pair<std::string, Mode>> names = {
        {"classical-equivalence", Mode::ClassicalEquivalence},
        {"quantum-pipeline", Mode::QuantumPipeline},
        {"eigenstate-expansion", Mode::EigenstateExpansion},
        {"hill-stability", Mode::HillStability},
        {"case1", Mode::Case1},
        {"case2", Mode::Case2},
    };
    return names;
}

inline std::string to_string(Mode m) {
    for (const auto& [name, mode] : mode_names()) {
        if (mode == m) return name;
    }
    return "unknown";
}

/// Diagnostic for a malformed scenario: carries the key path and 1-based line.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& file, int line, const std::string& key, const std::string& message)
        : std::runtime_error(file + ":" + (line > 0 ? std::to_string(line) : std::string("?")) + ": " + key + ": " +
                             message),
          key_(key),
          line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

/// Magnetic and electric field parameters. Which entries are read depends on the mode:
/// static modes use b3; case1 uses B3(t) = b3 + b3_amplitude cos(b3_frequency t);
/// case2 uses B(t) = R_z(alpha t) (b1, 0, b3).
struct FieldSpec {
    double charge = 1.0;
    double mass = 1.0;
    double b1 = 0.0;
    double b3 = 1.0;
    double alpha = 0.0;
    double b3_amplitude = 0.0;
    double b3_frequency = 0.0;
    Vec3 electric = Vec3::Zero();
};

struct InitialSpec {
    Vec3 position = Vec3(0.5, -0.4, 0.2);
    Vec3 momentum = Vec3(0.1, 0.3, -0.2);
    /// Eigenstate label for the quantum ledger check.
    int n1 = 0;
    int n2 = 0;
    double k = 0.0;
};

struct GridSpec {
    int points = 128;
    double half_width = 8.0;
    double hbar = 1.0;
};

struct NumericsSpec {
    double dt = 0.0;  // 0 selects the mode default
    long sample_every = 100;
    long quadrature_panels = 10000;
    long monodromy_steps = 4096;
    double rotation_dt = 1e-4;
    int random_cases = 0;
    int symplectic_samples = 20;
};

struct ExpansionSpec {
    double mass = 1.0;
    double omega = 1.0;
    int hermite_max = 10;
    int max_level = 6;
    double theta = 0.7;
    double shift = 0.5;
    bool spectrum = true;
};

struct HillSpec {
    std::string system = "mathieu";  // or "constant"
    std::vector<double> param1;
    std::vector<double> param2;
    std::vector<std::pair<double, double>> brackets;
    double boundary_param2 = 0.0;
    double boundary_tolerance = 1e-3;
    long brute_force_pieces = 4000;
};

struct Scenario {
    std::string name;
    Mode mode = Mode::ClassicalEquivalence;
    std::uint64_t seed = 1;
    FieldSpec field;
    InitialSpec initial;
    double horizon = 0.0;  // 0 selects the mode default
    GridSpec grid;
    NumericsSpec numerics;
    ExpansionSpec expansion;
    HillSpec hill;
    std::map<std::string, double> tolerances;
    std::string output_prefix;
    std::string source;

    double tolerance(const std::string& check) const { return tolerances.at(check); }
};

/// Checks each mode may report, with default tolerances.
inline std::map<std::string, double> default_tolerances(Mode mode) {
    switch (mode) {
    case Mode::ClassicalEquivalence:
        return {{"equivalence", 1e-6},       {"symplectic_ct1", 1e-8},     {"symplectic_ct2", 1e-8},
                {"homogeneous_energy", 1e-10}, {"phase_A_zero", 1e-14},      {"random_equivalence", 1e-6}};
    case Mode::QuantumPipeline:
        return {{"qt2_link", 1e-4},     {"qt1_link", 1e-4},          {"norm", 1e-10},
                {"qt2_identity", 1e-12}, {"dynamical_phase_only", 1e-14}};
    case Mode::EigenstateExpansion:
        return {{"hermite_shift", 1e-9}, {"rotation_orthogonality", 1e-8}, {"level_one_rotation", 1e-10},
                {"spectrum", 1e-3}};
    case Mode::HillStability:
        return {{"determinant", 1e-8}, {"constant_trace", 1e-8}, {"boundary_crosscheck", 1e-3}};
    case Mode::Case1:
        return {{"rotation_closed_form", 1e-6}, {"larmor_reduction", 1e-8}, {"hill_determinant", 1e-8}};
    case Mode::Case2:
        return {{"conjugation", 1e-10},          {"symplectic_ct3", 1e-8},       {"symplectic_ct4", 1e-8},
                {"reduction", 1e-8},             {"monodromy_symplectic", 1e-9}, {"monodromy_exponential", 1e-8},
                {"static_limit", 1e-12}};
    }
    return {};
}

namespace detail {

/// Cursor over a YAML mapping that remembers its key path for diagnostics.
class Reader {
public:
    Reader(YAML::Node node, std::string path, std::string file)
        : node_(std::move(node)), path_(std::move(path)), file_(std::move(file)) {
        if (!node_.IsMap()) fail(path_.empty() ? "scenario" : path_, line_of(node_), "expected a mapping");
    }

    [[noreturn]] void fail(const std::string& key, int line, const std::string& msg) const {
        throw ScenarioError(file_, line, key, msg);
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    int line() const { return line_of(node_); }
    bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    YAML::Node get(const std::string& key) const { return node_[key]; }

    Reader child(const std::string& key) const {
        const YAML::Node n = node_[key];
        if (!n) fail(key_path(key), line(), "missing key");
        return Reader(n, key_path(key), file_);
    }

    double number(const std::string& key, double fallback) const {
        const YAML::Node n = node_[key];
        return n ? as_number(n, key_path(key)) : fallback;
    }

    double required_number(const std::string& key) const {
        const YAML::Node n = node_[key];
        if (!n) fail(key_path(key), line(), "missing key");
        return as_number(n, key_path(key));
    }

    long integer(const std::string& key, long fallback) const {
        const YAML::Node n = node_[key];
        if (!n) return fallback;
        const double v = as_number(n, key_path(key));
        if (v != std::floor(v) || std::abs(v) > 1e15) fail(key_path(key), line_of(n), "expected an integer");
        return static_cast<long>(v);
    }

    bool boolean(const std::string& key, bool fallback) const {
        const YAML::Node n = node_[key];
        if (!n) return fallback;
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(key_path(key), line_of(n), "expected true or false");
        }
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const YAML::Node n = node_[key];
        if (!n) return fallback;
        if (!n.IsScalar()) fail(key_path(key), line_of(n), "expected a string");
        return n.Scalar();
    }

    Vec3 vec3(const std::string& key, const Vec3& fallback) const {
        const YAML::Node n = node_[key];
        if (!n) return fallback;
        const std::vector<double> v = as_list(n, key_path(key));
        if (v.size() != 3) fail(key_path(key), line_of(n), "expected a list of 3 numbers");
        return Vec3(v[0], v[1], v[2]);
    }

    /// Either a list of numbers or {from, to, count} (count >= 1, inclusive ends).
    std::vector<double> values(const std::string& key) const {
        const YAML::Node n = node_[key];
        if (!n) fail(key_path(key), line(), "missing key");
        if (n.IsMap()) {
            const Reader r(n, key_path(key), file_);
            r.reject_unknown({"from", "to", "count"});
            const double from = r.required_number("from");
            const double to = r.required_number("to");
            const long count = r.integer("count", 0);
            if (count < 1) r.fail(r.key_path("count"), r.line(), "count must be at least 1");
            std::vector<double> out(static_cast<std::size_t>(count));
            for (long i = 0; i < count; ++i) {
                out[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
            }
            return out;
        }
        std::vector<double> out = as_list(n, key_path(key));
        if (out.empty()) fail(key_path(key), line_of(n), "expected at least one value");
        return out;
    }

    void reject_unknown(std::initializer_list<const char*> allowed) const {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& kv : node_) {
            const std::string k = kv.first.Scalar();
            if (!ok.count(k)) fail(key_path(k), line_of(kv.first), "unknown key");
        }
    }

    static int line_of(const YAML::Node& n) {
        const YAML::Mark m = n.Mark();
        return m.line >= 0 ? m.line + 1 : 0;
    }

    double as_number(const YAML::Node& n, const std::string& key) const {
        if (!n.IsScalar()) fail(key, line_of(n), "expected a number");
        try {
            const double v = n.as<double>();
            if (!std::isfinite(v)) fail(key, line_of(n), "expected a finite number");
            return v;
        } catch (const YAML::Exception&) {
            fail(key, line_of(n), "expected a number, got '" + n.Scalar() + "'");
        }
    }

    std::vector<double> as_list(const YAML::Node& n, const std::string& key) const {
        if (!n.IsSequence()) fail(key, line_of(n), "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(as_number(n[i], key + "[" + std::to_string(i) + "]"));
        return out;
    }

    const std::string& file() const { return file_; }

private:
    YAML::Node node_;
    std::string path_;
    std::string file_;
};

inline void positive(const Reader& r, const std::string& key, double v, const std::string& what) {
    if (!(v > 0.0)) r.fail(r.key_path(key), r.line(), what + " must be positive");
}

inline Scenario parse_one(const Reader& r, const std::string& fallback_name) {
    r.reject_unknown({"name", "mode", "seed", "field", "initial", "horizon", "grid", "numerics", "expansion", "hill",
                      "tolerances", "output"});
    Scenario s;
    s.source = r.file();
    s.name = r.text("name", fallback_name);
    if (s.name.empty()) r.fail(r.key_path("name"), r.line(), "name must not be empty");
    for (const char c : s.name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
            r.fail(r.key_path("name"), r.line(), "name may only contain letters, digits, '-', '_' and '.'");
        }
    }

    if (!r.has("mode")) r.fail(r.key_path("mode"), r.line(), "missing key");
    const std::string mode = r.text("mode", "");
    bool known = false;
    for (const auto& [label, m] : mode_names()) {
        if (label == mode) {
            s.mode = m;
            known = true;
        }
    }
    if (!known) {
        std::string list;
        for (const auto& [label, m] : mode_names()) list += (list.empty() ? "" : ", ") + label;
        r.fail(r.key_path("mode"), Reader::line_of(r.get("mode")), "unknown mode '" + mode + "' (expected one of " + list + ")");
    }
    const long seed = r.integer("seed", 1);
    if (seed < 0) r.fail(r.key_path("seed"), r.line(), "seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);

    const bool needs_field = s.mode != Mode::EigenstateExpansion && s.mode != Mode::HillStability;
    if (needs_field) {
        const Reader f = r.child("field");
        f.reject_unknown({"charge", "mass", "b1", "b3", "alpha", "b3_amplitude", "b3_frequency", "electric"});
        s.field.charge = f.number("charge", 1.0);
        s.field.mass = f.number("mass", 1.0);
        positive(f, "mass", s.field.mass, "mass");
        s.field.b3 = f.number("b3", 1.0);
        s.field.electric = f.vec3("electric", Vec3::Zero());
        if (s.mode == Mode::Case1) {
            s.field.b3_amplitude = f.number("b3_amplitude", 0.0);
            s.field.b3_frequency = f.number("b3_frequency", 0.0);
            if (s.field.b3_amplitude != 0.0) positive(f, "b3_frequency", s.field.b3_frequency, "b3_frequency");
        } else if (f.has("b3_amplitude") || f.has("b3_frequency")) {
            f.fail(f.key_path(f.has("b3_amplitude") ? "b3_amplitude" : "b3_frequency"), f.line(),
                   "only used by mode case1");
        }
        if (s.mode == Mode::Case2) {
            s.field.b1 = f.number("b1", 0.0);
            s.field.alpha = f.number("alpha", 0.0);
        } else if (f.has("b1") || f.has("alpha")) {
            f.fail(f.key_path(f.has("b1") ? "b1" : "alpha"), f.line(), "only used by mode case2");
        }
        if (s.mode == Mode::ClassicalEquivalence || s.mode == Mode::QuantumPipeline) {
            if (s.field.charge * s.field.b3 == 0.0) f.fail(f.key_path("b3"), f.line(), "q B3 must be non-zero");
        }
    }

    if (r.has("initial")) {
        const Reader i = r.child("initial");
        i.reject_unknown({"position", "momentum", "n1", "n2", "k"});
        s.initial.position = i.vec3("position", s.initial.position);
        s.initial.momentum = i.vec3("momentum", s.initial.momentum);
        s.initial.n1 = static_cast<int>(i.integer("n1", 0));
        s.initial.n2 = static_cast<int>(i.integer("n2", 0));
        s.initial.k = i.number("k", 0.0);
        if (s.initial.n1 < 0 || s.initial.n2 < 0) i.fail(i.key_path("n1"), i.line(), "labels must be non-negative");
    }

    if (r.has("horizon")) {
        s.horizon = r.number("horizon", 0.0);
        if (!(s.horizon > 0.0)) r.fail(r.key_path("horizon"), Reader::line_of(r.get("horizon")), "horizon must be positive");
    } else {
        switch (s.mode) {
        case Mode::ClassicalEquivalence:
            // Ten Larmor periods' worth of phase: t in [0, 10 / w].
            s.horizon = 10.0 / std::abs(s.field.charge * s.field.b3 / (2.0 * s.field.mass * kSpeedOfLight));
            break;
        case Mode::QuantumPipeline: s.horizon = 1.0; break;
        case Mode::Case1:
        case Mode::Case2: s.horizon = 10.0; break;
        default: s.horizon = 1.0; break;
        }
    }

    if (r.has("grid")) {
        const Reader g = r.child("grid");
        g.reject_unknown({"points", "half_width", "hbar"});
        s.grid.points = static_cast<int>(g.integer("points", s.grid.points));
        if (s.grid.points < 16 || (s.grid.points & (s.grid.points - 1)) != 0) {
            g.fail(g.key_path("points"), g.line(), "points must be a power of two >= 16");
        }
        s.grid.half_width = g.number("half_width", s.grid.half_width);
        positive(g, "half_width", s.grid.half_width, "half_width");
        s.grid.hbar = g.number("hbar", s.grid.hbar);
        positive(g, "hbar", s.grid.hbar, "hbar");
    }

    if (r.has("numerics")) {
        const Reader n = r.child("numerics");
        n.reject_unknown({"dt", "sample_every", "quadrature_panels", "monodromy_steps", "rotation_dt", "random_cases",
                          "symplectic_samples"});
        s.numerics.dt = n.number("dt", 0.0);
        if (n.has("dt")) positive(n, "dt", s.numerics.dt, "dt");
        s.numerics.sample_every = n.integer("sample_every", s.numerics.sample_every);
        positive(n, "sample_every", static_cast<double>(s.numerics.sample_every), "sample_every");
        s.numerics.quadrature_panels = n.integer("quadrature_panels", s.numerics.quadrature_panels);
        positive(n, "quadrature_panels", static_cast<double>(s.numerics.quadrature_panels), "quadrature_panels");
        s.numerics.monodromy_steps = n.integer("monodromy_steps", s.numerics.monodromy_steps);
        positive(n, "monodromy_steps", static_cast<double>(s.numerics.monodromy_steps), "monodromy_steps");
        s.numerics.rotation_dt = n.number("rotation_dt", s.numerics.rotation_dt);
        positive(n, "rotation_dt", s.numerics.rotation_dt, "rotation_dt");
        s.numerics.random_cases = static_cast<int>(n.integer("random_cases", 0));
        if (s.numerics.random_cases < 0) n.fail(n.key_path("random_cases"), n.line(), "random_cases must be >= 0");
        s.numerics.symplectic_samples = static_cast<int>(n.integer("symplectic_samples", s.numerics.symplectic_samples));
        positive(n, "symplectic_samples", s.numerics.symplectic_samples, "symplectic_samples");
    }
    if (s.numerics.dt == 0.0) {
        s.numerics.dt = s.mode == Mode::ClassicalEquivalence ? 1e-4 : 1e-3;
    }

    if (s.mode == Mode::EigenstateExpansion && r.has("expansion")) {
        const Reader e = r.child("expansion");
        e.reject_unknown({"mass", "omega", "hermite_max", "max_level", "theta", "shift", "spectrum"});
        s.expansion.mass = e.number("mass", 1.0);
        positive(e, "mass", s.expansion.mass, "mass");
        s.expansion.omega = e.number("omega", 1.0);
        positive(e, "omega", s.expansion.omega, "omega");
        s.expansion.hermite_max = static_cast<int>(e.integer("hermite_max", 10));
        s.expansion.max_level = static_cast<int>(e.integer("max_level", 6));
        if (s.expansion.hermite_max < 0 || s.expansion.hermite_max > 30) {
            e.fail(e.key_path("hermite_max"), e.line(), "hermite_max must be in [0, 30]");
        }
        if (s.expansion.max_level < 1 || s.expansion.max_level > 12) {
            e.fail(e.key_path("max_level"), e.line(), "max_level must be in [1, 12]");
        }
        s.expansion.theta = e.number("theta", 0.7);
        s.expansion.shift = e.number("shift", 0.5);
        s.expansion.spectrum = e.boolean("spectrum", true);
    } else if (r.has("expansion")) {
        r.fail(r.key_path("expansion"), Reader::line_of(r.get("expansion")), "only used by mode eigenstate-expansion");
    }

    if (s.mode == Mode::HillStability) {
        const Reader h = r.child("hill");
        h.reject_unknown({"system", "param1", "param2", "brackets", "boundary_param2", "boundary_tolerance",
                          "brute_force_pieces"});
        s.hill.system = h.text("system", "mathieu");
        if (s.hill.system != "mathieu" && s.hill.system != "constant") {
            h.fail(h.key_path("system"), h.line(), "system must be 'mathieu' or 'constant'");
        }
        s.hill.param1 = h.values("param1");
        s.hill.param2 = h.values("param2");
        if (s.hill.system == "constant") {
            for (const double v : s.hill.param1) {
                if (v < 0.0) h.fail(h.key_path("param1"), h.line(), "omega values must be non-negative");
            }
            for (const double v : s.hill.param2) {
                if (!(v > 0.0)) h.fail(h.key_path("param2"), h.line(), "period values must be positive");
            }
        }
        if (h.has("brackets")) {
            const YAML::Node b = h.get("brackets");
            if (!b.IsSequence()) h.fail(h.key_path("brackets"), Reader::line_of(b), "expected a list of [lo, hi] pairs");
            for (std::size_t i = 0; i < b.size(); ++i) {
                const std::string key = h.key_path("brackets") + "[" + std::to_string(i) + "]";
                const std::vector<double> pair = h.as_list(b[i], key);
                if (pair.size() != 2 || !(pair[0] < pair[1])) h.fail(key, Reader::line_of(b[i]), "expected [lo, hi] with lo < hi");
                s.hill.brackets.emplace_back(pair[0], pair[1]);
            }
        }
        s.hill.boundary_param2 = h.number("boundary_param2", s.hill.param2.front());
        s.hill.boundary_tolerance = h.number("boundary_tolerance", 1e-3);
        positive(h, "boundary_tolerance", s.hill.boundary_tolerance, "boundary_tolerance");
        s.hill.brute_force_pieces = h.integer("brute_force_pieces", 4000);
        positive(h, "brute_force_pieces", static_cast<double>(s.hill.brute_force_pieces), "brute_force_pieces");
    } else if (r.has("hill")) {
        r.fail(r.key_path("hill"), Reader::line_of(r.get("hill")), "only used by mode hill-stability");
    }

    s.tolerances = default_tolerances(s.mode);
    if (r.has("tolerances")) {
        const Reader t = r.child("tolerances");
        const YAML::Node node = r.get("tolerances");
        for (const auto& kv : node) {
            const std::string k = kv.first.Scalar();
            const std::string path = t.key_path(k);
            if (!s.tolerances.count(k)) t.fail(path, Reader::line_of(kv.first), "unknown check for mode " + to_string(s.mode));
            const double v = t.as_number(kv.second, path);
            if (!(v > 0.0)) t.fail(path, Reader::line_of(kv.second), "tolerance must be positive");
            s.tolerances[k] = v;
        }
    }

    s.output_prefix = s.name;
    if (r.has("output")) {
        const Reader o = r.child("output");
        o.reject_unknown({"prefix"});
        s.output_prefix = o.text("prefix", s.name);
        if (s.output_prefix.empty() || s.output_prefix.find('/') != std::string::npos) {
            o.fail(o.key_path("prefix"), o.line(), "prefix must be a non-empty file name without '/'");
        }
    }
    return s;
}

inline std::string stem_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace detail

/// Parses YAML text holding one scenario mapping, or a mapping with a `scenarios:` list.
inline std::vector<Scenario> parse_scenarios_text(const std::string& text, const std::string& file = "<config>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ScenarioError(file, e.mark.line + 1, "yaml", e.msg);
    }
    if (!root || root.IsNull()) throw ScenarioError(file, 1, "scenario", "empty configuration");
    const std::string stem = detail::stem_of(file);
    std::vector<Scenario> out;
    if (root.IsMap() && root["scenarios"]) {
        const detail::Reader top(root, "", file);
        top.reject_unknown({"scenarios"});
        const YAML::Node list = root["scenarios"];
        if (!list.IsSequence() || list.size() == 0) {
            throw ScenarioError(file, detail::Reader::line_of(list), "scenarios", "expected a non-empty list");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "scenarios[" + std::to_string(i) + "]";
            out.push_back(detail::parse_one(detail::Reader(list[i], path, file), stem + "-" + std::to_string(i)));
        }
    } else {
        out.push_back(detail::parse_one(detail::Reader(root, "", file), stem));
    }
    return out;
}

inline std::vector<Scenario> parse_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, 0, "file", "cannot open configuration");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenarios_text(buf.str(), path);
}

/// Single-scenario form of parse_scenarios.
inline Scenario parse_scenario(const std::string& path) {
    std::vector<Scenario> all = parse_scenarios(path);
    if (all.size() != 1) throw ScenarioError(path, 0, "scenarios", "expected exactly one scenario");
    return all.front();
}

}  // namespace larmor::cli
