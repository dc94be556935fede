#include "rodsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rodsim/so3.hpp"

namespace rodsim::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Read-only view of a JSON object that knows its own field path.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "must be an object");
    }

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const { return j_.contains(key); }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!ok.count(it.key())) throw SchemaError(join(path_, it.key()), "unknown field");
        }
    }

    Obj child(const std::string& key) const {
        if (!has(key)) throw SchemaError(join(path_, key), "missing required field");
        return Obj(j_.at(key), join(path_, key));
    }

    double number(const std::string& key) const {
        if (!has(key)) throw SchemaError(join(path_, key), "missing required field");
        const json& v = j_.at(key);
        if (!v.is_number()) throw SchemaError(join(path_, key), "must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(join(path_, key), "must be finite");
        return x;
    }
    double number(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    double positive(const std::string& key) const {
        const double x = number(key);
        if (!(x > 0.0)) throw SchemaError(join(path_, key), "must be positive");
        return x;
    }
    double positive(const std::string& key, double fallback) const {
        return has(key) ? positive(key) : fallback;
    }
    double nonnegative(const std::string& key, double fallback) const {
        const double x = number(key, fallback);
        if (!(x >= 0.0)) throw SchemaError(join(path_, key), "must be non-negative");
        return x;
    }

    int integer(const std::string& key, int fallback, int lo) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw SchemaError(join(path_, key), "must be an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > 1'000'000'000) {
            throw SchemaError(join(path_, key), "must be an integer >= " + std::to_string(lo));
        }
        return static_cast<int>(x);
    }

    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw SchemaError(join(path_, key), "must be true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) const {
        if (!has(key)) throw SchemaError(join(path_, key), "missing required field");
        const json& v = j_.at(key);
        if (!v.is_string()) throw SchemaError(join(path_, key), "must be a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    Vec3 vec3(const std::string& key, const Vec3& fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        const std::string p = join(path_, key);
        if (!v.is_array() || v.size() != 3) throw SchemaError(p, "must be an array of 3 numbers");
        Vec3 out;
        for (int i = 0; i < 3; ++i) {
            if (!v[i].is_number()) throw SchemaError(p + "[" + std::to_string(i) + "]", "must be a number");
            out[i] = v[i].get<double>();
            if (!std::isfinite(out[i])) throw SchemaError(p + "[" + std::to_string(i) + "]", "must be finite");
        }
        return out;
    }

private:
    const json& j_;
    std::string path_;
};

template <typename E>
E pick(const Obj& o, const std::string& key, std::initializer_list<std::pair<const char*, E>> table,
       std::optional<E> fallback = std::nullopt) {
    if (!o.has(key)) {
        if (fallback) return *fallback;
        throw SchemaError(join(o.path(), key), "missing required field");
    }
    const std::string v = o.string(key);
    std::string options;
    for (const auto& [name, e] : table) {
        if (v == name) return e;
        options += options.empty() ? name : std::string(" | ") + name;
    }
    throw SchemaError(join(o.path(), key), "must be one of " + options);
}

LoadCase parse_loads(const Obj& o) {
    o.allow({"tip_force", "tip_moment", "tip_tangent_moment", "distributed_force",
             "distributed_tangent_moment", "factor"});
    LoadCase lc;
    lc.tip_force = o.vec3("tip_force", Vec3::Zero());
    lc.tip_moment = o.vec3("tip_moment", Vec3::Zero());
    lc.tip_tangent_moment = o.number("tip_tangent_moment", 0.0);
    lc.distributed_force = o.vec3("distributed_force", Vec3::Zero());
    lc.distributed_tangent_moment = o.number("distributed_tangent_moment", 0.0);
    lc.factor = o.number("factor", 1.0);
    return lc;
}

void parse_material(const Obj& o, Scenario& sc) {
    o.allow({"EA", "EI", "EI1", "EI2", "GJ", "A_rho", "I_perp", "I_par"});
    sc.has_material = true;
    sc.law.EA = o.positive("EA");
    if (o.has("EI")) {
        if (o.has("EI1") || o.has("EI2")) throw SchemaError(join(o.path(), "EI"), "give either EI or EI1/EI2");
        sc.law.EI1 = sc.law.EI2 = o.positive("EI");
    } else {
        sc.law.EI1 = o.positive("EI1");
        sc.law.EI2 = o.positive("EI2");
    }
    sc.law.GJ = o.positive("GJ");
    sc.inertia = rod::SectionInertia::transversely_isotropic(
        o.positive("A_rho", 1.0), o.positive("I_perp", 1e-4), o.positive("I_par", 2e-4));
}

void parse_clamp(const Obj& o, Scenario& sc) {
    o.allow({"position", "rotation_vector", "free"});
    sc.clamp.position = o.vec3("position", Vec3::Zero());
    sc.clamp.orientation = so3::exp_rodrigues(o.vec3("rotation_vector", Vec3::Zero())).matrix();
    sc.clamp.free = o.boolean("free", false);
}

void parse_solver(const Obj& o, Scenario& sc) {
    o.allow({"tol", "max_iterations", "load_steps", "max_cutbacks", "threads"});
    sc.solver.tol = o.positive("tol", sc.solver.tol);
    sc.solver.max_iter = o.integer("max_iterations", sc.solver.max_iter, 1);
    sc.solver.load_steps = o.integer("load_steps", sc.solver.load_steps, 1);
    sc.solver.max_cutbacks = o.integer("max_cutbacks", sc.solver.max_cutbacks, 0);
    sc.solver.threads = o.integer("threads", sc.solver.threads, 1);
    sc.integrator.threads = sc.solver.threads;
}

void parse_integrator(const Obj& o, Scenario& sc) {
    o.allow({"dt", "t_end", "newton_tol", "max_newton", "output_stride"});
    sc.integrator.dt = o.positive("dt");
    sc.integrator.t_end = o.positive("t_end");
    sc.integrator.newton_tol = o.positive("newton_tol", sc.integrator.newton_tol);
    sc.integrator.max_newton = o.integer("max_newton", sc.integrator.max_newton, 1);
    sc.integrator.output_stride = o.integer("output_stride", sc.integrator.output_stride, 1);
    if (sc.integrator.t_end / sc.integrator.dt > 1e7) {
        throw SchemaError(join(o.path(), "dt"), "more than 1e7 steps requested");
    }
}

void parse_initial(const Obj& o, Scenario& sc) {
    o.allow({"preload", "velocity", "twist_amplitude"});
    if (o.has("preload")) sc.initial.preload = parse_loads(o.child("preload"));
    sc.initial.velocity = o.vec3("velocity", Vec3::Zero());
    sc.initial.twist_amplitude = o.number("twist_amplitude", 0.0);
}

void parse_diagnostic(const Obj& o, Scenario& sc) {
    o.allow({"kind", "colatitude_deg", "samples", "load_min", "load_max", "steps"});
    Diagnostic& d = sc.diagnostic;
    d.kind = o.string("kind");
    if (d.kind == "holonomy") {
        d.colatitude_deg = o.number("colatitude_deg", d.colatitude_deg);
        if (!(d.colatitude_deg > 0.0 && d.colatitude_deg < 180.0)) {
            throw SchemaError(join(o.path(), "colatitude_deg"), "must lie in (0, 180)");
        }
        d.samples = o.integer("samples", d.samples, 8);
    } else if (d.kind == "buckling") {
        d.load_min = o.nonnegative("load_min", 0.0);
        d.load_max = o.positive("load_max");
        if (!(d.load_max > d.load_min)) throw SchemaError(join(o.path(), "load_max"), "must exceed load_min");
        d.steps = o.integer("steps", d.steps, 1);
    } else if (d.kind != "mixed_residual") {
        throw SchemaError(join(o.path(), "kind"), "must be one of holonomy | buckling | mixed_residual");
    }
}

void parse_oracle(const Obj& o, Scenario& sc) {
    o.allow({"kind", "count", "elements", "rotary_inertia", "beam"});
    OracleRequest& r = sc.oracle;
    r.kind = o.string("kind");
    if (r.kind != "frequency_roots" && r.kind != "rayleigh" && r.kind != "cantilever") {
        throw SchemaError(join(o.path(), "kind"), "must be one of frequency_roots | rayleigh | cantilever");
    }
    r.count = o.integer("count", r.count, 1);
    r.elements = o.integer("elements", r.elements, 1);
    r.rotary_inertia = o.boolean("rotary_inertia", r.rotary_inertia);
    if (r.kind == "rayleigh") {
        const Obj b = o.child("beam");
        b.allow({"E", "G", "A", "I11", "I22", "I33", "rho"});
        r.beam.E = b.positive("E");
        r.beam.G = b.positive("G", r.beam.G);
        r.beam.A = b.positive("A");
        r.beam.I11 = b.positive("I11");
        r.beam.I22 = b.positive("I22", r.beam.I11);
        r.beam.I33 = b.positive("I33", r.beam.I11 + r.beam.I22);
        r.beam.rho = b.positive("rho");
        if (r.count > 2 * r.elements) throw SchemaError(join(o.path(), "count"), "exceeds 2 * elements");
    }
}

}  // namespace

const char* to_string(Mode m) {
    switch (m) {
        case Mode::static_ti: return "static_ti";
        case Mode::static_general: return "static_general";
        case Mode::dynamic_ti: return "dynamic_ti";
        case Mode::diagnostic: return "diagnostic";
        case Mode::oracle: return "oracle";
    }
    return "?";
}

const char* to_string(Reference r) {
    switch (r) {
        case Reference::none: return "none";
        case Reference::arc: return "arc";
        case Reference::cantilever: return "cantilever";
        case Reference::torsion: return "torsion";
        case Reference::pluck: return "pluck";
    }
    return "?";
}

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("<root>", std::string("invalid JSON: ") + e.what());
    }
    const Obj root(doc, "");
    root.allow({"name", "mode", "geometry", "material", "loads", "clamp", "solver", "integrator",
                "initial", "diagnostic", "oracle", "reference", "output"});
    Scenario sc;
    sc.name = root.string("name", "scenario");
    sc.mode = pick<Mode>(root, "mode",
                         {{"static_ti", Mode::static_ti},
                          {"static_general", Mode::static_general},
                          {"dynamic_ti", Mode::dynamic_ti},
                          {"diagnostic", Mode::diagnostic},
                          {"oracle", Mode::oracle}});
    sc.reference = pick<Reference>(root, "reference",
                                   {{"none", Reference::none},
                                    {"arc", Reference::arc},
                                    {"cantilever", Reference::cantilever},
                                    {"torsion", Reference::torsion},
                                    {"pluck", Reference::pluck}},
                                   Reference::none);

    const bool rod_mode = sc.mode != Mode::oracle &&
                          !(sc.mode == Mode::diagnostic && root.has("diagnostic") &&
                            root.child("diagnostic").string("kind", "") == "holonomy");

    if (rod_mode || root.has("geometry")) {
        const Obj g = root.child("geometry");
        g.allow({"length", "elements", "gauss_points"});
        sc.length = g.positive("length");
        sc.elements = g.integer("elements", sc.elements, 1);
        sc.gauss_points = g.integer("gauss_points", sc.gauss_points, 1);
        if (sc.gauss_points > 10) throw SchemaError("geometry.gauss_points", "must be at most 10");
    }
    if (rod_mode || root.has("material")) parse_material(root.child("material"), sc);
    if (root.has("loads")) sc.loads = parse_loads(root.child("loads"));
    if (root.has("clamp")) parse_clamp(root.child("clamp"), sc);
    if (root.has("solver")) parse_solver(root.child("solver"), sc);
    if (sc.mode == Mode::dynamic_ti) parse_integrator(root.child("integrator"), sc);
    if (root.has("initial")) parse_initial(root.child("initial"), sc);
    if (sc.mode == Mode::diagnostic) parse_diagnostic(root.child("diagnostic"), sc);
    if (sc.mode == Mode::oracle) parse_oracle(root.child("oracle"), sc);
    if (root.has("output")) {
        const Obj o = root.child("output");
        o.allow({"dir"});
        sc.output_dir = o.string("dir");
    }

    const bool ti_only = sc.mode == Mode::static_ti || sc.mode == Mode::dynamic_ti;
    if (ti_only && sc.law.EI1 != sc.law.EI2) {
        throw SchemaError("material.EI2", std::string("must equal EI1 for mode ") + to_string(sc.mode));
    }
    if (sc.mode != Mode::static_general && sc.mode != Mode::oracle && !sc.loads.tip_moment.isZero(0.0)) {
        throw SchemaError("loads.tip_moment", "only supported by mode static_general");
    }
    if (sc.mode == Mode::static_general && sc.clamp.free) {
        throw SchemaError("clamp.free", "static_general requires a clamped end");
    }
    if (sc.reference == Reference::arc && sc.loads.tip_moment.isZero(0.0)) {
        throw SchemaError("loads.tip_moment", "reference arc needs a nonzero tip moment");
    }
    if (sc.reference == Reference::pluck && sc.mode != Mode::dynamic_ti) {
        throw SchemaError("reference", "pluck applies to mode dynamic_ti only");
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("<file>", "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

}  // namespace rodsim::cli
