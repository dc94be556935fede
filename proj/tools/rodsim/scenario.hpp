#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "rodsim/discretization.hpp"
#include "rodsim/dynamics.hpp"
#include "rodsim/linear_oracles.hpp"
#include "rodsim/loads.hpp"
#include "rodsim/rod_model.hpp"
#include "rodsim/static_solver.hpp"

namespace rodsim::cli {

// Scenario file violates the schema; path is a dotted field path.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class Mode { static_ti, static_general, dynamic_ti, diagnostic, oracle };

enum class Reference { none, arc, cantilever, torsion, pluck };

struct DynamicInit {
    LoadCase preload;  // static deflection released at t = 0
    Vec3 velocity = Vec3::Zero();  // m/s, uniform
    double twist_amplitude = 0.0;  // rad, first clamped-free torsion shape
};

struct Diagnostic {
    std::string kind;  // holonomy | buckling | mixed_residual
    double colatitude_deg = 60.0;
    int samples = 10000;
    double load_min = 0.0, load_max = 1.0;
    int steps = 16;
};

struct OracleRequest {
    std::string kind;  // frequency_roots | rayleigh | cantilever
    int count = 5;
    int elements = 64;
    bool rotary_inertia = true;
    oracle::LinearBeamParams beam;
};

struct Scenario {
    std::string name;
    Mode mode = Mode::static_ti;
    double length = 1.0;
    int elements = 16;
    int gauss_points = 3;
    bool has_material = false;
    rod::MaterialLaw law;
    rod::SectionInertia inertia;
    LoadCase loads;
    fem::Clamp clamp;
    statics::SolverOptions solver;
    dyn::IntegratorConfig integrator;
    DynamicInit initial;
    Diagnostic diagnostic;
    OracleRequest oracle;
    Reference reference = Reference::none;
    std::filesystem::path output_dir;
};

const char* to_string(Mode m);
const char* to_string(Reference r);

// Throws SchemaError naming the offending field.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace rodsim::cli
