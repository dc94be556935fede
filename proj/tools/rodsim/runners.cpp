#include "rodsim/runners.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rodsim/errors.hpp"
#include "rodsim/frames.hpp"
#include "rodsim/table.hpp"

namespace rodsim::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

// JSON has no NaN; missing values become null.
ordered_json num_json(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void header_meta(Table& t, const Scenario& sc, const RunOptions& opt) {
    t.meta("generator", fmt::format("rodsim {}", kVersion));
    t.meta("scenario", sc.name);
    t.meta("source", opt.scenario_label);
    t.meta("mode", to_string(sc.mode));
    t.meta("units", "SI");
}

struct Artifacts {
    std::filesystem::path dir;
    std::vector<std::string> files;

    void table(const std::string& name, const Table& t) {
        t.write(dir / name);
        files.push_back(name);
    }
    // Mode-specific part of report.json, written once by run_scenario.
    ordered_json payload;
    void report(ordered_json j) { payload = std::move(j); }
};

// ---- statics ---------------------------------------------------------------

struct Level {
    int elements = 0;
    statics::SolveReport rep;
    double error = kNaN;
    double order = kNaN;
};

statics::SolveReport solve_static(const Scenario& sc, int elements, int threads) {
    const fem::Grid grid = fem::Grid::uniform(sc.length, elements, sc.gauss_points);
    statics::SolverOptions so = sc.solver;
    so.threads = threads;
    const fem::DofVector x0 = fem::DofVector::straight(grid, sc.clamp);
    spdlog::debug("solving {} with {} elements", to_string(sc.mode), elements);
    statics::SolveReport rep = sc.mode == Mode::static_general
                                   ? statics::solve_general_static(x0, grid, sc.law, sc.loads, sc.clamp, so)
                                   : statics::solve_ti_static(x0, grid, sc.law, sc.loads, sc.clamp, so);
    spdlog::info("{} elements: converged={} iterations={} residual={:.3e}", elements, rep.converged,
                 rep.iterations, rep.residual);
    return rep;
}

// Straight-rod tip plus the linear cantilever deflection of the load.
Vec3 cantilever_reference(const Scenario& sc, double* scale) {
    const LoadCase lc = sc.loads.effective();
    const Mat3& Q = sc.clamp.orientation;
    const Vec3 F = Q.transpose() * lc.tip_force;
    const double L = sc.length, L3 = L * L * L;
    // Force along e1 bends about e2 and the converse.
    const Vec3 local(F[0] * L3 / (3.0 * sc.law.EI2), F[1] * L3 / (3.0 * sc.law.EI1), F[2] * L / sc.law.EA);
    const Vec3 delta = Q * local;
    *scale = delta.norm();
    return sc.clamp.position + L * sc.clamp.direction() + delta;
}

Vec3 arc_reference(const Scenario& sc, double* scale) {
    const LoadCase lc = sc.loads.effective();
    const Mat3& Q = sc.clamp.orientation;
    const Vec3 M = Q.transpose() * lc.tip_moment;
    if (std::abs(M[2]) > 1e-14 * M.norm()) {
        throw SchemaError("reference", "arc needs a tip moment normal to the clamp direction");
    }
    const Vec3 K(M[0] / sc.law.EI1, M[1] / sc.law.EI2, 0.0);
    if (sc.law.EI1 != sc.law.EI2 && std::abs(M[0]) > 0.0 && std::abs(M[1]) > 0.0) {
        throw SchemaError("reference", "arc needs a moment along a principal axis");
    }
    const double kappa = K.norm();
    const Vec3 axis = Q * K.normalized();
    const Vec3 dir = sc.clamp.direction();
    const double L = sc.length;
    *scale = L;
    return sc.clamp.position + std::sin(kappa * L) / kappa * dir +
           (1.0 - std::cos(kappa * L)) / kappa * axis.cross(dir);
}

double torsion_reference(const Scenario& sc) {
    const LoadCase lc = sc.loads.effective();
    const double L = sc.length;
    return (lc.tip_tangent_moment * L + 0.5 * lc.distributed_tangent_moment * L * L) / sc.law.GJ;
}

void assign_errors(const Scenario& sc, std::vector<Level>& levels) {
    double scale = 1.0;
    switch (sc.reference) {
        case Reference::arc:
        case Reference::cantilever: {
            const Vec3 ref = sc.reference == Reference::arc ? arc_reference(sc, &scale)
                                                            : cantilever_reference(sc, &scale);
            for (Level& l : levels) l.error = (l.rep.tip - ref).norm() / scale;
            break;
        }
        case Reference::torsion: {
            const double ref = torsion_reference(sc);
            const double denom = ref != 0.0 ? std::abs(ref) : 1.0;
            for (Level& l : levels) l.error = std::abs(l.rep.tip_psi - ref) / denom;
            break;
        }
        case Reference::none:
        case Reference::pluck:
            if (levels.size() > 1) {
                const Vec3 fine = levels.back().rep.tip;
                const double s = fine.norm() > 0.0 ? fine.norm() : 1.0;
                for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
                    levels[k].error = (levels[k].rep.tip - fine).norm() / s;
                }
            }
            break;
    }
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const double a = levels[k].error, b = levels[k + 1].error;
        if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)) {
            levels[k + 1].order = std::log2(a / b);
        }
    }
}

template <typename Job>
auto fan_out(int count, int jobs, Job&& job) {
    using R = decltype(job(0));
    std::vector<R> out;
    out.reserve(count);
    for (int first = 0; first < count; first += jobs) {
        std::vector<std::future<R>> running;
        const int last = std::min(count, first + jobs);
        for (int k = first; k < last; ++k) running.push_back(std::async(std::launch::async, job, k));
        for (auto& f : running) out.push_back(f.get());
    }
    return out;
}

int level_elements(const Scenario& sc, int k) { return sc.elements << k; }

// Rows of (elements, error, observed order) on stdout.
void print_convergence(const std::vector<std::array<double, 3>>& rows) {
    fmt::print("{:>10} {:>14} {:>10}\n", "elements", "error", "order");
    for (const auto& r : rows) fmt::print("{:>10} {:>14.6e} {:>10.3f}\n", r[0], r[1], r[2]);
}

RunOutcome run_static(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const int K = std::max(1, opt.convergence);
    const int threads = opt.deterministic || opt.jobs > 1 ? 1 : sc.solver.threads;
    std::vector<statics::SolveReport> reps =
        fan_out(K, opt.jobs, [&](int k) { return solve_static(sc, level_elements(sc, k), threads); });
    std::vector<Level> levels(K);
    for (int k = 0; k < K; ++k) {
        levels[k].elements = level_elements(sc, k);
        levels[k].rep = std::move(reps[k]);
    }
    assign_errors(sc, levels);

    Table res({{"elements", "-"}, {"converged", "-"}, {"iterations", "-"}, {"residual", "N"},
               {"tip_x", "m"}, {"tip_y", "m"}, {"tip_z", "m"}, {"psi_L", "rad"}, {"energy", "J"},
               {"tangent_negative", "-"}, {"error", "-"}, {"observed_order", "-"}});
    header_meta(res, sc, opt);
    res.meta("reference", to_string(sc.reference));
    for (const Level& l : levels) {
        const auto& r = l.rep;
        res.add_row({double(l.elements), r.converged ? 1.0 : 0.0, double(r.iterations), r.residual,
                     r.tip[0], r.tip[1], r.tip[2], r.tip_psi, r.energy, double(r.tangent_negative),
                     l.error, l.order});
    }
    art.table("results.csv", res);

    const statics::SolveReport& fine = levels.back().rep;
    Table fld({{"s", "m"}, {"x", "m"}, {"y", "m"}, {"z", "m"}, {"psi", "rad"}, {"eps", "-"},
               {"curvature", "1/m"}, {"tau", "rad/m"}, {"n_par_x", "N"}, {"n_par_y", "N"}, {"n_par_z", "N"},
               {"m_perp_x", "N m"}, {"m_perp_y", "N m"}, {"m_perp_z", "N m"}, {"m_par", "N m"}});
    header_meta(fld, sc, opt);
    fld.meta("elements", std::to_string(levels.back().elements));
    for (const statics::FieldSample& f : fine.fields) {
        fld.add_row({f.s, f.r[0], f.r[1], f.r[2], f.psi, f.eps, f.curvature, f.tau, f.n_par[0], f.n_par[1],
                     f.n_par[2], f.m_perp[0], f.m_perp[1], f.m_perp[2], f.m_par});
    }
    art.table("fields.csv", fld);

    bool all = true;
    ordered_json lv = ordered_json::array();
    for (const Level& l : levels) {
        all = all && l.rep.converged;
        lv.push_back({{"elements", l.elements},
                      {"converged", l.rep.converged},
                      {"iterations", l.rep.iterations},
                      {"residual", l.rep.residual},
                      {"tip", vec_json(l.rep.tip)},
                      {"psi_L", l.rep.tip_psi},
                      {"energy", l.rep.energy},
                      {"error", num_json(l.error)},
                      {"observed_order", num_json(l.order)},
                      {"message", l.rep.message}});
    }
    RunOutcome out;
    out.exit_code = all ? kOk : kNonConvergence;
    if (!all) {
        for (const Level& l : levels) {
            if (!l.rep.converged) {
                out.message = fmt::format("{} elements: {}", l.elements, l.rep.message);
                break;
            }
        }
    }
    ordered_json summary = {{"converged", all},
                            {"iterations", fine.iterations},
                            {"tip", vec_json(fine.tip)},
                            {"psi_L", fine.tip_psi},
                            {"energy", fine.energy},
                            {"residual", fine.residual}};
    ordered_json report = {{"summary", summary}, {"levels", lv}};
    if (opt.convergence > 0) {
        std::vector<std::array<double, 3>> rows;
        for (const Level& l : levels) rows.push_back({double(l.elements), l.error, l.order});
        print_convergence(rows);
    }
    report["mode"] = to_string(sc.mode);
    art.report(std::move(report));
    return out;
}

// ---- dynamics --------------------------------------------------------------

double pluck_frequency(const Scenario& sc) {
    const double b = oracle::frequency_roots(1)[0];
    return b * b / (2.0 * std::numbers::pi * sc.length * sc.length) *
           std::sqrt(sc.law.EI1 / sc.inertia.A_rho);
}

RunOutcome run_dynamic(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const fem::Grid grid = fem::Grid::uniform(sc.length, sc.elements, sc.gauss_points);
    dyn::RodProblem pb;
    pb.grid = &grid;
    pb.law = sc.law;
    pb.inertia = sc.inertia;
    pb.loads = sc.loads;
    pb.clamp = sc.clamp;
    pb.validate();
    dyn::IntegratorConfig cfg = sc.integrator;
    if (opt.deterministic) cfg.threads = 1;
    cfg.validate();

    RunOutcome out;
    fem::DofVector q0 = fem::DofVector::straight(grid, sc.clamp);
    const LoadCase pre = sc.initial.preload.effective();
    if (!pre.tip_force.isZero(0.0) || !pre.distributed_force.isZero(0.0) || pre.tip_tangent_moment != 0.0 ||
        pre.distributed_tangent_moment != 0.0) {
        statics::SolverOptions so = sc.solver;
        so.threads = cfg.threads;
        const statics::SolveReport rep = statics::solve_ti_static(q0, grid, sc.law, pre, sc.clamp, so);
        if (!rep.converged) {
            out.exit_code = kNonConvergence;
            out.message = "preload solve did not converge: " + rep.message;
            art.report({{"mode", to_string(sc.mode)}, {"summary", {{"converged", false}, {"message", out.message}}}});
            return out;
        }
        q0 = rep.state;
    }
    for (int i = 0; i < grid.nodes(); ++i) {
        q0.psi[i] += sc.initial.twist_amplitude * std::sin(0.5 * std::numbers::pi * grid.s(i) / sc.length);
    }
    dyn::DynamicState s0 = dyn::DynamicState::at_rest(q0);
    for (int i = 1; i < grid.nodes(); ++i) s0.rates.segment<3>(fem::kNodeDofs * i) = sc.initial.velocity;
    if (sc.clamp.free) s0.rates.segment<3>(0) = sc.initial.velocity;

    std::vector<dyn::DynamicState> traj;
    try {
        traj = dyn::integrate(pb, s0, cfg);
    } catch (const StepNonConvergence& e) {
        out.exit_code = kNonConvergence;
        out.message = e.what();
        art.report({{"mode", to_string(sc.mode)}, {"summary", {{"converged", false}, {"message", out.message}}}});
        return out;
    }
    const std::vector<dyn::EnergySample> en = dyn::energy_audit(pb, traj);

    Table tr({{"t", "s"}, {"tip_x", "m"}, {"tip_y", "m"}, {"tip_z", "m"}, {"psi_L", "rad"},
              {"kinetic", "J"}, {"potential", "J"}, {"total", "J"}});
    header_meta(tr, sc, opt);
    tr.meta("elements", std::to_string(sc.elements));
    tr.meta("dt", fmt::format("{} s", cfg.dt));
    std::vector<double> t, psi;
    std::vector<std::vector<double>> tip(3);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Vec3& p = traj[k].dofs.r.back();
        tr.add_row({traj[k].t, p[0], p[1], p[2], traj[k].dofs.psi.back(), en[k].kinetic, en[k].potential,
                    en[k].total});
        t.push_back(traj[k].t);
        psi.push_back(traj[k].dofs.psi.back());
        for (int c = 0; c < 3; ++c) tip[c].push_back(p[c]);
    }
    art.table("trajectory.csv", tr);

    auto variance = [](const std::vector<double>& y) {
        double m = 0.0, v = 0.0;
        for (double x : y) m += x;
        m /= static_cast<double>(y.size());
        for (double x : y) v += (x - m) * (x - m);
        return v;
    };
    const double t_span = t.back() - t.front();
    const double f_lo = 1.5 / t_span;
    const double f_hi = 0.25 / (cfg.dt * cfg.output_stride);
    double f_tip = kNaN, f_psi = kNaN;
    if (t.size() >= 8 && f_hi > f_lo) {
        int c_best = 0;
        for (int c = 1; c < 3; ++c) {
            if (variance(tip[c]) > variance(tip[c_best])) c_best = c;
        }
        if (variance(tip[c_best]) > 0.0) f_tip = dyn::dominant_frequency(t, tip[c_best], f_lo, f_hi, 4000);
        if (variance(psi) > 0.0) f_psi = dyn::dominant_frequency(t, psi, f_lo, f_hi, 4000);
    }
    const double f_ref = sc.reference == Reference::pluck ? pluck_frequency(sc) : kNaN;
    const double f_tor = std::sqrt(sc.law.GJ / sc.inertia.I_par) / (4.0 * sc.length);
    const double drift = dyn::relative_energy_drift(en);

    Table res({{"elements", "-"}, {"steps", "-"}, {"dt", "s"}, {"energy_initial", "J"}, {"energy_drift", "-"},
               {"tip_frequency", "Hz"}, {"reference_frequency", "Hz"}, {"twist_frequency", "Hz"},
               {"torsion_reference_frequency", "Hz"}});
    header_meta(res, sc, opt);
    const double steps = std::ceil(cfg.t_end / cfg.dt - 1e-9);
    res.add_row({double(sc.elements), steps, cfg.dt, en.front().total, drift, f_tip, f_ref, f_psi, f_tor});
    art.table("results.csv", res);

    art.report({{"mode", to_string(sc.mode)},
                {"summary",
                 {{"converged", true},
                  {"steps", steps},
                  {"samples", traj.size()},
                  {"energy_initial", en.front().total},
                  {"energy_drift", drift},
                  {"tip_frequency", num_json(f_tip)},
                  {"reference_frequency", num_json(f_ref)},
                  {"twist_frequency", num_json(f_psi)},
                  {"torsion_reference_frequency", f_tor},
                  {"tip", vec_json(traj.back().dofs.r.back())}}}});
    return out;
}

// ---- diagnostics -----------------------------------------------------------

RunOutcome run_holonomy(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const double a = sc.diagnostic.colatitude_deg * std::numbers::pi / 180.0;
    const int n = sc.diagnostic.samples;
    const double L = 1.0, w = 2.0 * std::numbers::pi / L, rho = std::sin(a) / w;
    frames::SampledCurve c;
    for (int i = 0; i <= n; ++i) {
        const double s = L * i / n, p = w * s;
        c.s.push_back(s);
        c.r.push_back(Vec3(rho * std::sin(p), -rho * std::cos(p), s * std::cos(a)));
        c.rp.push_back(Vec3(std::sin(a) * std::cos(p), std::sin(a) * std::sin(p), std::cos(a)));
        c.rpp.push_back(w * std::sin(a) * Vec3(-std::sin(p), std::cos(p), 0.0));
    }
    c.validate();
    const Vec3 u0 = Vec3(std::cos(a), 0.0, -std::sin(a));
    const frames::FrameField f = frames::bishop_transport(c, so3::Director(u0));
    const double hol = frames::holonomy(f);
    const double area = 2.0 * std::numbers::pi * (1.0 - std::cos(a));
    // Holonomy is defined modulo 2 pi.
    const double wrapped = std::remainder(hol - area, 2.0 * std::numbers::pi);
    const double drill = frames::accumulated_correction_angle(c, so3::Director(Vec3::UnitZ()), L);

    Table res({{"colatitude", "deg"}, {"samples", "-"}, {"holonomy", "rad"}, {"enclosed_area", "sr"},
               {"holonomy_error", "rad"}, {"drill_free_torsion", "rad"}, {"torsion_error", "rad"}});
    header_meta(res, sc, opt);
    res.add_row({sc.diagnostic.colatitude_deg, double(n), hol, area, std::abs(wrapped), drill,
                 std::abs(std::abs(drill) - area)});
    art.table("results.csv", res);
    art.report({{"mode", to_string(sc.mode)},
                {"summary",
                 {{"kind", "holonomy"},
                  {"holonomy", hol},
                  {"enclosed_area", area},
                  {"holonomy_error", std::abs(wrapped)},
                  {"drill_free_torsion", drill}}}});
    return {};
}

RunOutcome run_buckling(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const int K = std::max(1, opt.convergence);
    const double euler = oracle::cantilever_statics(oracle::CantileverLoad::buckling, 0.0,
                                                    std::min(sc.law.EI1, sc.law.EI2), sc.law.GJ, sc.length);
    struct Out {
        bool found = false;
        statics::BucklingResult res;
        std::string message;
    };
    std::vector<Out> outs = fan_out(K, opt.jobs, [&](int k) {
        const fem::Grid grid = fem::Grid::uniform(sc.length, level_elements(sc, k), sc.gauss_points);
        statics::BucklingOptions bo;
        bo.steps = sc.diagnostic.steps;
        Out o;
        try {
            o.res = statics::continuation_buckling(grid, sc.law, sc.diagnostic.load_min, sc.diagnostic.load_max,
                                                   sc.clamp, bo);
            o.found = true;
        } catch (const NotDetected& e) {
            o.message = e.what();
        }
        return o;
    });
    std::vector<std::array<double, 3>> rows;
    Table res({{"elements", "-"}, {"detected", "-"}, {"critical_load", "N"}, {"euler_load", "N"},
               {"relative_error", "-"}, {"observed_order", "-"}});
    header_meta(res, sc, opt);
    RunOutcome out;
    ordered_json lv = ordered_json::array();
    double prev = kNaN;
    for (int k = 0; k < K; ++k) {
        const Out& o = outs[k];
        const double err = o.found ? std::abs(o.res.critical_load / euler - 1.0) : kNaN;
        const double order = (prev > 0.0 && err > 0.0) ? std::log2(prev / err) : kNaN;
        prev = err;
        rows.push_back({double(level_elements(sc, k)), err, order});
        res.add_row({double(level_elements(sc, k)), o.found ? 1.0 : 0.0, o.found ? o.res.critical_load : kNaN,
                     euler, err, order});
        lv.push_back({{"elements", level_elements(sc, k)},
                      {"detected", o.found},
                      {"critical_load", num_json(o.found ? o.res.critical_load : kNaN)},
                      {"relative_error", num_json(err)},
                      {"observed_order", num_json(order)},
                      {"message", o.message}});
        if (!o.found && out.exit_code == kOk) {
            out.exit_code = kNonConvergence;
            out.message = o.message;
        }
    }
    if (opt.convergence > 0) print_convergence(rows);
    art.table("results.csv", res);
    art.report({{"mode", to_string(sc.mode)},
                {"summary", {{"kind", "buckling"}, {"euler_load", euler}, {"detected", out.exit_code == kOk}}},
                {"levels", lv}});
    return out;
}

RunOutcome run_mixed(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const fem::Grid grid = fem::Grid::uniform(sc.length, sc.elements, sc.gauss_points);
    statics::SolverOptions so = sc.solver;
    if (opt.deterministic) so.threads = 1;
    const statics::SolveReport rep = statics::solve_ti_static(fem::DofVector::straight(grid, sc.clamp), grid,
                                                              sc.law, sc.loads, sc.clamp, so);
    RunOutcome out;
    if (!rep.converged) {
        out.exit_code = kNonConvergence;
        out.message = rep.message;
        art.report({{"mode", to_string(sc.mode)}, {"summary", {{"converged", false}, {"message", rep.message}}}});
        return out;
    }
    const fem::DofVector lifted = statics::lift_bishop_composite(rep.state, grid, sc.clamp);
    const statics::LagrangeFields mu = statics::torsion_multiplier_from_twist(lifted, grid, sc.law);
    const statics::MixedResidualReport m = statics::mixed_residual_check(lifted, mu, grid, sc.law, sc.loads);
    Table res({{"elements", "-"}, {"force_general", "N"}, {"torsion_general", "N m"}, {"boundary_general", "N m"},
               {"force_mixed", "N"}, {"torsion_mixed", "N m"}, {"boundary_mixed", "N m"},
               {"difference", "N"}, {"constraint", "-"}});
    header_meta(res, sc, opt);
    res.add_row({double(sc.elements), m.force_general, m.torsion_general, m.boundary_general, m.force_mixed,
                 m.torsion_mixed, m.boundary_mixed, m.difference, m.constraint});
    art.table("results.csv", res);
    art.report({{"mode", to_string(sc.mode)},
                {"summary",
                 {{"kind", "mixed_residual"},
                  {"force_general", m.force_general},
                  {"torsion_general", m.torsion_general},
                  {"force_mixed", m.force_mixed},
                  {"torsion_mixed", m.torsion_mixed},
                  {"difference", m.difference}}}});
    return out;
}

// ---- oracles ---------------------------------------------------------------

RunOutcome run_oracle(const Scenario& sc, const RunOptions& opt, Artifacts& art) {
    const OracleRequest& r = sc.oracle;
    ordered_json summary = {{"kind", r.kind}};
    if (r.kind == "frequency_roots") {
        Table res({{"k", "-"}, {"beta_L", "-"}});
        header_meta(res, sc, opt);
        const std::vector<double> roots = oracle::frequency_roots(r.count);
        for (int k = 0; k < r.count; ++k) res.add_row({double(k + 1), roots[k]});
        summary["roots"] = roots;
        art.table("results.csv", res);
    } else if (r.kind == "rayleigh") {
        oracle::LinearBeamParams p = r.beam;
        p.L = sc.length;
        const oracle::ModalResult m = oracle::rayleigh_operator(p, r.count, r.elements, r.rotary_inertia);
        Table res({{"k", "-"}, {"omega", "rad/s"}, {"omega_euler_bernoulli", "rad/s"}});
        header_meta(res, sc, opt);
        for (int k = 0; k < r.count; ++k) {
            res.add_row({double(k + 1), m.omega[k], oracle::euler_bernoulli_omega(p, k + 1)});
        }
        summary["omega"] = m.omega;
        art.table("results.csv", res);
    } else {
        if (!sc.has_material) throw SchemaError("material", "missing required field");
        const LoadCase lc = sc.loads.effective();
        using oracle::CantileverLoad;
        const double EI = sc.law.EI1, L = sc.length;
        const double defl = oracle::cantilever_statics(CantileverLoad::tip_force, lc.tip_force.norm(), EI, sc.law.GJ, L);
        const double twist =
            oracle::cantilever_statics(CantileverLoad::tip_torque, lc.tip_tangent_moment, EI, sc.law.GJ, L);
        const double pcr = oracle::cantilever_statics(CantileverLoad::buckling, 0.0, EI, sc.law.GJ, L);
        const double kap =
            oracle::cantilever_statics(CantileverLoad::end_moment, lc.tip_moment.norm(), EI, sc.law.GJ, L);
        Table res({{"tip_deflection", "m"}, {"tip_twist", "rad"}, {"buckling_load", "N"}, {"arc_curvature", "1/m"}});
        header_meta(res, sc, opt);
        res.add_row({defl, twist, pcr, kap});
        summary["tip_deflection"] = defl;
        summary["tip_twist"] = twist;
        summary["buckling_load"] = pcr;
        summary["arc_curvature"] = kap;
        art.table("results.csv", res);
    }
    art.report({{"mode", to_string(sc.mode)}, {"summary", summary}});
    return {};
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const RunOptions& opt) {
    if (opt.jobs < 1) throw SchemaError("--jobs", "must be at least 1");
    if (opt.convergence < 0) throw SchemaError("--convergence", "must be non-negative");
    const bool refinable = sc.mode == Mode::static_ti || sc.mode == Mode::static_general ||
                           (sc.mode == Mode::diagnostic && sc.diagnostic.kind == "buckling");
    if (opt.convergence > 0 && !refinable) {
        throw SchemaError("--convergence", std::string("not supported for mode ") + to_string(sc.mode));
    }
    if (opt.convergence > 12) throw SchemaError("--convergence", "at most 12 levels");

    std::filesystem::create_directories(opt.out_dir);
    Artifacts art;
    art.dir = opt.out_dir;
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    switch (sc.mode) {
        case Mode::static_ti:
        case Mode::static_general: out = run_static(sc, opt, art); break;
        case Mode::dynamic_ti: out = run_dynamic(sc, opt, art); break;
        case Mode::diagnostic:
            if (sc.diagnostic.kind == "holonomy") out = run_holonomy(sc, opt, art);
            else if (sc.diagnostic.kind == "buckling") out = run_buckling(sc, opt, art);
            else out = run_mixed(sc, opt, art);
            break;
        case Mode::oracle: out = run_oracle(sc, opt, art); break;
    }
    out.files = art.files;

    out.files.push_back("report.json");
    ordered_json env = {{"generator", fmt::format("rodsim {}", kVersion)},
                        {"scenario", sc.name},
                        {"source", opt.scenario_label},
                        {"exit_code", out.exit_code},
                        {"status", out.exit_code == kOk ? "ok" : "non_convergence"},
                        {"message", out.message},
                        {"deterministic", opt.deterministic},
                        {"files", out.files}};
    if (!opt.deterministic) {
        env["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        env["finished_unix"] = static_cast<long long>(std::time(nullptr));
    }
    env.update(art.payload);
    std::ofstream f(opt.out_dir / "report.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (opt.out_dir / "report.json").string());
    f << env.dump(2) << '\n';
    return out;
}

}  // namespace rodsim::cli
