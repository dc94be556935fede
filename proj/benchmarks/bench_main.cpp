#include <benchmark/benchmark.h>

#include "rodsim/dynamics.hpp"
#include "rodsim/so3.hpp"
#include "rodsim/static_solver.hpp"

using namespace rodsim;

namespace {

fem::DofVector bent(const fem::Grid& g) {
    fem::DofVector d = fem::DofVector::straight(g);
    for (int i = 0; i < g.nodes(); ++i) {
        const double s = g.s(i);
        d.r[i] += Vec3(0.1 * s * s, 0.05 * s * s * s, 0.0);
        d.t[i] += Vec3(0.2 * s, 0.15 * s * s, 0.0);
        d.psi[i] = 0.3 * s;
    }
    return d;
}

const rod::MaterialLaw kLaw = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);

}  // namespace

static void BM_ExpRodrigues(benchmark::State& st) {
    Vec3 th(0.3, -0.7, 1.1);
    for (auto _ : st) {
        benchmark::DoNotOptimize(so3::exp_rodrigues(th));
        th[0] += 1e-12;
    }
}
BENCHMARK(BM_ExpRodrigues);

static void BM_Dexp(benchmark::State& st) {
    const Vec3 th(0.3, -0.7, 1.1);
    for (auto _ : st) benchmark::DoNotOptimize(so3::dexp(th));
}
BENCHMARK(BM_Dexp);

static void BM_AssembleGradient(benchmark::State& st) {
    const fem::Grid g = fem::Grid::uniform(1.0, static_cast<int>(st.range(0)));
    const fem::DofVector d = bent(g);
    for (auto _ : st) benchmark::DoNotOptimize(fem::assemble_gradient(g, d, kLaw, {}));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_AssembleGradient)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oN);

static void BM_AssembleHessian(benchmark::State& st) {
    const fem::Grid g = fem::Grid::uniform(1.0, static_cast<int>(st.range(0)));
    const fem::DofVector d = bent(g);
    for (auto _ : st) benchmark::DoNotOptimize(fem::assemble_hessian(g, d, kLaw));
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_AssembleHessian)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oN);

static void BM_SolveTiCantilever(benchmark::State& st) {
    const fem::Grid g = fem::Grid::uniform(1.0, static_cast<int>(st.range(0)));
    LoadCase lc;
    lc.tip_force = Vec3(1.0, 0.0, 0.0);
    lc.tip_tangent_moment = 0.2;
    for (auto _ : st) benchmark::DoNotOptimize(statics::solve_ti_static(fem::DofVector::straight(g), g, kLaw, lc));
}
BENCHMARK(BM_SolveTiCantilever)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SolveGeneralCantilever(benchmark::State& st) {
    const fem::Grid g = fem::Grid::uniform(1.0, static_cast<int>(st.range(0)));
    LoadCase lc;
    lc.tip_force = Vec3(1.0, 0.0, 0.0);
    for (auto _ : st) {
        benchmark::DoNotOptimize(statics::solve_general_static(fem::DofVector::straight(g), g, kLaw, lc));
    }
}
BENCHMARK(BM_SolveGeneralCantilever)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MidpointStep(benchmark::State& st) {
    const fem::Grid g = fem::Grid::uniform(1.0, static_cast<int>(st.range(0)));
    dyn::RodProblem pb;
    pb.grid = &g;
    pb.law = kLaw;
    pb.inertia = rod::SectionInertia::transversely_isotropic(1.0, 1e-4, 1e-2);
    const dyn::DynamicState s = dyn::DynamicState::at_rest(bent(g));
    dyn::IntegratorConfig cfg;
    cfg.dt = 1e-3;
    for (auto _ : st) benchmark::DoNotOptimize(dyn::step_midpoint(pb, s, cfg));
}
BENCHMARK(BM_MidpointStep)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
