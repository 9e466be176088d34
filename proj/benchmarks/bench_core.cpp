#include <benchmark/benchmark.h>

#include "mobring/hermitian_eigen.hpp"
#include "mobring/perturbation.hpp"
#include "mobring/propagator.hpp"
#include "mobring/ring_model.hpp"
#include "mobring/system_model.hpp"

using namespace mobring;

namespace {

SystemSpec ring_system(int n) {
    SystemSpec s;
    s.ring = {n, 1.0, 0.3, Boundary::Moebius};
    return s;
}

void BM_ModeTable(benchmark::State& state) {
    const RingSpec ring{static_cast<int>(state.range(0)), 1.0, 0.5, Boundary::Moebius};
    for (auto _ : state) benchmark::DoNotOptimize(mode_table(ring));
    state.SetComplexityN(state.range(0));
}

void BM_HermitianEigen(benchmark::State& state) {
    const CMatrix h = site_hamiltonian({static_cast<int>(state.range(0)), 1.0, 0.3, Boundary::Moebius});
    for (auto _ : state) benchmark::DoNotOptimize(dense_hermitian_eigenvalues(h));
}

void BM_FixedStep(benchmark::State& state) {
    const EffectiveGenerator g = assemble_momentum_generator(ring_system(static_cast<int>(state.range(0))));
    const AmplitudeState psi0 = photon_initial_state(g);
    PropagationConfig cfg;
    cfg.t_max = 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(integrate_fixed_step(g, psi0, cfg, cfg.step_dt, 1 << 20));
}

void BM_TransferEfficiency(benchmark::State& state) {
    const EffectiveGenerator g = assemble_momentum_generator(ring_system(8));
    for (auto _ : state) benchmark::DoNotOptimize(transfer_efficiency(g, {}));
}

void BM_Perturbative(benchmark::State& state) {
    SystemSpec s = ring_system(static_cast<int>(state.range(0)));
    s.photon_omega = -8.0;
    for (auto _ : state) {
        const PerturbationSolution sol = solve_perturbation(s);
        benchmark::DoNotOptimize(perturbative_efficiency(sol, s.charge_sep_gamma));
    }
}

}  // namespace

BENCHMARK(BM_ModeTable)->RangeMultiplier(4)->Range(8, 2048)->Complexity();
BENCHMARK(BM_HermitianEigen)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FixedStep)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransferEfficiency)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Perturbative)->Arg(8)->Arg(200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
