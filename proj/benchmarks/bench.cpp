#include <benchmark/benchmark.h>

#include "pssmfa/bounds.hpp"

using namespace pssmfa;

namespace {

YoungDiagram rectangle(int n, int k) {
    return YoungDiagram(std::vector<int>(static_cast<std::size_t>(k), n / k));
}

void BM_EnumerateDiagrams(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_diagrams(n, n));
}
BENCHMARK(BM_EnumerateDiagrams)->Arg(10)->Arg(20)->Arg(40);

void BM_ExpandBasisElement(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const YoungDiagram y = rectangle(6, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(expand_basis_element(y, d, OracleBudget{1u << 20}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExpandBasisElement)->Arg(4)->Arg(6)->Arg(8);

void BM_PartialTrace(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const DenseState s = expand_basis_element(rectangle(6, 2), d, OracleBudget{1u << 20});
    for (auto _ : state) benchmark::DoNotOptimize(partial_trace(s, 2, OracleBudget{1u << 20}));
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(6)->Arg(8);

void BM_FidelityOracle(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const PSSState psi = PSSState::single(rectangle(6, 2), d);
    for (auto _ : state)
        benchmark::DoNotOptimize(mfa_fidelity_oracle(psi, OracleBudget{1u << 20}));
}
BENCHMARK(BM_FidelityOracle)->Arg(4)->Arg(6)->Arg(8);

void BM_FidelityDense(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ExactRhoParams p = rectangular_rho_params(6, 2, d);
    const Rho1Params p1 = p.rho1();
    const Rho2Params p2 = p.rho2();
    for (auto _ : state) benchmark::DoNotOptimize(mfa_fidelity_dense(p1, p2));
}
BENCHMARK(BM_FidelityDense)->Arg(4)->Arg(8)->Arg(16);

// the sector route is dimension-independent; the dense route above is d^6
void BM_FidelityBlocks(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const ExactRhoParams p = rectangular_rho_params(6, 2, d);
    const Rho1Params p1 = p.rho1();
    const Rho2Params p2 = p.rho2();
    for (auto _ : state) benchmark::DoNotOptimize(mfa_fidelity_params(p1, p2));
}
BENCHMARK(BM_FidelityBlocks)->Arg(4)->Arg(16)->Arg(256)->Arg(4096);

void BM_OverlapCountClosed(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const YoungDiagram y = rectangle(8, 4);
    const std::vector<int> row{0, 1}, col{0, 2};
    for (auto _ : state) benchmark::DoNotOptimize(overlap_count(y, y, d, row, col));
}
BENCHMARK(BM_OverlapCountClosed)->Arg(8)->Arg(64)->Arg(512);

void BM_OverlapCountExhaustive(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const YoungDiagram y = rectangle(6, 2);
    const std::vector<int> row{0, 1}, col{0, 2};
    for (auto _ : state)
        benchmark::DoNotOptimize(exhaustive_overlap_count(y, y, d, row, col));
}
BENCHMARK(BM_OverlapCountExhaustive)->Arg(3)->Arg(4)->Arg(5);

void BM_DiagramParams(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const YoungDiagram y = parse_diagram("4,3,2,2");
    for (auto _ : state) benchmark::DoNotOptimize(diagram_rho_params(y, d));
}
BENCHMARK(BM_DiagramParams)->Arg(8)->Arg(32)->Arg(128);

} // namespace

BENCHMARK_MAIN();
