// Microbenchmarks over the generated instance families.  Scales are
// approximate tuple counts; seeds are fixed so runs compare like to like.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "deltarep/oracles.hpp"
#include "deltarep/provenance.hpp"
#include "deltarep/repair.hpp"
#include "deltarep/solver.hpp"

using namespace deltarep;

namespace {

GeneratedInstance cascade(std::int64_t scale) {
    return generate_instance("cascade", static_cast<std::uint64_t>(scale), 1);
}

void end_cascade(benchmark::State& state) {
    auto gi = cascade(state.range(0));
    for (auto _ : state) {
        auto r = run_end(gi.program, gi.db);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gi.db.live_count()));
}

void stage_cascade(benchmark::State& state) {
    auto gi = cascade(state.range(0));
    for (auto _ : state) {
        auto r = run_stage(gi.program, gi.db);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gi.db.live_count()));
}

void step_cascade(benchmark::State& state) {
    auto gi = cascade(state.range(0));
    for (auto _ : state) {
        auto r = run_step_greedy(gi.program, gi.db);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gi.db.live_count()));
}

void independent_cascade(benchmark::State& state) {
    auto gi = cascade(state.range(0));
    for (auto _ : state) {
        auto r = run_independent(gi.program, gi.db);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gi.db.live_count()));
}

// The join-chain family stresses grounding: one rule joining three
// relations, so formula size grows with the join, not the tuple count.
void formula_join_chain(benchmark::State& state) {
    auto gi = generate_instance("join-chain", static_cast<std::uint64_t>(state.range(0)), 1);
    for (auto _ : state) {
        auto f = build_formula(gi.program, gi.db);
        benchmark::DoNotOptimize(f);
    }
}

void graph_join_chain(benchmark::State& state) {
    auto gi = generate_instance("join-chain", static_cast<std::uint64_t>(state.range(0)), 1);
    for (auto _ : state) {
        auto g = build_graph(gi.program, gi.db);
        benchmark::DoNotOptimize(g);
    }
}

// Solver in isolation, on the already-built cascade CNF (mostly unit
// propagation down the chain).
void solve_cascade_cnf(benchmark::State& state) {
    auto gi = cascade(state.range(0));
    auto tc = negate_to_cnf(build_formula(gi.program, gi.db));
    for (auto _ : state) {
        auto s = solve_min_ones(tc.cnf);
        benchmark::DoNotOptimize(s);
    }
    state.counters["vars"] = static_cast<double>(tc.cnf.var_count);
    state.counters["clauses"] = static_cast<double>(tc.cnf.clauses.size());
}

}  // namespace

BENCHMARK(end_cascade)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(stage_cascade)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(step_cascade)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(independent_cascade)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(formula_join_chain)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(graph_join_chain)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(solve_cascade_cnf)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
