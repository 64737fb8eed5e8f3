#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sird/channel_objective.hpp"
#include "sird/info.hpp"
#include "sird/joint_pmf.hpp"
#include "sird/simplex_opt.hpp"

using namespace sird;

namespace {

std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) s += (v = e(rng));
    for (auto& v : p) v /= s;
    return p;
}

JointPMF bench_joint() {
    std::mt19937_64 rng(1);
    return JointPMF({Alphabet::indexed("X", 4), Alphabet::indexed("Y1", 3),
                     Alphabet::indexed("Y2", 3)},
                    random_pmf(rng, 36));
}

void BM_entropy(benchmark::State& state) {
    JointPMF j = bench_joint();
    for (auto _ : state) benchmark::DoNotOptimize(entropy(j, {"X", "Y1"}));
}
BENCHMARK(BM_entropy);

void BM_cond_mutual_info(benchmark::State& state) {
    JointPMF j = bench_joint();
    for (auto _ : state) benchmark::DoNotOptimize(cond_mutual_info(j, {"X"}, {"Y1"}, {"Y2"}));
}
BENCHMARK(BM_cond_mutual_info);

void BM_objective_gradient(benchmark::State& state) {
    JointPMF j = bench_joint();
    ChannelObjective co(j, {"X"}, 5);
    co.add_cmi_term(1.0, {"X"}, {"Y2"}, identity_proj(5));
    std::mt19937_64 rng(2);
    std::vector<double> pt(4 * 5), grad(4 * 5);
    for (std::size_t s = 0; s < 4; ++s) {
        auto slice = random_pmf(rng, 5);
        for (std::size_t k = 0; k < 5; ++k) pt[s * 5 + k] = slice[k];
    }
    for (auto _ : state) {
        co.gradient(pt, grad);
        benchmark::DoNotOptimize(grad.data());
    }
}
BENCHMARK(BM_objective_gradient);

void BM_minimize_small(benchmark::State& state) {
    JointPMF j = bench_joint();
    ChannelObjective co(j, {"X"}, 3);
    co.add_cmi_term(1.0, {"X"}, {"Y2"}, identity_proj(3));
    Objective obj;
    obj.value = [&](std::span<const double> p) { return co.value(p); };
    obj.gradient = [&](std::span<const double> p, std::span<double> g) { co.gradient(p, g); };
    OptOptions opts;
    opts.restarts = 2;
    opts.max_iters = 200;
    opts.enumeration_budget = 0;
    for (auto _ : state) {
        OptResult r = minimize(co.space(), obj, opts);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_minimize_small);

} // namespace

BENCHMARK_MAIN();
