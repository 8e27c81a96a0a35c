#include <benchmark/benchmark.h>

#include "qjump/analysis/dip.hpp"
#include "qjump/dense_backend.hpp"
#include "qjump/mps.hpp"
#include "qjump/rng.hpp"
#include "qjump/trajectory.hpp"

using namespace qjump;

namespace {

ModelConfig chain(int n) {
    ModelConfig c;
    c.n_sites = n;
    c.n_excitations = n / 4;
    c.strength = 0.5;
    return c;
}

}  // namespace

// One no-jump step of the dense backend, N = 8 ... 20.
static void BM_DenseStep(benchmark::State& state) {
    const DenseModel model(chain(static_cast<int>(state.range(0))));
    Rng rng(1);
    DenseState psi = random_sector_state(model.basis(), rng);
    for (auto _ : state) {
        psi = evolve_no_jump(psi, model.effective_hamiltonian(), 0.01);
        psi.normalize();
    }
    state.counters["dim"] = static_cast<double>(model.basis()->dimension());
}
BENCHMARK(BM_DenseStep)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_DenseHalfChainEntropy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DenseModel model(chain(n));
    Rng rng(2);
    const DenseState psi = random_sector_state(model.basis(), rng);
    const CutIndex& cut = model.cut_index(n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(entanglement_entropy(psi, cut));
}
BENCHMARK(BM_DenseHalfChainEntropy)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

// One second-order TEBD step from a state grown to the bond cap.
static void BM_MpsStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int chi = static_cast<int>(state.range(1));
    TrajectoryOptions o;
    o.backend = Backend::Mps;
    o.mps.trunc = Truncation{chi, 1e-12};
    const Propagators props(chain(n), o);
    auto stepper = props.make_stepper(std::nullopt);
    Rng rng(3);
    for (int i = 0; i < 400; ++i) trajectory_step(*stepper, rng, 0.01);
    for (auto _ : state) stepper->evolve();
}
BENCHMARK(BM_MpsStep)->Args({20, 30})->Args({40, 50})->Unit(benchmark::kMillisecond);

static void BM_DipStatistic(benchmark::State& state) {
    Rng rng(4);
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (auto& v : x) v = rng.uniform();
    for (auto _ : state) benchmark::DoNotOptimize(analysis::dip_statistic(x));
}
BENCHMARK(BM_DipStatistic)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
