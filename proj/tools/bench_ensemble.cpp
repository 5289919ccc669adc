// Benchmark for the ensemble runner: integrates a batch of independent
// oscillator trajectories once serially and once with the threaded policy,
// reports wall times, and verifies the results are bitwise identical.
//
// gamma is small so that amplitudes stay macroscopic over the whole horizon;
// a deeply decayed state pushes the absolute solver tolerance below the
// round-off floor of the residual evaluation, which would abort the run.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "contactdg/ensemble.hpp"

using namespace contactdg;

int main(int argc, char** argv) {
    const int count = argc > 1 ? std::atoi(argv[1]) : 64;
    const int steps = argc > 2 ? std::atoi(argv[2]) : 2000;
    if (count < 1 || steps < 1) {
        std::cerr << "usage: bench_ensemble [trajectories] [steps]\n";
        return 2;
    }

    ModelSpec model = damped_harmonic_oscillator(0.01);
    Method method = method_from_name("dg:gonzalez");
    StepperConfig cfg;
    cfg.h = 0.1;

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    std::vector<Vec> starts(count);
    for (auto& x : starts) x = Vec{U(rng), U(rng), 0.0};

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto serial = run_ensemble(model, method, starts, cfg, steps, ExecutionPolicy::Serial);
    const auto t1 = clock::now();
    auto parallel = run_ensemble(model, method, starts, cfg, steps, ExecutionPolicy::Parallel);
    const auto t2 = clock::now();

    const double ms_serial = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double ms_parallel = std::chrono::duration<double, std::milli>(t2 - t1).count();

    int completed = 0;
    bool identical = true;
    for (int i = 0; i < count; ++i) {
        if (!serial[i].failure && !parallel[i].failure) ++completed;
        const int fail_serial = serial[i].failure ? serial[i].failure->step : -1;
        const int fail_parallel = parallel[i].failure ? parallel[i].failure->step : -1;
        if (serial[i].size() != parallel[i].size() || fail_serial != fail_parallel)
            identical = false;
        for (int k = 0; identical && k < serial[i].size(); ++k)
            identical = serial[i].states[k] == parallel[i].states[k];
        if (!identical) break;
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::cout << "trajectories: " << count << ", steps: " << steps << "\n";
    std::cout << "serial:   " << ms_serial << " ms\n";
    std::cout << "parallel: " << ms_parallel << " ms (" << threads << " threads, speedup "
              << (ms_parallel > 0.0 ? ms_serial / ms_parallel : 0.0) << "x)\n";
    std::cout << "completed: " << completed << "/" << count << "\n";
    std::cout << "results identical: " << (identical ? "yes" : "NO") << "\n";
    return (identical && completed == count) ? 0 : 1;
}
