#include "contactdg/ensemble.hpp"

namespace contactdg {

std::vector<Trajectory> run_ensemble(const ModelSpec& model, const Method& method,
                                     const std::vector<Vec>& initial_states,
                                     const StepperConfig& cfg, int n_steps,
                                     ExecutionPolicy policy) {
    const int count = static_cast<int>(initial_states.size());
    std::vector<Trajectory> out(initial_states.size());
    if (policy == ExecutionPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < count; ++i)
            out[i] = simulate(model, method, initial_states[i], cfg, n_steps);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out[i] = simulate(model, method, initial_states[i], cfg, n_steps);
    return out;
}

bool parallel_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace contactdg
