#pragma once

#include <vector>

#include "contactdg/integrators.hpp"

namespace contactdg {

enum class ExecutionPolicy { Serial, Parallel };

/**
 * Integrate many independent trajectories from a list of initial states.
 * Each trajectory is sequential; with ExecutionPolicy::Parallel the set is
 * distributed over OpenMP threads. Results are deterministic and identical
 * between policies (output slot i always belongs to initial state i, and
 * stepping involves no cross-trajectory state).
 */
std::vector<Trajectory> run_ensemble(const ModelSpec& model, const Method& method,
                                     const std::vector<Vec>& initial_states,
                                     const StepperConfig& cfg, int n_steps,
                                     ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// True when the library was compiled with OpenMP; Parallel silently
/// degrades to Serial otherwise.
bool parallel_enabled();

}  // namespace contactdg
