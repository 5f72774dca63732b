#pragma once

#include <cstdint>

#include "fnlc/channel/link.hpp"
#include "fnlc/channel/waveform.hpp"

namespace fnlc {

struct PropagationStats {
    long total_steps = 0;
    double min_step_km = 0.0;
    double max_step_km = 0.0;
};

// Forward Manakov propagation over the whole link: symmetric split-step with
// loss folded into the linear half-steps, nonlinear phase weighted by the
// exact effective length of each step, adaptive step size bounded by the
// configured peak nonlinear phase, lumped amplification plus ASE per span.
PropagationStats propagate(DualPolWave& w, const LinkConfig& link,
                           std::uint64_t noise_seed);

// Digital back-propagation: inverts the spans in reverse order with a fixed
// number of uniform steps per span and nonlinearity scaled by xi.
void backpropagate(DualPolWave& w, const LinkConfig& link, int steps_per_span,
                   double xi);

}  // namespace fnlc
