#pragma once

#include <functional>
#include <vector>

#include "c2l/common.hpp"

namespace c2l {

// Precomputed noise schedule tables. Immutable after construction and safe
// to share across threads.
struct DiffusionSchedule {
    int num_timesteps = 0;
    VecX betas;
    VecX alphas_cumprod;
    VecX posterior_mean_coef1;  // weight on predicted x0
    VecX posterior_mean_coef2;  // weight on x_t
    VecX posterior_variance;
    std::vector<int> timestep_map;  // identity when not respaced
};

// Cosine schedule: alpha_bar(t) = f(t)/f(0), f(t) = cos^2(((t/T + s)/(1 + s)) * pi/2),
// s = 0.008, betas clipped to <= 0.999.
DiffusionSchedule make_cosine_schedule(int num_timesteps);

// sqrt(abar_t) * x0 + sqrt(1 - abar_t) * noise
VecX q_sample(const VecX& x0, int t, const VecX& noise, const DiffusionSchedule& schedule);

// One reverse step from the DDPM posterior q(x_{t-1} | x_t, x0). The t=0 step
// is deterministic regardless of rng_noise.
VecX posterior_step(const VecX& x0_hat, const VecX& x_t, int t,
                    const DiffusionSchedule& schedule, const VecX& rng_noise);

// Classifier-free guidance on the x0 prediction. No clipping or
// renormalization of the result.
VecX guided_prediction(const VecX& pred_cond, const VecX& pred_uncond, Scalar scale);

// Subsequence schedule over num_steps evenly spaced original timesteps
// (floor interpolation, last timestep always retained). Retained alpha_bar
// values match the original; betas are recomputed for the subsequence.
DiffusionSchedule respace(const DiffusionSchedule& schedule, int num_steps);

// x0-predicting denoiser: (x_t, original_timestep, cond, cond_mask) -> x0_hat.
using DenoiserFn = std::function<VecX(const VecX&, int, const VecX&, bool)>;

// Full reverse diffusion from x_T ~ N(0, I) down to t=0, applying guidance at
// every step. Deterministic given the rng stream. The cond vector is passed
// through for the conditional branch; the unconditional branch receives zeros
// with cond_mask=false.
VecX sample_loop(const DenoiserFn& denoiser, const VecX& cond,
                 const DiffusionSchedule& schedule, Scalar guidance_scale,
                 Index dim, Rng& rng);

}  // namespace c2l
