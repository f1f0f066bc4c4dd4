#include "c2l/diffusion.hpp"

#include <cmath>
#include <string>

namespace c2l {

namespace {

// Fills the posterior tables from betas / alphas_cumprod. alpha_bar_{-1} := 1.
void fill_posterior(DiffusionSchedule& s) {
    const int T = s.num_timesteps;
    s.posterior_mean_coef1.resize(T);
    s.posterior_mean_coef2.resize(T);
    s.posterior_variance.resize(T);
    for (int t = 0; t < T; ++t) {
        const Scalar abar = s.alphas_cumprod[t];
        const Scalar abar_prev = t > 0 ? s.alphas_cumprod[t - 1] : 1.0;
        const Scalar beta = s.betas[t];
        const Scalar alpha = 1.0 - beta;
        const Scalar denom = 1.0 - abar;
        s.posterior_mean_coef1[t] = beta * std::sqrt(abar_prev) / denom;
        s.posterior_mean_coef2[t] = (1.0 - abar_prev) * std::sqrt(alpha) / denom;
        s.posterior_variance[t] = beta * (1.0 - abar_prev) / denom;
    }
    // t=0 variance is zero in closed form; reuse t=1 for log-variance
    // stability. The t=0 step adds no noise regardless.
    if (T > 1) s.posterior_variance[0] = s.posterior_variance[1];
}

void check_timestep(int t, const DiffusionSchedule& s, const char* op) {
    if (t < 0 || t >= s.num_timesteps)
        throw std::invalid_argument(std::string(op) + ": timestep " + std::to_string(t) +
                                    " out of range [0, " + std::to_string(s.num_timesteps) + ")");
}

}  // namespace

DiffusionSchedule make_cosine_schedule(int num_timesteps) {
    if (num_timesteps < 1)
        throw std::invalid_argument("make_cosine_schedule: num_timesteps must be >= 1");
    const int T = num_timesteps;
    const Scalar s = 0.008;
    auto f = [&](Scalar t) {
        const Scalar x = (t / T + s) / (1.0 + s) * (M_PI / 2.0);
        const Scalar c = std::cos(x);
        return c * c;
    };
    DiffusionSchedule sched;
    sched.num_timesteps = T;
    sched.betas.resize(T);
    sched.alphas_cumprod.resize(T);
    Scalar abar = 1.0;
    for (int t = 0; t < T; ++t) {
        const Scalar beta =
            std::min<Scalar>(1.0 - f(static_cast<Scalar>(t) + 1.0) / f(static_cast<Scalar>(t)), 0.999);
        sched.betas[t] = beta;
        abar *= 1.0 - beta;
        sched.alphas_cumprod[t] = abar;
    }
    sched.timestep_map.resize(T);
    for (int t = 0; t < T; ++t) sched.timestep_map[t] = t;
    fill_posterior(sched);
    return sched;
}

VecX q_sample(const VecX& x0, int t, const VecX& noise, const DiffusionSchedule& schedule) {
    check_timestep(t, schedule, "q_sample");
    const Scalar abar = schedule.alphas_cumprod[t];
    return std::sqrt(abar) * x0 + std::sqrt(1.0 - abar) * noise;
}

VecX posterior_step(const VecX& x0_hat, const VecX& x_t, int t,
                    const DiffusionSchedule& schedule, const VecX& rng_noise) {
    check_timestep(t, schedule, "posterior_step");
    VecX mean = schedule.posterior_mean_coef1[t] * x0_hat + schedule.posterior_mean_coef2[t] * x_t;
    if (t == 0) return mean;
    return mean + std::sqrt(schedule.posterior_variance[t]) * rng_noise;
}

VecX guided_prediction(const VecX& pred_cond, const VecX& pred_uncond, Scalar scale) {
    if (pred_cond.size() != pred_uncond.size())
        throw std::invalid_argument("guided_prediction: dimension mismatch");
    return pred_uncond + scale * (pred_cond - pred_uncond);
}

DiffusionSchedule respace(const DiffusionSchedule& schedule, int num_steps) {
    const int T = schedule.num_timesteps;
    if (num_steps < 1 || num_steps > T)
        throw std::invalid_argument("respace: num_steps out of range [1, T]");
    DiffusionSchedule out;
    out.num_timesteps = num_steps;
    out.timestep_map.resize(num_steps);
    if (num_steps == 1) {
        out.timestep_map[0] = T - 1;
    } else {
        for (int j = 0; j < num_steps; ++j)
            out.timestep_map[j] = static_cast<int>(
                static_cast<int64_t>(j) * (T - 1) / (num_steps - 1));
    }
    out.betas.resize(num_steps);
    out.alphas_cumprod.resize(num_steps);
    Scalar abar_prev = 1.0;
    for (int j = 0; j < num_steps; ++j) {
        const Scalar abar = schedule.alphas_cumprod[out.timestep_map[j]];
        out.alphas_cumprod[j] = abar;
        out.betas[j] = 1.0 - abar / abar_prev;
        abar_prev = abar;
    }
    fill_posterior(out);
    // respacing an already-respaced schedule must compose the maps
    for (int j = 0; j < num_steps; ++j)
        out.timestep_map[j] = schedule.timestep_map[out.timestep_map[j]];
    return out;
}

VecX sample_loop(const DenoiserFn& denoiser, const VecX& cond,
                 const DiffusionSchedule& schedule, Scalar guidance_scale,
                 Index dim, Rng& rng) {
    VecX x = rng.normal_vec(dim);
    const VecX null_cond = VecX::Zero(cond.size());
    for (int j = schedule.num_timesteps - 1; j >= 0; --j) {
        const int t_orig = schedule.timestep_map[j];
        const VecX pred_cond = denoiser(x, t_orig, cond, true);
        const VecX pred_uncond = denoiser(x, t_orig, null_cond, false);
        const VecX x0_hat = guided_prediction(pred_cond, pred_uncond, guidance_scale);
        if (!x0_hat.allFinite())
            throw NumericError("sample_loop: non-finite denoiser output at timestep " +
                               std::to_string(t_orig));
        const VecX noise = j > 0 ? rng.normal_vec(dim) : VecX::Zero(dim);
        x = posterior_step(x0_hat, x, j, schedule, noise);
    }
    return x;
}

}  // namespace c2l
