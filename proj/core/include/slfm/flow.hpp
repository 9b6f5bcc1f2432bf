#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "slfm/network.hpp"
#include "slfm/sphere.hpp"
#include "slfm/vec.hpp"

namespace slfm {

/// One supervised sample for the flow-matching objective.
struct TrainingExample {
    Token z0;  // noise endpoint
    Token z1;  // data endpoint
    double t;
    std::size_t cond = 0;
};

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Batch mean of ‖v - u_t‖^2 (linear) or ‖Π v - Π u_t‖^2 (slerp), with the
/// exact parameter gradient. For the slerp objective the projection of the
/// model output is differentiated; the target's projection is constant.
/// Slerp requires both endpoints of every example on the field's sphere radius
/// (RadiusMismatch otherwise).
LossAndGrad loss_and_grad(const VelocityField& field, std::span<const TrainingExample> batch, LossKind kind);
double loss_value(const VelocityField& field, std::span<const TrainingExample> batch, LossKind kind);

enum class TimeSampling { Uniform, LogitNormal };

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 64;
    std::size_t steps = 2000;
    TimeSampling time_sampling = TimeSampling::LogitNormal;
    double logit_mean = 0.0;
    double logit_std = 1.0;
    double shift = 1.0;
    LossKind loss = LossKind::Slerp;
    std::uint64_t seed = 0;
    double weight_decay = 0.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double grad_clip = 1.0;
};

/// s u / (1 + (s - 1) u). Monotone on [0, 1] for s > 0, identity at s = 1.
double shift_time(double u, double shift);

/// Draws u (uniform or logit-normal) and applies the timestep shift.
double sample_time(Rng& rng, const TrainConfig& config);

/// Mixture of projected Gaussians on S^{d-1}(R): pick center k with
/// probability weights[k], perturb its unit direction by spread[k] * N(0, I),
/// project back to radius R.
class SyntheticDataset {
public:
    SyntheticDataset(std::size_t dim, double radius, std::vector<Token> centers, std::vector<double> spreads,
                     std::vector<double> weights);

    /// k centers drawn uniformly on the sphere, common spread.
    static SyntheticDataset random(std::size_t dim, double radius, std::vector<double> weights, double spread,
                                   Rng& rng);

    struct Draw {
        Token z;
        std::size_t center;
    };
    Draw sample(Rng& rng) const;

    /// Index of the center with the largest cosine to z.
    std::size_t nearest_center(std::span<const double> z) const;

    std::size_t dim() const noexcept { return dim_; }
    double radius() const noexcept { return radius_; }
    const std::vector<Token>& centers() const noexcept { return centers_; }
    const std::vector<double>& spreads() const noexcept { return spreads_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::size_t dim_;
    double radius_;
    std::vector<Token> centers_;
    std::vector<double> spreads_;
    std::vector<double> weights_;
};

/// Decoupled-weight-decay Adam.
class AdamW {
public:
    AdamW(std::size_t n_params, double lr, double beta1, double beta2, double eps, double weight_decay);
    void step(std::span<double> params, std::span<const double> grad);

private:
    double lr_, beta1_, beta2_, eps_, weight_decay_;
    std::size_t t_ = 0;
    std::vector<double> m_, v_;
};

struct TrainResult {
    std::vector<double> loss_trace;  // one entry per step, pre-update batch loss
};

/// Mini-batch training. Noise endpoints come from the field's prior, data
/// endpoints and class ids (when the field is conditional) from the dataset.
/// Gradients are clipped to global norm config.grad_clip. Deterministic given
/// the rng state. Throws DivergenceDetected on a non-finite loss.
TrainResult train(VelocityField& field, const SyntheticDataset& dataset, const TrainConfig& config, Rng& rng);

/// Trailing moving average with the given window (shorter at the start).
std::vector<double> smooth(std::span<const double> values, std::size_t window);

enum class Sampler { Euler, EulerProject, ExpMap };

std::string_view to_string(Sampler sampler) noexcept;
Sampler parse_sampler(std::string_view name);

struct SampleRun {
    Sampler sampler;
    std::size_t nfe;
    std::vector<Token> outputs;
};

using VelocityFn = std::function<Token(std::span<const double> z, double t)>;

/// Integrates one chain from `start` over the uniform grid t_k = k / nfe.
///   Euler          z += dt v
///   EulerProject   z = R (z + dt v) / ‖z + dt v‖
///   ExpMap         z = exp_z(dt Π_z v)
Token integrate(const VelocityFn& velocity, Token start, Sampler sampler, std::size_t nfe, double radius);

/// Draws n chains from the field's prior (Gaussian for linear fields, uniform
/// sphere for slerp fields; spherical samplers project a Gaussian start onto
/// the sphere) and integrates each.
SampleRun sample(const VelocityField& field, std::size_t n, Sampler sampler, std::size_t nfe, std::size_t cond,
                 Rng& rng);

}  // namespace slfm
