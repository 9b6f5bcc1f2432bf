#include "slfm/flow.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "slfm/errors.hpp"
#include "slfm/paths.hpp"

namespace slfm {

namespace {

// Shared kernel of loss_value/loss_and_grad. grad may be empty to skip backprop.
double evaluate(const VelocityField& field, std::span<const TrainingExample> batch, LossKind kind,
                std::span<double> grad) {
    if (batch.empty()) throw Error(ErrorKind::EmptyInput, "loss over an empty batch");
    const double radius = field.spec().sphere_radius();
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    CompensatedSum total;
    ForwardCache cache;
    for (const TrainingExample& ex : batch) {
        require_same_dim(ex.z0, ex.z1, "training example");
        Token residual;
        Token zt;
        if (kind == LossKind::Linear) {
            const PathPoint pt = linear_path(ex.z0, ex.z1, ex.t);
            residual = sub(field.forward(pt.z, ex.t, ex.cond, cache), pt.u);
        } else {
            if (!is_on_sphere(ex.z0, radius) || !is_on_sphere(ex.z1, radius)) {
                throw Error(ErrorKind::RadiusMismatch,
                            "slerp loss needs endpoints on the sphere of radius " + std::to_string(radius));
            }
            const PathPoint pt = slerp_path(SphereToken::certify(ex.z0, radius), SphereToken::certify(ex.z1, radius), ex.t);
            const SphereToken base = SphereToken::certify(pt.z, radius);
            const Token v = field.forward(pt.z, ex.t, ex.cond, cache);
            residual = sub(tangent_project(v, base).vector, pt.u);
            zt = pt.z;
        }
        total.add(norm_sq(residual) * inv_b);
        if (!grad.empty()) {
            // d/dv ‖Π v - Π u‖^2 = 2 Π^T (Π v - Π u); Π is symmetric.
            Token g = scaled(residual, 2.0 * inv_b);
            if (kind == LossKind::Slerp) {
                const double coef = dot(g, zt) / norm_sq(zt);
                axpy(-coef, zt, g);
            }
            field.backward(cache, g, grad);
        }
    }
    return total.value();
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

LossAndGrad loss_and_grad(const VelocityField& field, std::span<const TrainingExample> batch, LossKind kind) {
    LossAndGrad out;
    out.grad.assign(field.num_params(), 0.0);
    out.loss = evaluate(field, batch, kind, out.grad);
    return out;
}

double loss_value(const VelocityField& field, std::span<const TrainingExample> batch, LossKind kind) {
    return evaluate(field, batch, kind, {});
}

double shift_time(double u, double shift) {
    if (!(shift > 0.0)) throw Error(ErrorKind::InvalidArgument, "timestep shift must be positive");
    return shift * u / (1.0 + (shift - 1.0) * u);
}

double sample_time(Rng& rng, const TrainConfig& config) {
    double u;
    if (config.time_sampling == TimeSampling::Uniform) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        u = unif(rng);
    } else {
        std::normal_distribution<double> gauss(config.logit_mean, config.logit_std);
        u = sigmoid(gauss(rng));
    }
    return shift_time(u, config.shift);
}

SyntheticDataset::SyntheticDataset(std::size_t dim, double radius, std::vector<Token> centers,
                                   std::vector<double> spreads, std::vector<double> weights)
    : dim_(dim), radius_(radius), spreads_(std::move(spreads)), weights_(std::move(weights)) {
    if (dim < 2) throw Error(ErrorKind::InvalidArgument, "dataset needs d >= 2");
    if (centers.empty()) throw Error(ErrorKind::EmptyInput, "dataset needs at least one center");
    if (spreads_.size() != centers.size() || weights_.size() != centers.size()) {
        throw Error(ErrorKind::InvalidArgument, "centers, spreads and weights must have equal length");
    }
    double wsum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mixture weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "mixture weights must sum to 1");
    for (double s : spreads_) {
        if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "center spread must be positive");
    }
    for (Token& c : centers) {
        if (c.size() != dim) throw Error(ErrorKind::DimensionMismatch, "center dimension");
        centers_.push_back(radial_project(c, radius).values());
    }
}

SyntheticDataset SyntheticDataset::random(std::size_t dim, double radius, std::vector<double> weights, double spread,
                                          Rng& rng) {
    std::vector<Token> centers;
    for (std::size_t k = 0; k < weights.size(); ++k) centers.push_back(sample_uniform_sphere(dim, radius, rng).values());
    std::vector<double> spreads(weights.size(), spread);
    return SyntheticDataset(dim, radius, std::move(centers), std::move(spreads), std::move(weights));
}

SyntheticDataset::Draw SyntheticDataset::sample(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    std::size_t k = 0;
    double acc = weights_[0];
    while (k + 1 < weights_.size() && u >= acc) acc += weights_[++k];

    std::normal_distribution<double> gauss(0.0, 1.0);
    Token x = scaled(centers_[k], 1.0 / radius_);
    for (;;) {
        Token y = x;
        for (double& v : y) v += spreads_[k] * gauss(rng);
        if (norm(y) >= limits::kNormFloor) return Draw{radial_project(y, radius_).values(), k};
    }
}

std::size_t SyntheticDataset::nearest_center(std::span<const double> z) const {
    std::size_t best = 0;
    double best_dot = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centers_.size(); ++k) {
        const double c = dot(z, centers_[k]);
        if (c > best_dot) {
            best_dot = c;
            best = k;
        }
    }
    return best;
}

AdamW::AdamW(std::size_t n_params, double lr, double beta1, double beta2, double eps, double weight_decay)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), weight_decay_(weight_decay), m_(n_params, 0.0),
      v_(n_params, 0.0) {}

void AdamW::step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= lr_ * (mhat / (std::sqrt(vhat) + eps_) + weight_decay_ * params[i]);
    }
}

TrainResult train(VelocityField& field, const SyntheticDataset& dataset, const TrainConfig& config, Rng& rng) {
    const FieldSpec& spec = field.spec();
    if (dataset.dim() != spec.dim) throw Error(ErrorKind::DimensionMismatch, "dataset and field dimensions differ");
    if (config.loss != spec.kind) throw Error(ErrorKind::InvalidArgument, "config loss kind differs from the field's kind");
    if (config.batch_size == 0) throw Error(ErrorKind::InvalidArgument, "batch size must be positive");
    if (!(config.learning_rate >= 0.0)) throw Error(ErrorKind::InvalidArgument, "learning rate must be >= 0");
    if (!(config.shift > 0.0)) throw Error(ErrorKind::InvalidArgument, "timestep shift must be positive");
    if (config.loss == LossKind::Slerp && std::abs(dataset.radius() - spec.sphere_radius()) >
                                              limits::kOnSphereTol * spec.sphere_radius()) {
        throw Error(ErrorKind::RadiusMismatch, "dataset radius differs from the field's sphere radius");
    }

    AdamW opt(field.num_params(), config.learning_rate, config.beta1, config.beta2, config.adam_eps,
              config.weight_decay);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<TrainingExample> batch(config.batch_size);
    TrainResult result;
    result.loss_trace.reserve(config.steps);

    for (std::size_t step = 0; step < config.steps; ++step) {
        for (TrainingExample& ex : batch) {
            auto draw = dataset.sample(rng);
            ex.z1 = std::move(draw.z);
            ex.cond = spec.num_classes > 0 ? draw.center % spec.num_classes : 0;
            if (config.loss == LossKind::Slerp) {
                ex.z0 = sample_uniform_sphere(spec.dim, spec.sphere_radius(), rng).values();
            } else {
                ex.z0.resize(spec.dim);
                for (double& x : ex.z0) x = gauss(rng);
            }
            ex.t = sample_time(rng, config);
        }
        LossAndGrad lg = loss_and_grad(field, batch, config.loss);
        if (!std::isfinite(lg.loss)) {
            throw Error(ErrorKind::DivergenceDetected, "non-finite loss at step " + std::to_string(step));
        }
        result.loss_trace.push_back(lg.loss);
        const double gn = norm(lg.grad);
        if (config.grad_clip > 0.0 && gn > config.grad_clip) {
            const double s = config.grad_clip / gn;
            for (double& g : lg.grad) g *= s;
        }
        opt.step(field.params(), lg.grad);
    }
    return result;
}

std::vector<double> smooth(std::span<const double> values, std::size_t window) {
    if (window == 0) throw Error(ErrorKind::InvalidArgument, "smoothing window must be positive");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t lo = i + 1 > window ? i + 1 - window : 0;
        CompensatedSum s;
        for (std::size_t j = lo; j <= i; ++j) s.add(values[j]);
        out[i] = s.value() / static_cast<double>(i + 1 - lo);
    }
    return out;
}

std::string_view to_string(Sampler sampler) noexcept {
    switch (sampler) {
        case Sampler::Euler: return "euler";
        case Sampler::EulerProject: return "euler_project";
        case Sampler::ExpMap: return "expmap";
    }
    return "unknown";
}

Sampler parse_sampler(std::string_view name) {
    if (name == "euler") return Sampler::Euler;
    if (name == "euler_project" || name == "euler-project") return Sampler::EulerProject;
    if (name == "expmap" || name == "exp_map") return Sampler::ExpMap;
    throw Error(ErrorKind::InvalidArgument, "unknown sampler '" + std::string(name) + "'");
}

Token integrate(const VelocityFn& velocity, Token start, Sampler sampler, std::size_t nfe, double radius) {
    if (nfe < 1) throw Error(ErrorKind::InvalidArgument, "nfe must be >= 1");
    const double dt = 1.0 / static_cast<double>(nfe);
    if (sampler == Sampler::ExpMap) {
        SphereToken p = SphereToken::certify(std::move(start), radius);
        for (std::size_t k = 0; k < nfe; ++k) {
            const double t = static_cast<double>(k) * dt;
            TangentVector v = tangent_project(velocity(p.values(), t), p);
            for (double& x : v.vector) x *= dt;
            p = exp_map(v);
        }
        return p.values();
    }
    Token z = std::move(start);
    for (std::size_t k = 0; k < nfe; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Token v = velocity(z, t);
        require_same_dim(v, z, "sampler velocity");
        axpy(dt, v, z);
        if (sampler == Sampler::EulerProject) z = radial_project(z, radius).values();
    }
    return z;
}

SampleRun sample(const VelocityField& field, std::size_t n, Sampler sampler, std::size_t nfe, std::size_t cond,
                 Rng& rng) {
    const FieldSpec& spec = field.spec();
    const double radius = spec.sphere_radius();
    const VelocityFn velocity = [&](std::span<const double> z, double t) { return field.forward(z, t, cond); };
    std::normal_distribution<double> gauss(0.0, 1.0);
    SampleRun run{sampler, nfe, {}};
    run.outputs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Token start;
        if (spec.kind == LossKind::Slerp) {
            start = sample_uniform_sphere(spec.dim, radius, rng).values();
        } else {
            start.resize(spec.dim);
            for (double& x : start) x = gauss(rng);
            if (sampler != Sampler::Euler) start = radial_project(start, radius).values();
        }
        run.outputs.push_back(integrate(velocity, std::move(start), sampler, nfe, radius));
    }
    return run;
}

}  // namespace slfm
