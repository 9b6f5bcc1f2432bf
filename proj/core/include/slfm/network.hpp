#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "slfm/sphere.hpp"
#include "slfm/vec.hpp"

namespace slfm {

/// Which objective (and therefore which prior) a velocity field belongs to.
/// Linear fields start sampling from N(0, I); slerp fields from the uniform
/// sphere of radius `radius`.
enum class LossKind { Linear, Slerp };

std::string_view to_string(LossKind kind) noexcept;
LossKind parse_loss_kind(std::string_view name);

struct FieldSpec {
    std::size_t dim = 0;            // token dimension d
    std::size_t time_embed = 8;     // sinusoidal width, even
    std::size_t num_classes = 0;    // 0 means unconditional (cond must be 0)
    std::size_t cond_embed = 0;     // learned embedding width per class
    std::vector<std::size_t> hidden{64, 64};
    LossKind kind = LossKind::Slerp;
    double radius = 0.0;            // sphere radius for slerp fields; 0 selects sqrt(d)

    std::size_t input_width() const noexcept { return dim + time_embed + (num_classes > 0 ? cond_embed : 0); }
    /// [input_width, hidden..., dim]
    std::vector<std::size_t> layer_widths() const;
    double sphere_radius() const;
};

/// Fixed sin/cos features of t at frequencies pi * 2^k, k < width/2.
std::vector<double> time_embedding(double t, std::size_t width);

/// Intermediate values kept by a forward pass for reverse-mode differentiation.
struct ForwardCache {
    std::vector<std::vector<double>> activations;  // inputs to each layer
    std::vector<std::vector<double>> pre;          // affine outputs of each layer
    std::size_t cond = 0;
};

/// Feedforward velocity network v(z, t, cond): affine layers with SiLU between
/// them and a linear output. All parameters live in one flat vector laid out as
/// [W0, b0, W1, b1, ..., class embedding table], W row-major (out x in).
class VelocityField {
public:
    explicit VelocityField(FieldSpec spec);

    /// Scaled-normal weights (std 1/sqrt(fan_in)), zero biases, N(0, 1) embeddings.
    static VelocityField initialized(FieldSpec spec, Rng& rng);

    const FieldSpec& spec() const noexcept { return spec_; }
    std::size_t num_params() const noexcept { return params_.size(); }
    std::span<double> params() noexcept { return params_; }
    std::span<const double> params() const noexcept { return params_; }

    /// Throws DimensionMismatch, InvalidArgument for t outside [0, 1], and
    /// UnknownCondition for class ids the field does not know.
    Token forward(std::span<const double> z, double t, std::size_t cond = 0) const;
    Token forward(std::span<const double> z, double t, std::size_t cond, ForwardCache& cache) const;

    /// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(output).
    void backward(const ForwardCache& cache, std::span<const double> grad_out, std::span<double> grad) const;

private:
    struct LayerOffsets {
        std::size_t in;
        std::size_t out;
        std::size_t weight;
        std::size_t bias;
    };

    FieldSpec spec_;
    std::vector<LayerOffsets> layers_;
    std::size_t embed_offset_ = 0;
    std::vector<double> params_;
};

}  // namespace slfm
