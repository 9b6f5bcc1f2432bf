#include "slfm/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slfm/errors.hpp"

namespace slfm {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double silu(double x) { return x * sigmoid(x); }

double silu_grad(double x) {
    const double s = sigmoid(x);
    return s * (1.0 + x * (1.0 - s));
}

}  // namespace

std::string_view to_string(LossKind kind) noexcept { return kind == LossKind::Linear ? "linear" : "slerp"; }

LossKind parse_loss_kind(std::string_view name) {
    if (name == "linear") return LossKind::Linear;
    if (name == "slerp") return LossKind::Slerp;
    throw Error(ErrorKind::InvalidArgument, "unknown loss kind '" + std::string(name) + "'");
}

std::vector<std::size_t> FieldSpec::layer_widths() const {
    std::vector<std::size_t> widths{input_width()};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(dim);
    return widths;
}

double FieldSpec::sphere_radius() const { return radius > 0.0 ? radius : std::sqrt(static_cast<double>(dim)); }

std::vector<double> time_embedding(double t, std::size_t width) {
    const std::size_t half = width / 2;
    std::vector<double> out(width);
    double freq = std::numbers::pi;
    for (std::size_t k = 0; k < half; ++k) {
        out[k] = std::sin(freq * t);
        out[half + k] = std::cos(freq * t);
        freq *= 2.0;
    }
    return out;
}

VelocityField::VelocityField(FieldSpec spec) : spec_(std::move(spec)) {
    if (spec_.dim < 1) throw Error(ErrorKind::InvalidArgument, "velocity field needs dim >= 1");
    if (spec_.time_embed % 2 != 0) throw Error(ErrorKind::InvalidArgument, "time embedding width must be even");
    if (spec_.num_classes > 0 && spec_.cond_embed == 0) {
        throw Error(ErrorKind::InvalidArgument, "conditional field needs a nonzero condition embedding width");
    }
    for (std::size_t h : spec_.hidden) {
        if (h == 0) throw Error(ErrorKind::InvalidArgument, "hidden widths must be positive");
    }
    const auto widths = spec_.layer_widths();
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        LayerOffsets lo{widths[l], widths[l + 1], offset, offset + widths[l] * widths[l + 1]};
        offset = lo.bias + lo.out;
        layers_.push_back(lo);
    }
    embed_offset_ = offset;
    offset += spec_.num_classes * spec_.cond_embed;
    params_.assign(offset, 0.0);
}

VelocityField VelocityField::initialized(FieldSpec spec, Rng& rng) {
    VelocityField field(std::move(spec));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& lo : field.layers_) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(lo.in));
        for (std::size_t i = 0; i < lo.in * lo.out; ++i) field.params_[lo.weight + i] = scale * gauss(rng);
    }
    for (std::size_t i = field.embed_offset_; i < field.params_.size(); ++i) field.params_[i] = gauss(rng);
    return field;
}

Token VelocityField::forward(std::span<const double> z, double t, std::size_t cond) const {
    ForwardCache cache;
    return forward(z, t, cond, cache);
}

Token VelocityField::forward(std::span<const double> z, double t, std::size_t cond, ForwardCache& cache) const {
    if (z.size() != spec_.dim) {
        throw Error(ErrorKind::DimensionMismatch,
                    "field expects d = " + std::to_string(spec_.dim) + ", got " + std::to_string(z.size()));
    }
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidArgument, "field time must lie in [0, 1]");
    const std::size_t classes = spec_.num_classes;
    if ((classes == 0 && cond != 0) || (classes > 0 && cond >= classes)) {
        throw Error(ErrorKind::UnknownCondition, "condition id " + std::to_string(cond) + " not in [0, " +
                                                     std::to_string(std::max<std::size_t>(classes, 1)) + ")");
    }

    std::vector<double> x(z.begin(), z.end());
    const auto temb = time_embedding(t, spec_.time_embed);
    x.insert(x.end(), temb.begin(), temb.end());
    if (classes > 0) {
        const double* row = params_.data() + embed_offset_ + cond * spec_.cond_embed;
        x.insert(x.end(), row, row + spec_.cond_embed);
    }

    cache.activations.clear();
    cache.pre.clear();
    cache.cond = cond;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& lo = layers_[l];
        std::vector<double> y(lo.out);
        for (std::size_t o = 0; o < lo.out; ++o) {
            const double* w = params_.data() + lo.weight + o * lo.in;
            double acc = params_[lo.bias + o];
            for (std::size_t i = 0; i < lo.in; ++i) acc += w[i] * x[i];
            y[o] = acc;
        }
        cache.activations.push_back(std::move(x));
        cache.pre.push_back(y);
        if (l + 1 < layers_.size()) {
            for (double& v : y) v = silu(v);
        }
        x = std::move(y);
    }
    return x;
}

void VelocityField::backward(const ForwardCache& cache, std::span<const double> grad_out,
                             std::span<double> grad) const {
    if (grad.size() != params_.size()) throw Error(ErrorKind::DimensionMismatch, "gradient buffer size");
    std::vector<double> g(grad_out.begin(), grad_out.end());
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const auto& lo = layers_[l];
        const auto& pre = cache.pre[l];
        const auto& in = cache.activations[l];
        if (l + 1 < layers_.size()) {
            for (std::size_t o = 0; o < lo.out; ++o) g[o] *= silu_grad(pre[o]);
        }
        std::vector<double> g_in(lo.in, 0.0);
        for (std::size_t o = 0; o < lo.out; ++o) {
            const double go = g[o];
            double* dw = grad.data() + lo.weight + o * lo.in;
            const double* w = params_.data() + lo.weight + o * lo.in;
            for (std::size_t i = 0; i < lo.in; ++i) {
                dw[i] += go * in[i];
                g_in[i] += w[i] * go;
            }
            grad[lo.bias + o] += go;
        }
        g = std::move(g_in);
    }
    if (spec_.num_classes > 0) {
        const std::size_t start = spec_.dim + spec_.time_embed;
        double* row = grad.data() + embed_offset_ + cache.cond * spec_.cond_embed;
        for (std::size_t k = 0; k < spec_.cond_embed; ++k) row[k] += g[start + k];
    }
}

}  // namespace slfm
