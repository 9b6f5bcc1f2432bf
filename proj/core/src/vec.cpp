#include "slfm/vec.hpp"

#include <cmath>
#include <string>

#include "slfm/errors.hpp"

namespace slfm {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NearZeroNorm: return "NearZeroNorm";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::RadiusMismatch: return "RadiusMismatch";
        case ErrorKind::NotTangent: return "NotTangent";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::DegenerateShell: return "DegenerateShell";
        case ErrorKind::UnknownCondition: return "UnknownCondition";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DivergenceDetected: return "DivergenceDetected";
        case ErrorKind::Format: return "FormatError";
    }
    return "Error";
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) {
    return std::sqrt(norm_sq(a));
}

void require_same_dim(std::span<const double> a, std::span<const double> b, const char* where) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(where) + ": " + std::to_string(a.size()) +
                                                      " vs " + std::to_string(b.size()));
    }
}

void require_finite(std::span<const double> a, const char* where) {
    for (double x : a) {
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, std::string(where) + ": non-finite entry");
    }
}

Token scaled(std::span<const double> a, double s) {
    Token out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

Token add(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a, b, "add");
    Token out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Token sub(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a, b, "sub");
    Token out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Token combine(double a, std::span<const double> x, double b, std::span<const double> y) {
    require_same_dim(x, y, "combine");
    Token out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace slfm
