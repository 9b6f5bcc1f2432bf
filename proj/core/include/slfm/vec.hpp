#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace slfm {

/// One latent token: a d-dimensional real vector.
using Token = std::vector<double>;

/// Neumaier-compensated accumulator. Sums of up to ~10^6 terms stay within a
/// couple of ulps of the exact value regardless of summation order.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> a);
double norm(std::span<const double> a);

// Throws DimensionMismatch when sizes differ.
void require_same_dim(std::span<const double> a, std::span<const double> b, const char* where);

// Throws InvalidArgument on NaN/Inf entries.
void require_finite(std::span<const double> a, const char* where);

Token scaled(std::span<const double> a, double s);
Token add(std::span<const double> a, std::span<const double> b);
Token sub(std::span<const double> a, std::span<const double> b);
// a * x + b * y
Token combine(double a, std::span<const double> x, double b, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace slfm
