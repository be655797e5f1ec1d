#include "cnet/activation.hpp"

#include <cmath>
#include <utility>

namespace cnet {

namespace {

double sigmoid_scalar(double x) {
    // Branch on sign to avoid overflow in exp; cap into the open interval so
    // saturated doubles never round to exactly 0 or 1.
    double y;
    if (x >= 0.0) {
        y = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        y = e / (1.0 + e);
    }
    if (y >= 1.0) return std::nextafter(1.0, 0.0);
    if (y <= 0.0) return std::nextafter(0.0, 1.0);
    return y;
}

double logit_scalar(double y) {
    return std::log(y / (1.0 - y));
}

double sigmoid_derivative_scalar(double x) {
    const double s = sigmoid_scalar(x);
    return s * (1.0 - s);
}

double sigmoid_derivative_from_value(double a) {
    return a * (1.0 - a);
}

} // namespace

Activation::Activation(std::string name, ScalarFn fn, ScalarFn inverse_fn,
                       ScalarFn derivative_fn, Interval domain, Interval codomain,
                       double contraction_constant, double safe_inverse_range,
                       bool allow_non_contraction)
    : name_(std::move(name)),
      fn_(fn),
      inverse_fn_(inverse_fn),
      derivative_fn_(derivative_fn),
      domain_(domain),
      codomain_(codomain),
      contraction_constant_(contraction_constant),
      safe_inverse_range_(safe_inverse_range),
      derivative_from_value_fn_(derivative_from_value_fn) {
    if (contraction_constant_ >= 1.0 && !allow_non_contraction) {
        throw ConfigError("activation '" + name_ + "' has derivative bound " +
                          std::to_string(contraction_constant_) +
                          " >= 1 and is not a contraction; pass allow_non_contraction "
                          "to admit it anyway");
    }
}

const Activation& Activation::sigmoid() {
    static const Activation instance("sigmoid", &sigmoid_scalar, &logit_scalar,
                                     &sigmoid_derivative_scalar, Interval{},
                                     Interval{0.0, 1.0}, 0.25, 15.0, false,
                                     &sigmoid_derivative_from_value);
    return instance;
}

double Activation::apply_inverse(double y) const {
    if (!codomain_.contains_open(y)) {
        throw DomainError("apply_inverse(" + name_ + "): value " + std::to_string(y) +
                              " outside open codomain (" + std::to_string(codomain_.lo) +
                              ", " + std::to_string(codomain_.hi) + ")",
                          y);
    }
    return inverse_fn_(y);
}

Vector Activation::apply(const Vector& z) const {
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = fn_(z[i]);
    return out;
}

Vector Activation::apply_inverse(const Vector& y) const {
    Vector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!codomain_.contains_open(y[i])) {
            throw DomainError("apply_inverse(" + name_ + "): component " +
                                  std::to_string(i) + " = " + std::to_string(y[i]) +
                                  " outside open codomain",
                              y[i], static_cast<std::ptrdiff_t>(i));
        }
        out[i] = inverse_fn_(y[i]);
    }
    return out;
}

Vector Activation::derivative(const Vector& z) const {
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = derivative_fn_(z[i]);
    return out;
}

} // namespace cnet
