#pragma once

#include <limits>
#include <string>

#include "cnet/linalg.hpp"

namespace cnet {

/// Open real interval.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains_open(double x) const { return x > lo && x < hi; }
};

/// An invertible scalar activation together with the facts the training
/// method relies on: it maps the open interval `domain` diffeomorphically
/// onto `codomain`, it is strictly increasing, and its derivative is bounded
/// by `contraction_constant` < 1 everywhere, so applying it componentwise
/// shrinks squared distances by at least contraction_constant^2.
///
/// Sigmoid (the only built-in instance) has contraction constant 1/4.
/// Activations whose derivative reaches 1 (e.g. tanh at the origin) are not
/// contractions and are rejected unless `allow_non_contraction` is set.
class Activation {
public:
    using ScalarFn = double (*)(double);

    Activation(std::string name, ScalarFn fn, ScalarFn inverse_fn, ScalarFn derivative_fn,
               Interval domain, Interval codomain, double contraction_constant,
               double safe_inverse_range, bool allow_non_contraction = false,
               ScalarFn derivative_from_value_fn = nullptr);

    /// The sigmoid instance used by every experiment, 1/(1+e^-x).
    static const Activation& sigmoid();

    const std::string& name() const { return name_; }
    Interval domain() const { return domain_; }
    Interval codomain() const { return codomain_; }

    /// Upper bound L < 1 on |derivative| over the whole domain.
    double contraction_constant() const { return contraction_constant_; }

    /// |x| bound inside which apply/inverse round-trip to ~1e-9 in double
    /// precision (sigmoid saturates beyond it).
    double safe_inverse_range() const { return safe_inverse_range_; }

    double apply(double x) const { return fn_(x); }

    /// Inverse; throws DomainError for y outside the open codomain.
    double apply_inverse(double y) const;

    double derivative(double x) const { return derivative_fn_(x); }

    Vector apply(const Vector& z) const;
    /// Componentwise inverse; a DomainError names the failing component.
    Vector apply_inverse(const Vector& y) const;
    Vector derivative(const Vector& z) const;

    /// Some activations can evaluate their derivative from the activation
    /// value alone (sigmoid: a*(1-a)), which lets batched passes skip the
    /// pre-activation entirely.
    bool has_value_derivative() const { return derivative_from_value_fn_ != nullptr; }
    double derivative_from_value(double activated) const {
        return derivative_from_value_fn_(activated);
    }

private:
    std::string name_;
    ScalarFn fn_;
    ScalarFn inverse_fn_;
    ScalarFn derivative_fn_;
    Interval domain_;
    Interval codomain_;
    double contraction_constant_;
    double safe_inverse_range_;
    ScalarFn derivative_from_value_fn_ = nullptr;
};

} // namespace cnet
