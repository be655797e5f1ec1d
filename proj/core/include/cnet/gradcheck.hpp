#pragma once

#include <cstdint>

#include "cnet/cost.hpp"

namespace cnet {

/// Central finite-difference gradient of the chosen cost over a batch.
/// Touches weights one entry at a time, so it is independent of the
/// backpropagation path it is used to check.
GradientSet finite_difference_gradient(const Mlp& net, const LabeledDataset& data,
                                       std::span<const std::size_t> batch, CostMode mode,
                                       double step = 1e-6);

/// Batch-restricted cost (sum over the given sample indices).
double batch_cost(const Mlp& net, const LabeledDataset& data,
                  std::span<const std::size_t> batch, CostMode mode);

/// Largest entrywise relative error between two gradient sets, with an
/// absolute floor below which entries count as equal.
double max_relative_error(const GradientSet& a, const GradientSet& b, double abs_floor = 1e-8);

struct GradCheckResult {
    int instances = 0;
    double max_rel_error_classical = 0.0;
    double max_rel_error_modified = 0.0;

    double worst() const {
        return max_rel_error_classical > max_rel_error_modified ? max_rel_error_classical
                                                                : max_rel_error_modified;
    }
};

/// Compares analytic and finite-difference gradients on `instances` random
/// small networks (layer sizes drawn from 1..5, batches of up to 5 samples)
/// for both trainable costs. `inject_fault` flips the sign of one analytic
/// gradient entry per instance, for exercising the failure path.
GradCheckResult run_gradcheck_suite(std::uint64_t seed, int instances, double step = 1e-6,
                                    bool inject_fault = false);

} // namespace cnet
