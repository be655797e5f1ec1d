#pragma once

#include <span>
#include <string_view>

#include "cnet/data.hpp"
#include "cnet/network.hpp"

namespace cnet {

/// Which cost functional a run trains or reports.
///  - classical: squared error of the activated output against targets
///  - modified:  squared error of the *linear* output against pre-image
///               targets (the less nonlinear functional)
///  - reeval:    classical form on remapped targets, used to re-evaluate
///               weights trained under the modified cost (evaluation only,
///               no gradient)
enum class CostMode { classical, modified, reeval };

std::string_view to_string(CostMode mode);
CostMode cost_mode_from_string(std::string_view s);

/// Which stored targets the classical cost compares against.
enum class TargetKind { raw, remapped };

/// One gradient matrix per weight matrix, shape-congruent with the network.
struct GradientSet {
    std::vector<Matrix> per_layer;

    static GradientSet zeros_like(const Mlp& net);
    void validate_against(const Mlp& net) const;
};

/// Sum over the dataset of squared distance between the activated network
/// output and the chosen targets. With remapped targets this is the
/// re-evaluation cost. An empty dataset costs 0 and sets *empty_warning.
double cost_classical(const Mlp& net, const LabeledDataset& data, TargetKind kind = TargetKind::raw,
                      bool* empty_warning = nullptr);

/// Sum over the dataset of squared distance between the linear (unactivated)
/// output and the cached pre-image targets. Requires preprocessing.
double cost_modified(const Mlp& net, const LabeledDataset& data, bool* empty_warning = nullptr);

/// Re-evaluation cost: by definition the classical form on remapped targets.
inline double cost_reeval(const Mlp& net, const LabeledDataset& data,
                          bool* empty_warning = nullptr) {
    return cost_classical(net, data, TargetKind::remapped, empty_warning);
}

/// Exact gradient of cost_classical restricted to the given batch, via
/// backpropagation. Batch entries index into `data`; gradients are plain
/// sums over the batch.
GradientSet grad_classical(const Mlp& net, const LabeledDataset& data,
                           std::span<const std::size_t> batch, TargetKind kind = TargetKind::raw);

/// Exact gradient of cost_modified restricted to the batch. The output
/// layer is linear, so its delta carries no activation-derivative factor.
GradientSet grad_modified(const Mlp& net, const LabeledDataset& data,
                          std::span<const std::size_t> batch);

/// Per-sample costs computed from an existing trace (shared by trainer
/// snapshots and the cost functions above).
double sample_cost_from_trace(const ForwardTrace& trace, const Vector& target);

} // namespace cnet
