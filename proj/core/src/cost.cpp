#include "cnet/cost.hpp"

#include <string>

namespace cnet {

std::string_view to_string(CostMode mode) {
    switch (mode) {
    case CostMode::classical: return "classical";
    case CostMode::modified: return "modified";
    case CostMode::reeval: return "reeval";
    }
    return "?";
}

CostMode cost_mode_from_string(std::string_view s) {
    if (s == "classical") return CostMode::classical;
    if (s == "modified") return CostMode::modified;
    if (s == "reeval") return CostMode::reeval;
    throw ConfigError("unknown cost mode '" + std::string(s) +
                      "' (expected classical, modified or reeval)");
}

GradientSet GradientSet::zeros_like(const Mlp& net) {
    GradientSet g;
    g.per_layer.reserve(net.weights.size());
    for (const Matrix& w : net.weights) g.per_layer.emplace_back(w.rows(), w.cols());
    return g;
}

void GradientSet::validate_against(const Mlp& net) const {
    if (per_layer.size() != net.weights.size()) {
        throw DimensionError("GradientSet", std::to_string(per_layer.size()) + " layers",
                             std::to_string(net.weights.size()) + " layers");
    }
    for (std::size_t i = 0; i < per_layer.size(); ++i) {
        if (!per_layer[i].same_shape(net.weights[i])) {
            throw DimensionError("GradientSet layer " + std::to_string(i),
                                 per_layer[i].shape_str(), net.weights[i].shape_str());
        }
    }
}

double sample_cost_from_trace(const ForwardTrace& trace, const Vector& target) {
    return sq_dist(trace.output(), target);
}

namespace {

const std::vector<Vector>& targets_for(const LabeledDataset& data, TargetKind kind) {
    if (kind == TargetKind::raw) return data.raw_targets;
    if (data.remapped_targets.empty()) {
        throw ConfigError("dataset '" + data.name +
                          "' has no remapped targets; run preprocessing first");
    }
    return data.remapped_targets;
}

const std::vector<Vector>& preimages_for(const LabeledDataset& data) {
    if (data.preimage_targets.empty()) {
        throw ConfigError("dataset '" + data.name +
                          "' has no pre-image targets; run preprocessing first");
    }
    return data.preimage_targets;
}

void check_output_dim(const Mlp& net, const std::vector<Vector>& targets,
                      const char* what) {
    if (!targets.empty() && targets.front().size() != net.topology.output_dim()) {
        throw DimensionError(what,
                             "output layer [" + std::to_string(net.topology.output_dim()) + "]",
                             "target [" + std::to_string(targets.front().size()) + "]");
    }
}

} // namespace

double cost_classical(const Mlp& net, const LabeledDataset& data, TargetKind kind,
                      bool* empty_warning) {
    if (empty_warning) *empty_warning = data.size() == 0;
    if (data.size() == 0) return 0.0;
    const auto& targets = targets_for(data, kind);
    check_output_dim(net, targets, "cost_classical");
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        total += sample_cost_from_trace(forward(net, data.inputs[i]), targets[i]);
    }
    return total;
}

double cost_modified(const Mlp& net, const LabeledDataset& data, bool* empty_warning) {
    if (empty_warning) *empty_warning = data.size() == 0;
    if (data.size() == 0) return 0.0;
    const auto& preimages = preimages_for(data);
    check_output_dim(net, preimages, "cost_modified");
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        total += sample_cost_from_trace(forward_linear_output(net, data.inputs[i]), preimages[i]);
    }
    return total;
}

namespace {

// Shared backward pass. The caller supplies the top-layer delta; interior
// deltas follow the standard pull-back-and-gate recurrence.
void accumulate_backward(const Mlp& net, const ForwardTrace& trace, Vector delta,
                         GradientSet& grad) {
    const std::size_t gaps = net.weights.size();
    for (std::size_t layer = gaps; layer-- > 0;) {
        const Vector& below = layer == 0 ? trace.input : trace.activations[layer - 1];
        add_outer(grad.per_layer[layer], delta, below);
        if (layer > 0) {
            Vector pulled = matvec_transposed(net.weights[layer], delta);
            const Vector deriv =
                net.topology.hidden_activation->derivative(trace.pre_activations[layer - 1]);
            delta = hadamard(pulled, deriv);
        }
    }
}

} // namespace

GradientSet grad_classical(const Mlp& net, const LabeledDataset& data,
                           std::span<const std::size_t> batch, TargetKind kind) {
    if (batch.empty()) throw ValidationError("grad_classical: empty batch");
    const auto& targets = targets_for(data, kind);
    check_output_dim(net, targets, "grad_classical");
    GradientSet grad = GradientSet::zeros_like(net);
    const Activation& out_act = *net.topology.output_activation;
    for (std::size_t i : batch) {
        const ForwardTrace trace = forward(net, data.inputs[i]);
        const Vector& out = trace.output();
        const Vector& y = targets[i];
        Vector delta(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            delta[k] = 2.0 * (out[k] - y[k]) * out_act.derivative(trace.pre_activations.back()[k]);
        }
        accumulate_backward(net, trace, std::move(delta), grad);
    }
    return grad;
}

GradientSet grad_modified(const Mlp& net, const LabeledDataset& data,
                          std::span<const std::size_t> batch) {
    if (batch.empty()) throw ValidationError("grad_modified: empty batch");
    const auto& preimages = preimages_for(data);
    check_output_dim(net, preimages, "grad_modified");
    GradientSet grad = GradientSet::zeros_like(net);
    for (std::size_t i : batch) {
        const ForwardTrace trace = forward_linear_output(net, data.inputs[i]);
        const Vector& out = trace.output(); // == top pre-activation
        const Vector& t = preimages[i];
        Vector delta(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            delta[k] = 2.0 * (out[k] - t[k]);
        }
        accumulate_backward(net, trace, std::move(delta), grad);
    }
    return grad;
}

} // namespace cnet
