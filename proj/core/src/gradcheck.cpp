#include "cnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "cnet/preprocess.hpp"
#include "cnet/rng.hpp"

namespace cnet {

double batch_cost(const Mlp& net, const LabeledDataset& data,
                  std::span<const std::size_t> batch, CostMode mode) {
    double total = 0.0;
    for (std::size_t i : batch) {
        switch (mode) {
        case CostMode::classical:
            total += sample_cost_from_trace(forward(net, data.inputs[i]), data.raw_targets[i]);
            break;
        case CostMode::modified:
            total += sample_cost_from_trace(forward_linear_output(net, data.inputs[i]),
                                            data.preimage_targets[i]);
            break;
        case CostMode::reeval:
            total += sample_cost_from_trace(forward(net, data.inputs[i]),
                                            data.remapped_targets[i]);
            break;
        }
    }
    return total;
}

GradientSet finite_difference_gradient(const Mlp& net, const LabeledDataset& data,
                                       std::span<const std::size_t> batch, CostMode mode,
                                       double step) {
    Mlp probe = net;
    GradientSet grad = GradientSet::zeros_like(net);
    for (std::size_t g = 0; g < probe.weights.size(); ++g) {
        Matrix& w = probe.weights[g];
        double* entries = w.data();
        double* out = grad.per_layer[g].data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double saved = entries[i];
            entries[i] = saved + step;
            const double up = batch_cost(probe, data, batch, mode);
            entries[i] = saved - step;
            const double down = batch_cost(probe, data, batch, mode);
            entries[i] = saved;
            out[i] = (up - down) / (2.0 * step);
        }
    }
    return grad;
}

double max_relative_error(const GradientSet& a, const GradientSet& b, double abs_floor) {
    if (a.per_layer.size() != b.per_layer.size()) {
        throw DimensionError("max_relative_error", std::to_string(a.per_layer.size()) + " layers",
                             std::to_string(b.per_layer.size()) + " layers");
    }
    double worst = 0.0;
    for (std::size_t g = 0; g < a.per_layer.size(); ++g) {
        const Matrix& ma = a.per_layer[g];
        const Matrix& mb = b.per_layer[g];
        if (!ma.same_shape(mb)) {
            throw DimensionError("max_relative_error", ma.shape_str(), mb.shape_str());
        }
        for (std::size_t i = 0; i < ma.size(); ++i) {
            const double x = ma.data()[i];
            const double y = mb.data()[i];
            const double diff = std::abs(x - y);
            if (diff <= abs_floor) continue;
            const double scale = std::max(std::abs(x), std::abs(y));
            worst = std::max(worst, diff / scale);
        }
    }
    return worst;
}

GradCheckResult run_gradcheck_suite(std::uint64_t seed, int instances, double step,
                                    bool inject_fault) {
    SplitMix64 rng(seed);
    GradCheckResult result;
    result.instances = instances;
    for (int inst = 0; inst < instances; ++inst) {
        // Random little network: 1-3 layer gaps, each layer 1-5 wide.
        const std::size_t gaps = 1 + rng.below(3);
        Topology topo;
        for (std::size_t i = 0; i <= gaps; ++i) {
            topo.layer_sizes.push_back(1 + rng.below(5));
        }
        const Mlp net = init_weights(topo, rng.next_u64());

        LabeledDataset data;
        data.name = "gradcheck";
        const std::size_t samples = 1 + rng.below(5);
        const int classes = static_cast<int>(topo.output_dim());
        for (std::size_t s = 0; s < samples; ++s) {
            Vector x(topo.input_dim());
            for (double& v : x) v = rng.next_double();
            data.inputs.push_back(std::move(x));
            const int label = static_cast<int>(rng.below(classes));
            data.raw_targets.push_back(one_hot(label, classes));
            data.labels.push_back(label);
        }
        preprocess(data, RemapSpec{}, *topo.output_activation);

        std::vector<std::size_t> batch(samples);
        for (std::size_t s = 0; s < samples; ++s) batch[s] = s;

        for (const CostMode mode : {CostMode::classical, CostMode::modified}) {
            GradientSet analytic = mode == CostMode::classical
                                       ? grad_classical(net, data, batch)
                                       : grad_modified(net, data, batch);
            if (inject_fault) {
                double* p = analytic.per_layer[0].data();
                p[0] = p[0] == 0.0 ? 1.0 : -p[0];
            }
            const GradientSet numeric = finite_difference_gradient(net, data, batch, mode, step);
            const double err = max_relative_error(analytic, numeric);
            if (mode == CostMode::classical) {
                result.max_rel_error_classical = std::max(result.max_rel_error_classical, err);
            } else {
                result.max_rel_error_modified = std::max(result.max_rel_error_modified, err);
            }
        }
    }
    return result;
}

} // namespace cnet
