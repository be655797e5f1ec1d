#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "cnet/activation.hpp"
#include "cnet/linalg.hpp"

namespace cnet {

/// Layer sizes plus the activations applied between them. layer_sizes[0] is
/// the input dimension, layer_sizes.back() the output dimension.
struct Topology {
    std::vector<std::size_t> layer_sizes;
    const Activation* hidden_activation = &Activation::sigmoid();
    const Activation* output_activation = &Activation::sigmoid();

    /// Named experiment architectures: exp1 = 784-300-100-10,
    /// exp2 = 784-500-150-10, exp3 = 784-1000-10.
    static Topology preset(std::string_view name);

    std::size_t gaps() const { return layer_sizes.size() - 1; }
    std::size_t input_dim() const { return layer_sizes.front(); }
    std::size_t output_dim() const { return layer_sizes.back(); }

    /// Throws ConfigError unless there are >= 2 layers, all positive.
    void validate() const;

    std::string to_string() const; // e.g. "784-300-100-10"
};

/// A fully connected network: weights[i] has shape
/// layer_sizes[i+1] x layer_sizes[i]. No bias terms; the cost functionals
/// this toolkit trains are pure chains of matrix products and activations.
/// An augmented-input convention (constant 1 appended to the input) is
/// available at the dataset/config level for experiments that want biases
/// on the first layer.
struct Mlp {
    Topology topology;
    std::vector<Matrix> weights;

    /// Shape congruence between topology and weights.
    void validate() const;
};

enum class InitScheme {
    UniformFanIn, // each weight uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]
    Zeros,        // degenerate all-zero network, for tests
};

/// Deterministic: the same (topology, seed, scheme) always produces bitwise
/// identical weights. Each weight matrix draws from its own split stream.
Mlp init_weights(const Topology& topology, std::uint64_t seed,
                 InitScheme scheme = InitScheme::UniformFanIn);

/// Per-layer values retained for backpropagation.
struct ForwardTrace {
    Vector input;
    std::vector<Vector> pre_activations; // z_i = W_i * a_{i-1}
    std::vector<Vector> activations;     // a_i = s(z_i); equals z_n at the top when linear
    bool linear_output_mode = false;

    const Vector& output() const { return activations.back(); }
};

/// Activated forward pass: every layer, including the last, applies its
/// activation.
ForwardTrace forward(const Mlp& net, const Vector& x);

/// Identical to forward() except the final layer emits its pre-activation
/// unchanged (the linear-output network the modified cost trains).
ForwardTrace forward_linear_output(const Mlp& net, const Vector& x);

// --- weight checkpoints -----------------------------------------------------
//
// Binary layout, little-endian:
//   bytes 0..3   magic "CNET"
//   u32          format version (currently 1)
//   u32          number of layer sizes (gaps + 1)
//   u32 each     layer sizes d_0 .. d_n
//   f64 each     weight matrices in layer order, row-major
//
// A human-readable text export (one matrix per block) exists for debugging.

void save_checkpoint(const Mlp& net, const std::filesystem::path& path);
Mlp load_checkpoint(const std::filesystem::path& path);

void export_weights_text(const Mlp& net, std::ostream& os);

} // namespace cnet
