#include "cnet/network.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

#include "cnet/rng.hpp"

namespace cnet {

Topology Topology::preset(std::string_view name) {
    Topology t;
    if (name == "exp1") {
        t.layer_sizes = {784, 300, 100, 10};
    } else if (name == "exp2") {
        t.layer_sizes = {784, 500, 150, 10};
    } else if (name == "exp3") {
        t.layer_sizes = {784, 1000, 10};
    } else {
        throw ConfigError("unknown topology preset '" + std::string(name) +
                          "' (expected exp1, exp2 or exp3)");
    }
    return t;
}

void Topology::validate() const {
    if (layer_sizes.size() < 2) {
        throw ConfigError("topology needs at least an input and an output layer, got " +
                          std::to_string(layer_sizes.size()) + " entries");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("topology contains a zero-sized layer");
    }
}

std::string Topology::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(layer_sizes[i]);
    }
    return s;
}

void Mlp::validate() const {
    topology.validate();
    if (weights.size() != topology.gaps()) {
        throw ConfigError("network has " + std::to_string(weights.size()) +
                          " weight matrices for " + std::to_string(topology.gaps()) +
                          " layer gaps");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].rows() != topology.layer_sizes[i + 1] ||
            weights[i].cols() != topology.layer_sizes[i]) {
            throw ConfigError("weight matrix " + std::to_string(i) + " has shape " +
                              weights[i].shape_str() + ", topology expects " +
                              std::to_string(topology.layer_sizes[i + 1]) + "x" +
                              std::to_string(topology.layer_sizes[i]));
        }
    }
}

Mlp init_weights(const Topology& topology, std::uint64_t seed, InitScheme scheme) {
    topology.validate();
    Mlp net{topology, {}};
    net.weights.reserve(topology.gaps());
    SplitMix64 root(seed);
    for (std::size_t g = 0; g < topology.gaps(); ++g) {
        const std::size_t rows = topology.layer_sizes[g + 1];
        const std::size_t cols = topology.layer_sizes[g];
        Matrix w(rows, cols);
        if (scheme == InitScheme::UniformFanIn) {
            SplitMix64 stream = root.split();
            const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
            double* p = w.data();
            for (std::size_t i = 0; i < w.size(); ++i) p[i] = stream.uniform(-bound, bound);
        }
        net.weights.push_back(std::move(w));
    }
    return net;
}

namespace {

ForwardTrace run_forward(const Mlp& net, const Vector& x, bool linear_output) {
    if (x.size() != net.topology.input_dim()) {
        throw DimensionError("forward", "input layer [" +
                                 std::to_string(net.topology.input_dim()) + "]",
                             "vector[" + std::to_string(x.size()) + "]");
    }
    ForwardTrace trace;
    trace.input = x;
    trace.linear_output_mode = linear_output;
    trace.pre_activations.reserve(net.weights.size());
    trace.activations.reserve(net.weights.size());
    const Vector* prev = &trace.input;
    for (std::size_t i = 0; i < net.weights.size(); ++i) {
        Vector z = matvec(net.weights[i], *prev);
        const bool last = (i + 1 == net.weights.size());
        if (last && linear_output) {
            trace.activations.push_back(z);
        } else {
            const Activation& act = last ? *net.topology.output_activation
                                         : *net.topology.hidden_activation;
            trace.activations.push_back(act.apply(z));
        }
        trace.pre_activations.push_back(std::move(z));
        prev = &trace.activations.back();
    }
    return trace;
}

} // namespace

ForwardTrace forward(const Mlp& net, const Vector& x) {
    return run_forward(net, x, false);
}

ForwardTrace forward_linear_output(const Mlp& net, const Vector& x) {
    return run_forward(net, x, true);
}

// --- checkpoint io -----------------------------------------------------------

namespace {

constexpr std::array<char, 4> kMagic = {'C', 'N', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
    buf.push_back(static_cast<char>((v >> 16) & 0xff));
    buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f64(std::string& buf, double d) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

} // namespace

void save_checkpoint(const Mlp& net, const std::filesystem::path& path) {
    net.validate();
    std::string buf;
    buf.append(kMagic.data(), kMagic.size());
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(net.topology.layer_sizes.size()));
    for (std::size_t s : net.topology.layer_sizes) put_u32(buf, static_cast<std::uint32_t>(s));
    for (const Matrix& w : net.weights) {
        const double* p = w.data();
        for (std::size_t i = 0; i < w.size(); ++i) put_f64(buf, p[i]);
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path.string());
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw IoError("short write to checkpoint: " + path.string());
}

Mlp load_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const std::size_t n = buf.size();

    auto need = [&](std::size_t offset, std::size_t bytes) {
        if (offset + bytes > n) {
            throw IoError("truncated checkpoint " + path.string() + ": need " +
                          std::to_string(offset + bytes) + " bytes, have " + std::to_string(n));
        }
    };

    need(0, 12);
    if (std::memcmp(p, kMagic.data(), 4) != 0) {
        throw IoError("bad checkpoint magic in " + path.string());
    }
    const std::uint32_t version = get_u32(p + 4);
    if (version != kVersion) {
        throw IoError("unsupported checkpoint version " + std::to_string(version));
    }
    const std::uint32_t n_sizes = get_u32(p + 8);
    if (n_sizes < 2) throw IoError("checkpoint lists fewer than two layers");
    need(12, 4 * static_cast<std::size_t>(n_sizes));

    Topology topo;
    topo.layer_sizes.resize(n_sizes);
    std::size_t off = 12;
    for (std::uint32_t i = 0; i < n_sizes; ++i, off += 4) {
        topo.layer_sizes[i] = get_u32(p + off);
    }
    topo.validate();

    Mlp net{topo, {}};
    for (std::size_t g = 0; g < topo.gaps(); ++g) {
        Matrix w(topo.layer_sizes[g + 1], topo.layer_sizes[g]);
        need(off, 8 * w.size());
        double* d = w.data();
        for (std::size_t i = 0; i < w.size(); ++i, off += 8) d[i] = get_f64(p + off);
        net.weights.push_back(std::move(w));
    }
    if (off != n) {
        throw IoError("checkpoint " + path.string() + " has " + std::to_string(n - off) +
                      " trailing bytes");
    }
    return net;
}

void export_weights_text(const Mlp& net, std::ostream& os) {
    os << "# cnet weights " << net.topology.to_string() << "\n";
    for (std::size_t g = 0; g < net.weights.size(); ++g) {
        const Matrix& w = net.weights[g];
        os << "# layer " << g << ": " << w.shape_str() << "\n";
        for (std::size_t r = 0; r < w.rows(); ++r) {
            for (std::size_t c = 0; c < w.cols(); ++c) {
                std::array<char, 32> tmp;
                auto [end, ec] = std::to_chars(tmp.data(), tmp.data() + tmp.size(), w(r, c));
                os.write(tmp.data(), end - tmp.data());
                os.put(c + 1 == w.cols() ? '\n' : ' ');
            }
        }
    }
}

} // namespace cnet
