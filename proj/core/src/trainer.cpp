#include "cnet/trainer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <numeric>
#include <ostream>
#include <thread>

namespace cnet {

void Hyperparams::validate() const {
    if (!(learning_rate > 0.0)) {
        throw ConfigError("hp.learning_rate must be positive, got " +
                          std::to_string(learning_rate));
    }
    if (epochs < 1) throw ConfigError("hp.epochs must be >= 1");
    if (eval_every < 1) throw ConfigError("hp.eval_every must be >= 1");
}

std::string format_double(double v) {
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

namespace {

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t weights_hash(const Mlp& net) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Matrix& w : net.weights) h = fnv1a64(w.data(), w.size() * sizeof(double), h);
    return h;
}

// --- deterministic chunked parallelism ---------------------------------------

// Splits [0, n) into `threads` contiguous chunks and runs fn(chunk, lo, hi)
// concurrently. Chunk boundaries depend only on (n, threads), so results
// merged in chunk order are reproducible for a fixed thread count.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
    const int usable = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (usable == 1) {
        fn(0, std::size_t{0}, n);
        return;
    }
    const std::size_t base = n / usable;
    const std::size_t rem = n % usable;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(usable);
    std::size_t lo = 0;
    for (int t = 0; t < usable; ++t) {
        const std::size_t len = base + (static_cast<std::size_t>(t) < rem ? 1 : 0);
        const std::size_t hi = lo + len;
        if (t == usable - 1) {
            try {
                fn(t, lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        } else {
            pool.emplace_back([&, t, lo, hi] {
                try {
                    fn(t, lo, hi);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        lo = hi;
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// --- batched math kernels -----------------------------------------------------
//
// The hot path processes many samples at once as row-major sample x feature
// buffers; the 4-row unrolls keep the streamed operand in cache across
// neighbouring samples. Summation order is fixed, so results are bitwise
// stable for a fixed chunking.

struct Buf {
    std::size_t rows = 0, cols = 0;
    std::vector<double> v;

    void resize(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        v.resize(r * c);
    }
    double* row(std::size_t i) { return v.data() + i * cols; }
    const double* row(std::size_t i) const { return v.data() + i * cols; }
};

// C[m x q] = D[m x n] * W[n x q]
void matmul_rows(const double* d, std::size_t m, std::size_t n, const double* w, std::size_t q,
                 double* c) {
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        double* c0 = c + i * q;
        double* c1 = c0 + q;
        double* c2 = c1 + q;
        double* c3 = c2 + q;
        std::fill(c0, c0 + q, 0.0);
        std::fill(c1, c1 + q, 0.0);
        std::fill(c2, c2 + q, 0.0);
        std::fill(c3, c3 + q, 0.0);
        const double* d0 = d + i * n;
        const double* d1 = d0 + n;
        const double* d2 = d1 + n;
        const double* d3 = d2 + n;
        for (std::size_t k = 0; k < n; ++k) {
            const double* wrow = w + k * q;
            const double a0 = d0[k], a1 = d1[k], a2 = d2[k], a3 = d3[k];
            for (std::size_t j = 0; j < q; ++j) {
                const double wv = wrow[j];
                c0[j] += a0 * wv;
                c1[j] += a1 * wv;
                c2[j] += a2 * wv;
                c3[j] += a3 * wv;
            }
        }
    }
    for (; i < m; ++i) {
        double* ci = c + i * q;
        std::fill(ci, ci + q, 0.0);
        const double* di = d + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = di[k];
            const double* wrow = w + k * q;
            for (std::size_t j = 0; j < q; ++j) ci[j] += a * wrow[j];
        }
    }
}

// G[p x q] += D[m x p]^T * A[m x q]
void accumulate_outer_rows(const double* d, const double* a, std::size_t m, std::size_t p,
                           std::size_t q, double* g) {
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const double* d0 = d + k * p;
        const double* d1 = d0 + p;
        const double* d2 = d1 + p;
        const double* d3 = d2 + p;
        const double* a0 = a + k * q;
        const double* a1 = a0 + q;
        const double* a2 = a1 + q;
        const double* a3 = a2 + q;
        for (std::size_t i = 0; i < p; ++i) {
            double* grow = g + i * q;
            const double x0 = d0[i], x1 = d1[i], x2 = d2[i], x3 = d3[i];
            for (std::size_t j = 0; j < q; ++j) {
                grow[j] += x0 * a0[j] + x1 * a1[j] + x2 * a2[j] + x3 * a3[j];
            }
        }
    }
    for (; k < m; ++k) {
        const double* dk = d + k * p;
        const double* ak = a + k * q;
        for (std::size_t i = 0; i < p; ++i) {
            double* grow = g + i * q;
            const double x = dk[i];
            for (std::size_t j = 0; j < q; ++j) grow[j] += x * ak[j];
        }
    }
}

// --- batched training engine ----------------------------------------------------

struct PackedTest {
    Buf inputs;
    std::vector<int> labels;
};

class BatchEngine {
public:
    BatchEngine(const Mlp& net, const LabeledDataset& data, const LabeledDataset& test,
                CostMode mode, int threads)
        : mode_(mode),
          threads_(threads),
          gaps_(net.weights.size()),
          out_act_(net.topology.output_activation),
          hidden_act_(net.topology.hidden_activation) {
        pack(data);
        test_.inputs.resize(test.size(), test.input_dim());
        for (std::size_t i = 0; i < test.size(); ++i) {
            std::memcpy(test_.inputs.row(i), test.inputs[i].data(),
                        test.input_dim() * sizeof(double));
        }
        test_.labels = test.labels;
        transposed_.resize(gaps_);
        const int pool = std::max(1, threads_);
        work_.resize(pool);
        grads_.resize(pool);
        for (auto& g : grads_) g = GradientSet::zeros_like(net);
        refresh_transposed(net);
    }

    static bool supports(const Mlp& net) {
        return net.topology.output_activation->has_value_derivative() &&
               net.topology.hidden_activation->has_value_derivative();
    }

    // Must be called after every weight update.
    void refresh_transposed(const Mlp& net) {
        for (std::size_t g = 0; g < gaps_; ++g) {
            const Matrix& w = net.weights[g];
            transposed_[g].resize(w.cols(), w.rows());
            for (std::size_t r = 0; r < w.rows(); ++r) {
                for (std::size_t c = 0; c < w.cols(); ++c) {
                    transposed_[g].row(c)[r] = w(r, c);
                }
            }
        }
    }

    /// Summed gradient over the subrange [begin, end) of the packed sample
    /// order (full batch when the range covers everything).
    GradientSet gradient(const Mlp& net, std::size_t begin, std::size_t end) {
        const std::size_t m = end - begin;
        for (auto& g : grads_) {
            for (Matrix& layer : g.per_layer) std::fill_n(layer.data(), layer.size(), 0.0);
        }
        parallel_chunks(m, threads_, [&](int t, std::size_t lo, std::size_t hi) {
            gradient_chunk(net, begin + lo, begin + hi, work_[t], grads_[t]);
        });
        for (std::size_t t = 1; t < grads_.size(); ++t) {
            for (std::size_t g = 0; g < gaps_; ++g) {
                add_in_place(grads_[0].per_layer[g], grads_[t].per_layer[g]);
            }
        }
        return grads_[0];
    }

    /// (train cost, reeval-form cost) at the current weights; the second
    /// value is absent when the dataset has no remapped targets.
    std::pair<double, std::optional<double>> costs(const Mlp&) {
        std::vector<double> cost_parts(work_.size(), 0.0);
        std::vector<double> reeval_parts(work_.size(), 0.0);
        parallel_chunks(n_, threads_, [&](int t, std::size_t lo, std::size_t hi) {
            costs_chunk(lo, hi, work_[t], cost_parts[t], reeval_parts[t]);
        });
        double cost = 0.0, reeval = 0.0;
        for (double c : cost_parts) cost += c;
        for (double r : reeval_parts) reeval += r;
        if (remapped_.v.empty()) return {cost, std::nullopt};
        return {cost, reeval};
    }

    double test_error_pct(const Mlp&) {
        std::vector<std::size_t> correct(work_.size(), 0);
        parallel_chunks(test_.labels.size(), threads_, [&](int t, std::size_t lo, std::size_t hi) {
            correct[t] = eval_chunk(lo, hi, work_[t]);
        });
        std::size_t total_correct = 0;
        for (std::size_t c : correct) total_correct += c;
        return 100.0 * (1.0 - static_cast<double>(total_correct) /
                                  static_cast<double>(test_.labels.size()));
    }

    /// Reorders the packed samples (mini-batch shuffling).
    void set_order(const std::vector<std::size_t>& order) {
        reorder(inputs_, order);
        reorder(train_target_, order);
        if (!remapped_.v.empty()) reorder(remapped_, order);
    }

    std::size_t size() const { return n_; }

private:
    struct Workspace {
        std::vector<Buf> acts;   // acts[g]: output of layer g for the chunk
        std::vector<Buf> deltas; // deltas[g]: dCost/dz at layer g
        Buf scratch;
    };

    void pack(const LabeledDataset& data) {
        n_ = data.size();
        const std::size_t in_dim = data.input_dim();
        const std::size_t out_dim = data.target_dim();
        inputs_.resize(n_, in_dim);
        train_target_.resize(n_, out_dim);
        const bool modified = mode_ == CostMode::modified;
        const std::vector<Vector>& target = modified ? data.preimage_targets : data.raw_targets;
        for (std::size_t i = 0; i < n_; ++i) {
            std::memcpy(inputs_.row(i), data.inputs[i].data(), in_dim * sizeof(double));
            std::memcpy(train_target_.row(i), target[i].data(), out_dim * sizeof(double));
        }
        if (!data.remapped_targets.empty()) {
            remapped_.resize(n_, out_dim);
            for (std::size_t i = 0; i < n_; ++i) {
                std::memcpy(remapped_.row(i), data.remapped_targets[i].data(),
                            out_dim * sizeof(double));
            }
        }
    }

    static void reorder(Buf& buf, const std::vector<std::size_t>& order) {
        Buf next;
        next.resize(buf.rows, buf.cols);
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::memcpy(next.row(i), buf.row(order[i]), buf.cols * sizeof(double));
        }
        buf = std::move(next);
    }

    // Forward for packed rows [lo, hi) of `src`; fills ws.acts. The top
    // layer stays linear for the modified cost.
    void forward_chunk(const Buf& src, std::size_t lo, std::size_t hi, bool linear_top,
                       Workspace& ws) {
        const std::size_t m = hi - lo;
        ws.acts.resize(gaps_);
        const double* below = src.row(lo);
        std::size_t below_dim = src.cols;
        for (std::size_t g = 0; g < gaps_; ++g) {
            const Buf& wt = transposed_[g];
            ws.acts[g].resize(m, wt.cols);
            matmul_rows(below, m, below_dim, wt.v.data(), wt.cols, ws.acts[g].v.data());
            const bool top = g + 1 == gaps_;
            if (!(top && linear_top)) {
                const Activation& act = top ? *out_act_ : *hidden_act_;
                double* p = ws.acts[g].v.data();
                const std::size_t len = m * wt.cols;
                for (std::size_t i = 0; i < len; ++i) p[i] = act.apply(p[i]);
            }
            below = ws.acts[g].v.data();
            below_dim = wt.cols;
        }
    }

    void gradient_chunk(const Mlp& net, std::size_t lo, std::size_t hi, Workspace& ws,
                        GradientSet& grad) {
        const std::size_t m = hi - lo;
        const bool modified = mode_ == CostMode::modified;
        forward_chunk(inputs_, lo, hi, modified, ws);
        ws.deltas.resize(gaps_);
        const std::size_t out_dim = train_target_.cols;
        Buf& top_delta = ws.deltas[gaps_ - 1];
        top_delta.resize(m, out_dim);
        const double* out = ws.acts[gaps_ - 1].v.data();
        const double* target = train_target_.row(lo);
        double* dp = top_delta.v.data();
        const std::size_t len = m * out_dim;
        if (modified) {
            for (std::size_t i = 0; i < len; ++i) dp[i] = 2.0 * (out[i] - target[i]);
        } else {
            for (std::size_t i = 0; i < len; ++i) {
                const double a = out[i];
                dp[i] = 2.0 * (a - target[i]) * out_act_->derivative_from_value(a);
            }
        }
        for (std::size_t g = gaps_; g-- > 0;) {
            const Buf& below = g == 0 ? inputs_ : ws.acts[g - 1];
            const double* below_rows = g == 0 ? below.row(lo) : below.v.data();
            accumulate_outer_rows(ws.deltas[g].v.data(), below_rows, m,
                                  net.weights[g].rows(), net.weights[g].cols(),
                                  grad.per_layer[g].data());
            if (g == 0) break;
            // delta below = (delta_g . W_g) gated by the activation slope
            Buf& next = ws.deltas[g - 1];
            next.resize(m, net.weights[g].cols());
            matmul_rows(ws.deltas[g].v.data(), m, net.weights[g].rows(), net.weights[g].data(),
                        net.weights[g].cols(), next.v.data());
            const double* act_below = ws.acts[g - 1].v.data();
            double* np = next.v.data();
            const std::size_t blen = m * next.cols;
            for (std::size_t i = 0; i < blen; ++i) {
                np[i] *= hidden_act_->derivative_from_value(act_below[i]);
            }
        }
    }

    void costs_chunk(std::size_t lo, std::size_t hi, Workspace& ws, double& cost,
                     double& reeval) {
        const std::size_t m = hi - lo;
        const bool modified = mode_ == CostMode::modified;
        forward_chunk(inputs_, lo, hi, modified, ws);
        const std::size_t out_dim = train_target_.cols;
        const double* out = ws.acts[gaps_ - 1].v.data();
        const double* target = train_target_.row(lo);
        double c = 0.0;
        for (std::size_t i = 0; i < m * out_dim; ++i) {
            const double d = out[i] - target[i];
            c += d * d;
        }
        cost = c;
        if (remapped_.v.empty()) {
            reeval = 0.0;
            return;
        }
        const double* remap = remapped_.row(lo);
        double r = 0.0;
        if (modified) {
            for (std::size_t i = 0; i < m * out_dim; ++i) {
                const double d = out_act_->apply(out[i]) - remap[i];
                r += d * d;
            }
        } else {
            for (std::size_t i = 0; i < m * out_dim; ++i) {
                const double d = out[i] - remap[i];
                r += d * d;
            }
        }
        reeval = r;
    }

    std::size_t eval_chunk(std::size_t lo, std::size_t hi, Workspace& ws) {
        forward_chunk(test_.inputs, lo, hi, mode_ == CostMode::modified, ws);
        const Buf& out = ws.acts[gaps_ - 1];
        std::size_t correct = 0;
        for (std::size_t i = 0; i < hi - lo; ++i) {
            const double* row = out.row(i);
            std::size_t best = 0;
            for (std::size_t j = 1; j < out.cols; ++j) {
                if (row[j] > row[best]) best = j;
            }
            if (static_cast<int>(best) == test_.labels[lo + i]) ++correct;
        }
        return correct;
    }

    CostMode mode_;
    int threads_;
    std::size_t gaps_;
    std::size_t n_ = 0;
    const Activation* out_act_;
    const Activation* hidden_act_;
    Buf inputs_;
    Buf train_target_; // raw targets (classical) or pre-images (modified)
    Buf remapped_;     // remapped targets for the reeval-form cost, if present
    PackedTest test_;
    std::vector<Buf> transposed_; // W^T per layer, refreshed after updates
    std::vector<Workspace> work_;
    std::vector<GradientSet> grads_;
};

// --- per-sample engine (reference path) ---------------------------------------

std::pair<double, std::optional<double>> per_sample_costs(const Mlp& net,
                                                          const LabeledDataset& data,
                                                          CostMode mode) {
    const double cost = mode == CostMode::modified ? cost_modified(net, data)
                                                   : cost_classical(net, data, TargetKind::raw);
    if (data.remapped_targets.empty()) return {cost, std::nullopt};
    return {cost, cost_reeval(net, data)};
}

std::string synth_config_snapshot(const Mlp& net, const LabeledDataset& data,
                                  const LabeledDataset& test, CostMode mode,
                                  const Hyperparams& hp, const TrainContext& ctx) {
    std::string s;
    s += "mode=" + std::string(to_string(mode)) + "\n";
    s += "topology.layers=" + net.topology.to_string() + "\n";
    s += "hp.learning_rate=" + format_double(hp.learning_rate) + "\n";
    s += "hp.epochs=" + std::to_string(hp.epochs) + "\n";
    s += "hp.batch_size=" + (hp.batch_size == 0 ? std::string("full")
                                                : std::to_string(hp.batch_size)) + "\n";
    s += "hp.reduction=" + std::string(hp.reduction == Reduction::sum ? "sum" : "mean") + "\n";
    s += "hp.eval_every=" + std::to_string(hp.eval_every) + "\n";
    s += "hp.seed=" + std::to_string(hp.seed) + "\n";
    s += "data.train=" + data.name + "(" + std::to_string(data.size()) + ")\n";
    s += "data.test=" + test.name + "(" + std::to_string(test.size()) + ")\n";
    s += "threads=" + std::to_string(ctx.threads) + "\n";
    s += "output.timing=" + std::string(ctx.timing ? "true" : "false");
    return s;
}

} // namespace

TrainingRun train(const Mlp& initial, const LabeledDataset& data, const LabeledDataset& test,
                  CostMode mode, const Hyperparams& hp, const TrainContext& ctx) {
    hp.validate();
    initial.validate();
    if (mode == CostMode::reeval) {
        throw ConfigError("train: the reeval cost is evaluation-only; train with "
                          "classical or modified");
    }
    if (data.size() == 0) throw ValidationError("train: empty training set");
    if (test.size() == 0) throw ValidationError("train: empty test set");
    if (mode == CostMode::modified && !data.preprocessed()) {
        throw ConfigError("train: dataset '" + data.name +
                          "' has no pre-image targets; run preprocessing first");
    }

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    TrainingRun run;
    run.cost_mode = mode;
    run.initial_weights_hash = weights_hash(initial);
    run.config_snapshot =
        ctx.config_snapshot.empty() ? synth_config_snapshot(initial, data, test, mode, hp, ctx)
                                    : ctx.config_snapshot;

    Mlp net = initial;
    const std::size_t n = data.size();
    const std::size_t batch = hp.batch_size == 0 ? n : std::min(hp.batch_size, n);
    const bool full_batch = batch == n;

    bool use_batched = false;
    switch (ctx.engine) {
    case TrainContext::Engine::per_sample: use_batched = false; break;
    case TrainContext::Engine::batched: use_batched = BatchEngine::supports(net); break;
    case TrainContext::Engine::auto_select:
        use_batched = batch >= 64 && BatchEngine::supports(net);
        break;
    }

    std::optional<BatchEngine> engine;
    if (use_batched) engine.emplace(net, data, test, mode, ctx.threads);

    SplitMix64 shuffle_rng(hp.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto check_finite_weights = [&](int epoch) {
        for (const Matrix& w : net.weights) {
            if (!all_finite(w)) {
                throw DivergenceError(
                    epoch, hp.learning_rate,
                    "training diverged: non-finite weight at epoch " + std::to_string(epoch) +
                        " with learning rate " + format_double(hp.learning_rate) +
                        "; lower the learning rate");
            }
        }
    };

    for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
        if (!full_batch) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::size_t j = i + shuffle_rng.below(n - i);
                std::swap(order[i], order[j]);
            }
            if (engine) engine->set_order(order);
        }
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t stop = std::min(start + batch, n);
            GradientSet grad;
            if (engine) {
                grad = engine->gradient(net, start, stop);
            } else {
                std::span<const std::size_t> idx(order.data() + start, stop - start);
                grad = mode == CostMode::modified
                           ? grad_modified(net, data, idx)
                           : grad_classical(net, data, idx, TargetKind::raw);
            }
            double step = -hp.learning_rate;
            if (hp.reduction == Reduction::mean) step /= static_cast<double>(stop - start);
            for (std::size_t g = 0; g < net.weights.size(); ++g) {
                add_scaled(net.weights[g], grad.per_layer[g], step);
            }
            if (engine) engine->refresh_transposed(net);
        }
        check_finite_weights(epoch);

        if (epoch % hp.eval_every == 0 || epoch == hp.epochs) {
            HistoryRow row;
            row.epoch = epoch;
            auto [cost, reeval] = engine ? engine->costs(net) : per_sample_costs(net, data, mode);
            row.train_cost = cost;
            row.reeval_cost = reeval;
            if (!std::isfinite(cost) || (reeval && !std::isfinite(*reeval))) {
                throw DivergenceError(epoch, hp.learning_rate,
                                      "training diverged: non-finite cost at epoch " +
                                          std::to_string(epoch) + " with learning rate " +
                                          format_double(hp.learning_rate));
            }
            row.test_error_pct =
                engine ? engine->test_error_pct(net) : evaluate(net, test, mode).error_percent;
            if (ctx.timing) row.wall_seconds = elapsed();
            run.history.push_back(std::move(row));
        }
    }

    run.final_weights = std::move(net);
    run.total_wall_seconds = elapsed();
    return run;
}

ComparisonReport compare_methods(const Topology& topology, const LabeledDataset& data,
                                 const LabeledDataset& test, const Hyperparams& hp,
                                 std::uint64_t init_seed, const TrainContext& ctx) {
    topology.validate();
    if (!data.preprocessed()) {
        throw ConfigError("compare_methods: dataset '" + data.name +
                          "' is not preprocessed; remapped and pre-image targets are required");
    }
    const Mlp initial = init_weights(topology, init_seed);

    ComparisonReport report;
    report.classical_run = train(initial, data, test, CostMode::classical, hp, ctx);
    report.modified_run = train(initial, data, test, CostMode::modified, hp, ctx);

    const Mlp& w_classical = report.classical_run.final_weights;
    const Mlp& w_modified = report.modified_run.final_weights;
    report.final_cost_classical = cost_classical(w_classical, data, TargetKind::raw);
    report.final_cost_reeval = cost_reeval(w_modified, data);
    report.final_cost_modified = cost_modified(w_modified, data);

    const EvalReport eval_classical = evaluate(w_classical, test, CostMode::classical);
    const EvalReport eval_modified = evaluate(w_modified, test, CostMode::modified);
    report.error_pct_classical = eval_classical.error_percent;
    report.error_pct_modified = eval_modified.error_percent;
    report.accuracy_classical = eval_classical.accuracy_percent();
    report.accuracy_modified = eval_modified.accuracy_percent();

    const double l = topology.output_activation->contraction_constant();
    const double bound = l * l * report.final_cost_modified + 1e-12;
    report.contraction_holds =
        report.final_cost_reeval <= bound &&
        (report.final_cost_modified <= 1e-12 ||
         report.final_cost_reeval < l * l * report.final_cost_modified);
    if (!report.contraction_holds) {
        throw VerificationError(
            "contraction inequality violated: reeval cost " +
            format_double(report.final_cost_reeval) + " exceeds " + format_double(l * l) +
            " * modified cost " + format_double(report.final_cost_modified));
    }

    if (!report.classical_run.history.empty()) {
        const auto& classical_final = report.classical_run.history.back();
        if (classical_final.reeval_cost) {
            for (const HistoryRow& row : report.modified_run.history) {
                if (row.reeval_cost && *row.reeval_cost <= *classical_final.reeval_cost) {
                    report.crossover_epoch = row.epoch;
                    break;
                }
            }
        }
    }
    return report;
}

std::vector<RemapSearchRow> grid_search_remap(const Topology& topology,
                                              const LabeledDataset& data,
                                              const LabeledDataset& test, const Hyperparams& hp,
                                              std::uint64_t init_seed,
                                              std::span<const double> lows,
                                              const TrainContext& ctx) {
    if (lows.empty()) throw ValidationError("grid_search_remap: empty candidate list");
    for (double low : lows) {
        if (!(low > 0.0 && low < 0.5)) {
            throw ValidationError("grid_search_remap: candidate low " + format_double(low) +
                                  " must be strictly inside (0, 0.5)");
        }
    }
    const Mlp initial = init_weights(topology, init_seed);
    std::vector<RemapSearchRow> rows;
    rows.reserve(lows.size());
    for (double low : lows) {
        LabeledDataset candidate = data;
        preprocess(candidate, RemapSpec{low, 1.0 - low}, *topology.output_activation);
        TrainingRun run = train(initial, candidate, test, CostMode::modified, hp, ctx);
        const EvalReport eval = evaluate(run.final_weights, test, CostMode::modified);
        rows.push_back({low, 1.0 - low, eval.accuracy_percent(), eval.error_percent});
    }
    return rows;
}

void write_history_csv(std::ostream& os, const TrainingRun& run) {
    std::string_view snapshot = run.config_snapshot;
    while (!snapshot.empty()) {
        const std::size_t nl = snapshot.find('\n');
        os << "# " << snapshot.substr(0, nl) << "\n";
        if (nl == std::string_view::npos) break;
        snapshot.remove_prefix(nl + 1);
    }
    os << "epoch,cost_mode,train_cost,train_cost_etilde,test_error_pct,wall_seconds\n";
    for (const HistoryRow& row : run.history) {
        os << row.epoch << ',' << to_string(run.cost_mode) << ',' << format_double(row.train_cost)
           << ',';
        if (row.reeval_cost) os << format_double(*row.reeval_cost);
        os << ',' << format_double(row.test_error_pct) << ',';
        if (row.wall_seconds) os << format_double(*row.wall_seconds);
        os << '\n';
    }
}

void write_comparison_summary(std::ostream& os, const ComparisonReport& report) {
    const TrainingRun& c = report.classical_run;
    const TrainingRun& m = report.modified_run;
    os << "== method comparison ==\n";
    os << "arms trained from identical initial weights (hash "
       << c.initial_weights_hash << ")\n";
    os << "final training cost, classical (activated output vs raw targets): "
       << format_double(report.final_cost_classical) << "\n";
    os << "final training cost, modified (linear output vs pre-image targets): "
       << format_double(report.final_cost_modified) << "\n";
    os << "reeval cost of the modified weights (activated output vs remapped targets): "
       << format_double(report.final_cost_reeval) << "\n";
    os << "contraction check (reeval <= L^2 * modified): "
       << (report.contraction_holds ? "ok" : "VIOLATED") << "\n";
    os << "test error, classical: " << format_double(report.error_pct_classical)
       << "%  (accuracy " << format_double(report.accuracy_classical) << "%)\n";
    os << "test error, modified:  " << format_double(report.error_pct_modified)
       << "%  (accuracy " << format_double(report.accuracy_modified) << "%)\n";
    if (report.crossover_epoch >= 0) {
        os << "modified arm reached the classical arm's final reeval-form cost at epoch "
           << report.crossover_epoch << "\n";
    } else {
        os << "modified arm did not reach the classical arm's final reeval-form cost\n";
    }
    os << "wall seconds: classical " << format_double(c.total_wall_seconds) << ", modified "
       << format_double(m.total_wall_seconds) << "\n";
}

} // namespace cnet
