#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cnet/cost.hpp"
#include "cnet/eval.hpp"
#include "cnet/preprocess.hpp"

namespace cnet {

/// A comparison-run invariant failed (e.g. the contraction inequality).
class VerificationError : public Error {
public:
    using Error::Error;
};

enum class Reduction {
    sum,  // gradients are plain sums over the batch (the cost is a plain sum)
    mean, // step scales the summed gradient by 1/batch, for lr portability
};

struct Hyperparams {
    double learning_rate = 0.5;
    int epochs = 1;
    std::size_t batch_size = 0; // 0 = full batch
    Reduction reduction = Reduction::sum;
    int eval_every = 1; // epochs between metric snapshots
    std::uint64_t seed = 0; // mini-batch shuffling stream

    void validate() const;
};

/// How train() executes; results are identical up to floating-point
/// association (~1e-12), and bitwise reproducible for a fixed context.
struct TrainContext {
    int threads = 1;
    /// Record wall-clock seconds in history rows. Off by default so that
    /// repeated runs of the same config produce byte-identical CSV output.
    bool timing = false;
    enum class Engine { auto_select, per_sample, batched } engine = Engine::auto_select;
    /// Full resolved configuration, embedded in outputs. The trainer
    /// synthesizes its own view when the caller leaves it empty.
    std::string config_snapshot;
};

/// One metric snapshot. train_cost is the functional being minimized,
/// summed over the full training set. reeval_cost is the classical-form
/// cost on remapped targets at the same weights (present whenever remapped
/// targets exist; for the modified mode this is the quantity the method is
/// judged by).
struct HistoryRow {
    int epoch = 0;
    double train_cost = 0.0;
    std::optional<double> reeval_cost;
    double test_error_pct = 0.0;
    std::optional<double> wall_seconds;
};

struct TrainingRun {
    CostMode cost_mode = CostMode::classical;
    std::vector<HistoryRow> history;
    Mlp final_weights;
    std::string config_snapshot;
    std::uint64_t initial_weights_hash = 0;
    double total_wall_seconds = 0.0; // always measured; never in the CSV
};

/// Plain gradient descent on the chosen cost. Weights update as
/// W <- W - lr * grad (grad scaled by 1/batch under mean reduction); metric
/// snapshots are taken after the update every eval_every epochs and at the
/// final epoch. Throws DivergenceError the moment a weight or cost goes
/// non-finite.
TrainingRun train(const Mlp& initial, const LabeledDataset& data, const LabeledDataset& test,
                  CostMode mode, const Hyperparams& hp, const TrainContext& ctx = {});

/// Everything the four-step comparison produces.
struct ComparisonReport {
    TrainingRun classical_run;
    TrainingRun modified_run;
    double final_cost_classical = 0.0; // classical cost of the classical arm, raw targets
    double final_cost_reeval = 0.0;    // reeval cost of the modified arm
    double final_cost_modified = 0.0;  // linear-output cost of the modified arm
    double error_pct_classical = 0.0;
    double error_pct_modified = 0.0;
    double accuracy_classical = 0.0; // percent
    double accuracy_modified = 0.0;
    /// reeval <= L^2 * modified held at the optimum (checked, and also
    /// enforced with a VerificationError when violated).
    bool contraction_holds = false;
    /// First snapshot epoch at which the modified arm's reeval cost is at
    /// or below the classical arm's final reeval-form cost; -1 if never.
    int crossover_epoch = -1;
};

/// Trains both arms from bitwise-identical initial weights (init_seed) and
/// evaluates the four-step protocol. `data` must already be preprocessed.
ComparisonReport compare_methods(const Topology& topology, const LabeledDataset& data,
                                 const LabeledDataset& test, const Hyperparams& hp,
                                 std::uint64_t init_seed, const TrainContext& ctx = {});

struct RemapSearchRow {
    double low = 0.0;
    double high = 0.0;
    double accuracy_modified = 0.0; // percent, on the test set
    double error_pct_modified = 0.0;
};

/// Re-runs the modified arm for each candidate (low, 1-low) remap pair.
/// Candidates must be strictly inside (0, 0.5).
std::vector<RemapSearchRow> grid_search_remap(const Topology& topology,
                                              const LabeledDataset& data,
                                              const LabeledDataset& test, const Hyperparams& hp,
                                              std::uint64_t init_seed,
                                              std::span<const double> lows,
                                              const TrainContext& ctx = {});

/// CSV schema: epoch,cost_mode,train_cost,train_cost_etilde,test_error_pct,wall_seconds
/// with empty fields where a quantity is not applicable. The config snapshot
/// is embedded as leading '#' comment lines.
void write_history_csv(std::ostream& os, const TrainingRun& run);

void write_comparison_summary(std::ostream& os, const ComparisonReport& report);

/// Lowercase text for CSV/summary emission, shortest round-trip form.
std::string format_double(double v);

} // namespace cnet
