#pragma once

#include <cstdint>
#include <iosfwd>

#include "cnet/cost.hpp"

namespace cnet {

/// Classification accuracy summary with a full confusion matrix
/// (row = true class, column = predicted class).
struct EvalReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t ties = 0; // argmax ties broken toward the lowest index
    double error_percent = 0.0;
    std::size_t classes = 0;
    std::vector<std::uint64_t> confusion; // classes x classes, row-major

    std::uint64_t& at(std::size_t truth, std::size_t predicted) {
        return confusion[truth * classes + predicted];
    }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const {
        return confusion[truth * classes + predicted];
    }
    double accuracy_percent() const { return 100.0 - error_percent; }
};

/// Argmax over the network's 10 outputs. The classical mode reads the
/// activated output, the modified mode the linear output; a strictly
/// increasing output activation makes the two decisions identical, which
/// the test suite verifies rather than assumes. Ties go to the lowest
/// index and are flagged.
int classify(const Mlp& net, const Vector& x, CostMode mode, bool* tie = nullptr);

/// Index of the largest component, lowest index on ties.
std::size_t argmax(const Vector& v, bool* tie = nullptr);

/// Per-sample classify against the true labels. Deterministic.
EvalReport evaluate(const Mlp& net, const LabeledDataset& test, CostMode mode);

/// Text confusion-matrix block.
void print_confusion(const EvalReport& report, std::ostream& os);

} // namespace cnet
