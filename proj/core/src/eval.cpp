#include "cnet/eval.hpp"

#include <iomanip>
#include <ostream>

namespace cnet {

std::size_t argmax(const Vector& v, bool* tie) {
    std::size_t best = 0;
    bool tied = false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) {
            best = i;
            tied = false;
        } else if (v[i] == v[best]) {
            tied = true;
        }
    }
    if (tie) *tie = tied;
    return best;
}

int classify(const Mlp& net, const Vector& x, CostMode mode, bool* tie) {
    const ForwardTrace trace =
        mode == CostMode::modified ? forward_linear_output(net, x) : forward(net, x);
    return static_cast<int>(argmax(trace.output(), tie));
}

EvalReport evaluate(const Mlp& net, const LabeledDataset& test, CostMode mode) {
    if (test.size() == 0) throw ValidationError("evaluate: empty test set");
    EvalReport report;
    report.classes = test.target_dim();
    report.confusion.assign(report.classes * report.classes, 0);
    report.total = test.size();
    for (std::size_t i = 0; i < test.size(); ++i) {
        bool tie = false;
        const int predicted = classify(net, test.inputs[i], mode, &tie);
        if (tie) ++report.ties;
        const int truth = test.labels[i];
        ++report.at(truth, predicted);
        if (predicted == truth) ++report.correct;
    }
    report.error_percent =
        100.0 * (1.0 - static_cast<double>(report.correct) / static_cast<double>(report.total));
    return report;
}

void print_confusion(const EvalReport& report, std::ostream& os) {
    os << "confusion matrix (rows: truth, cols: predicted), " << report.correct << "/"
       << report.total << " correct, error " << std::fixed << std::setprecision(2)
       << report.error_percent << "%";
    if (report.ties) os << ", " << report.ties << " argmax ties";
    os << "\n     ";
    for (std::size_t c = 0; c < report.classes; ++c) os << std::setw(6) << c;
    os << "\n";
    for (std::size_t r = 0; r < report.classes; ++r) {
        os << std::setw(4) << r << " ";
        for (std::size_t c = 0; c < report.classes; ++c) os << std::setw(6) << report.at(r, c);
        os << "\n";
    }
    os.unsetf(std::ios::fixed);
}

} // namespace cnet
