#include "cnet/preprocess.hpp"

#include <string>

namespace cnet {

void RemapSpec::validate(const Activation& act) const {
    if (!(low < high)) {
        throw ConfigError("remap: low " + std::to_string(low) + " must be < high " +
                          std::to_string(high));
    }
    if (!act.codomain().contains_open(low) || !act.codomain().contains_open(high)) {
        throw ConfigError("remap: values (" + std::to_string(low) + ", " + std::to_string(high) +
                          ") must lie strictly inside the " + act.name() + " codomain");
    }
}

Vector remap_targets(const Vector& y, const RemapSpec& spec) {
    Vector out(y.size());
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0) {
            out[i] = spec.low;
        } else if (y[i] == 1.0) {
            out[i] = spec.high;
        } else {
            bad.push_back(i);
        }
    }
    if (!bad.empty()) {
        std::string msg = "remap_targets: components not in {0,1} at indices";
        for (std::size_t i : bad) msg += " " + std::to_string(i);
        throw ValidationError(msg, std::move(bad));
    }
    return out;
}

Vector preimage_targets(const Vector& remapped, const Activation& act) {
    return act.apply_inverse(remapped);
}

void preprocess(LabeledDataset& data, const RemapSpec& spec, const Activation& act) {
    spec.validate(act);
    data.remapped_targets.clear();
    data.preimage_targets.clear();
    data.remapped_targets.reserve(data.size());
    data.preimage_targets.reserve(data.size());
    for (const Vector& y : data.raw_targets) {
        Vector remapped = remap_targets(y, spec);
        data.preimage_targets.push_back(preimage_targets(remapped, act));
        data.remapped_targets.push_back(std::move(remapped));
    }
}

} // namespace cnet
