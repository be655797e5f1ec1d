#pragma once

#include "cnet/activation.hpp"
#include "cnet/data.hpp"

namespace cnet {

/// The two interior codomain values that replace 0 and 1 in the targets so
/// the inverse activation stays finite. Defaults are the tuned constants
/// used by all experiments; note low + high = 1, which makes the sigmoid
/// pre-images symmetric.
struct RemapSpec {
    double low = 0.2227;
    double high = 0.7773;

    /// low < high, both strictly inside the activation codomain.
    void validate(const Activation& act) const;
};

/// 0 -> low, 1 -> high componentwise. Any component that is not exactly 0
/// or 1 raises a ValidationError listing the offending indices, so feeding
/// an already-remapped vector through again fails loudly instead of
/// silently compounding.
Vector remap_targets(const Vector& y, const RemapSpec& spec);

/// Componentwise inverse activation of a remapped target.
Vector preimage_targets(const Vector& remapped, const Activation& act);

/// Fills the dataset's remapped and pre-image target caches in one pass.
/// They are constants of the optimization, so this runs once at load time,
/// never per epoch. Must happen before training the modified cost.
void preprocess(LabeledDataset& data, const RemapSpec& spec, const Activation& act);

} // namespace cnet
