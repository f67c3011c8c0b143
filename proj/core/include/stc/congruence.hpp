#pragma once

#include <cstdint>

#include "stc/data.hpp"
#include "stc/model.hpp"

namespace stc {

enum class BatchMode { iid, single_class };

// Monte-Carlo estimate of the probability that a size-k batch gradient agrees
// in sign with the full-data gradient, averaged over coordinates and trials.
// iid batches sample uniformly without replacement; single_class batches draw
// all k samples from one uniformly chosen class. sign(0) counts as +1.
double congruence_alpha(const FlatTensor& params, const ModelSpec& spec, const Dataset& data,
                        const InputTransform& t, std::uint32_t k, BatchMode mode,
                        std::uint32_t trials, std::uint64_t seed);

} // namespace stc
