#pragma once

#include <cstdint>
#include <vector>

#include "stc/data.hpp"

namespace stc {

struct SplitSpec {
    std::uint32_t num_clients = 1;
    std::uint32_t classes_per_client = 1;
    std::uint32_t num_classes = 1;
    std::vector<double> fractions; // per-client volume, sums to 1
    std::uint64_t seed = 0;
};

// Client volume fractions phi_i = alpha/n + (1-alpha) * gamma^i / sum_j gamma^j
// for i = 1..n. gamma = 1 (or alpha = 1) gives the uniform split.
std::vector<double> volume_fractions(double alpha, double gamma, std::uint32_t n);

// Class-rotation split: each client draws a random start class and takes up to
// budget/classes_per_client samples per class, advancing cyclically, until its
// volume budget is filled. Shards are disjoint index lists into the dataset.
std::vector<std::vector<std::uint32_t>> split(const Dataset& d, const SplitSpec& spec);

} // namespace stc
