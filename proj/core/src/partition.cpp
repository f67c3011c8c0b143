#include "stc/partition.hpp"

#include <cmath>

#include "stc/rng.hpp"

namespace stc {

std::vector<double> volume_fractions(double alpha, double gamma, std::uint32_t n) {
    if (n == 0) throw ArgumentError("volume_fractions: n must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("volume_fractions: alpha in [0,1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ArgumentError("volume_fractions: gamma in (0,1]");
    std::vector<double> phi(n);
    double denom = 0.0;
    double g = 1.0;
    for (std::uint32_t j = 0; j < n; ++j) {
        g *= gamma; // gamma^(j+1)
        denom += g;
    }
    g = 1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        g *= gamma;
        phi[i] = alpha / n + (1.0 - alpha) * g / denom;
    }
    return phi;
}

std::vector<std::vector<std::uint32_t>> split(const Dataset& d, const SplitSpec& spec) {
    const std::uint32_t m = spec.num_clients;
    const std::uint32_t c = spec.classes_per_client;
    const std::uint32_t nc = spec.num_classes;
    if (m == 0) throw ArgumentError("split: num_clients must be positive");
    if (c < 1 || c > nc) throw ArgumentError("split: classes_per_client out of range");
    if (spec.fractions.size() != m) throw ArgumentError("split: fractions size != num_clients");
    double total = 0.0;
    for (double f : spec.fractions) {
        if (f < 0.0) throw ArgumentError("split: negative fraction");
        total += f;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw ArgumentError("split: fractions must sum to 1");
    for (std::int32_t y : d.labels)
        if (y < 0 || static_cast<std::uint32_t>(y) >= nc)
            throw DataError("split: label out of range");

    // Pre-shuffled per-class pools; sequential takes are random subsets.
    Rng rng(mix_seed(spec.seed, 0x5b117));
    std::vector<std::vector<std::uint32_t>> pool(nc);
    for (std::uint32_t i = 0; i < d.size(); ++i)
        pool[static_cast<std::uint32_t>(d.labels[i])].push_back(i);
    for (auto& p : pool) rng.shuffle(p);
    std::vector<std::size_t> cursor(nc, 0);

    const auto n_total = static_cast<double>(d.size());
    std::vector<std::vector<std::uint32_t>> shards(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        auto budget = static_cast<std::int64_t>(std::llround(spec.fractions[i] * n_total));
        const std::int64_t budget_per_class = budget > 0 ? (budget + c - 1) / c : 0;
        std::uint32_t k = static_cast<std::uint32_t>(rng.below(nc));
        std::uint32_t dry_rotations = 0;
        while (budget > 0) {
            auto avail = static_cast<std::int64_t>(pool[k].size() - cursor[k]);
            std::int64_t take = std::min({budget, budget_per_class, avail});
            if (take > 0) {
                for (std::int64_t t = 0; t < take; ++t)
                    shards[i].push_back(pool[k][cursor[k]++]);
                budget -= take;
                dry_rotations = 0;
            } else if (++dry_rotations > nc) {
                throw PartitionError("split: dataset too small for requested fractions");
            }
            k = (k + 1) % nc;
        }
    }
    return shards;
}

} // namespace stc
