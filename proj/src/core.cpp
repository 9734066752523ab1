#include "senc/core.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace senc {

double distance(const Instance& a, const Instance& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) k = n;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

Dataset subsample(const Dataset& data, std::size_t psi, Rng& rng) {
    if (data.empty())
        throw std::invalid_argument("subsample: empty dataset");
    if (psi == 0)
        throw std::invalid_argument("subsample: psi must be >= 1");
    Dataset out;
    out.dimension = data.dimension;
    const auto idx = sample_indices(data.size(), psi, rng);
    out.items.reserve(idx.size());
    for (std::size_t i : idx) out.items.push_back(data.items[i]);
    return out;
}

std::vector<Instance> subsample_instances(const std::vector<Instance>& items,
                                          std::size_t psi, Rng& rng) {
    if (items.empty())
        throw std::invalid_argument("subsample_instances: empty input");
    if (psi == 0)
        throw std::invalid_argument("subsample_instances: psi must be >= 1");
    std::vector<Instance> out;
    const auto idx = sample_indices(items.size(), psi, rng);
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(items[i]);
    return out;
}

} // namespace senc
