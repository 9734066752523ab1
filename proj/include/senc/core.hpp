#pragma once

#include <cstddef>
#include <vector>

#include "senc/rng.hpp"

namespace senc {

/// Dense numeric feature vector; the unit flowing through a stream.
/// All values must be finite and the dimension is fixed per dataset/model.
using Instance = std::vector<double>;

/// Known classes carry dense positive ids 1..m assigned in discovery order.
/// kNewClass is the reserved sentinel for "emerging new class".
using ClassLabel = int;
inline constexpr ClassLabel kNewClass = 0;

struct LabeledInstance {
    Instance features;
    ClassLabel label = kNewClass;
};

struct Dataset {
    std::vector<LabeledInstance> items;
    std::size_t dimension = 0;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

/// Euclidean (L2) distance. Throws std::invalid_argument on dimension mismatch.
double distance(const Instance& a, const Instance& b);

/// k distinct indices from [0, n), sampled uniformly without replacement
/// (partial Fisher-Yates); k is clamped to n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng);

/// Uniform subsample of min(psi, |data|) items without replacement.
/// Throws std::invalid_argument if data is empty or psi == 0.
Dataset subsample(const Dataset& data, std::size_t psi, Rng& rng);

/// Same sampling over bare instances (used for buffer draws during updates).
std::vector<Instance> subsample_instances(const std::vector<Instance>& items,
                                          std::size_t psi, Rng& rng);

} // namespace senc
