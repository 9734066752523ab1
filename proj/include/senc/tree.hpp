#pragma once

#include <map>
#include <vector>

#include "senc/core.hpp"
#include "senc/rng.hpp"

namespace senc {

/// One node of a SencTree, stored in the tree's arena. Internal nodes carry a
/// split; leaves carry the region payload: instance count, per-class
/// frequencies, the centroid of the build instances and the radius of the
/// ball that covers them, plus the path length (edges from the root).
struct TreeNode {
    int split_attribute = -1; // -1 marks a leaf
    double split_value = 0.0;
    int left = -1;
    int right = -1;

    int size = 0;
    std::map<ClassLabel, int> class_freq;
    Instance center;
    double radius = 0.0;
    int path_length = 0;

    bool is_leaf() const { return split_attribute < 0; }
};

struct RouteResult {
    int leaf_id = -1;
    int path_length = 0;
};

struct TreeVote {
    ClassLabel label = kNewClass;
};

/// Path-length threshold separating anomaly regions (short paths) from normal
/// regions. Scans every split position of the ascending path-length list and
/// picks the one minimising |sd(left) - sd(right)|, ties to the smallest
/// position; the threshold is the midpoint of the boundary gap. Returns
/// +infinity when the list has fewer than two distinct values, meaning the
/// tree has no anomaly regions.
///
/// Standard deviations are population SDs computed as
/// sqrt((n*sum(x^2) - sum(x)^2) / n^2); with integer path lengths the
/// numerator is exact, so the result is reproducible bit for bit.
double compute_path_threshold(std::vector<int> leaf_path_lengths);

/// A completely random tree over one subsample, acting simultaneously as
/// anomaly detector (per-leaf balls + path-length threshold) and classifier
/// (per-leaf class frequencies).
///
/// Splits pick a uniformly random attribute among those with distinct values
/// and a uniformly random cut point strictly inside the attribute's range, so
/// both children are always nonempty. A node becomes a leaf when its build
/// set is smaller than min_size, has no splittable attribute, or when
/// splitting would push the node count past max_nodes.
class SencTree {
public:
    /// Build from a nonempty dataset. min_size >= 1, max_nodes >= 1.
    static SencTree build(const Dataset& data, int min_size, int max_nodes,
                          Rng& rng);

    /// Descend to the leaf containing x (x[q] <= p goes left).
    RouteResult route(const Instance& x) const;

    /// NEW_CLASS when x lands in an anomaly region outside its ball;
    /// otherwise the leaf's majority class (ties to the smallest id).
    TreeVote vote(const Instance& x) const;

    /// Recompute the path-length threshold from the current leaves.
    void recompute_threshold();

    /// Synthetic stand-ins for a leaf's discarded build instances: for each
    /// class j, class_freq[j] copies of the leaf's center labeled j.
    Dataset pseudo_instances(int leaf_id) const;

    /// Replace a leaf with a subtree built over its pseudo instances plus
    /// new_instances (which must all route to this leaf). Honors the
    /// tree-wide max_nodes budget; if the budget forbids even one split, the
    /// leaf is kept as-is and only its size and class frequencies absorb the
    /// new instances.
    void grow_leaf(int leaf_id, const Dataset& new_instances, Rng& rng);

    bool is_anomaly_leaf(int leaf_id) const;
    bool has_anomaly_regions() const;

    double path_threshold() const { return path_threshold_; }
    std::size_t dimension() const { return dimension_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int root() const { return 0; }

    std::vector<int> leaf_ids() const;
    int leaf_count() const;
    int anomaly_leaf_count() const;
    /// Sum of leaf sizes == number of instances the tree has absorbed.
    long total_size() const;

    // serialize.cpp reconstructs trees directly.
    SencTree(std::vector<TreeNode> nodes, double path_threshold, int min_size,
             int max_nodes, std::size_t dimension);

private:
    SencTree() = default;

    int build_node(std::vector<const LabeledInstance*>& pts, int depth, Rng& rng);
    void build_into(int id, std::vector<const LabeledInstance*>& pts, int depth,
                    Rng& rng);
    void make_leaf(int id, const std::vector<const LabeledInstance*>& pts, int depth);

    std::vector<TreeNode> nodes_;
    double path_threshold_ = 0.0;
    int min_size_ = 1;
    int max_nodes_ = 1;
    std::size_t dimension_ = 0;
};

} // namespace senc
