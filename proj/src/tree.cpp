#include "senc/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace senc {

namespace {

// Population SD of the integer values with prefix sums (s1, s2) over n items.
// n * s2 - s1^2 is an exact integer in double range for tree-sized inputs.
double population_sd(double s1, double s2, double n) {
    return std::sqrt((n * s2 - s1 * s1) / (n * n));
}

} // namespace

double compute_path_threshold(std::vector<int> lengths) {
    std::sort(lengths.begin(), lengths.end());
    const std::size_t n = lengths.size();
    if (n < 2 || lengths.front() == lengths.back())
        return std::numeric_limits<double>::infinity();

    std::vector<double> pre1(n + 1, 0.0), pre2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = lengths[i];
        pre1[i + 1] = pre1[i] + v;
        pre2[i + 1] = pre2[i] + v * v;
    }

    std::size_t best = 0;
    double best_diff = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        const double left = population_sd(pre1[i], pre2[i], static_cast<double>(i));
        const double right = population_sd(pre1[n] - pre1[i], pre2[n] - pre2[i],
                                           static_cast<double>(n - i));
        const double diff = std::abs(left - right);
        if (diff < best_diff) {
            best_diff = diff;
            best = i;
        }
    }
    return (lengths[best - 1] + lengths[best]) / 2.0;
}

SencTree::SencTree(std::vector<TreeNode> nodes, double path_threshold,
                   int min_size, int max_nodes, std::size_t dimension)
    : nodes_(std::move(nodes)),
      path_threshold_(path_threshold),
      min_size_(min_size),
      max_nodes_(max_nodes),
      dimension_(dimension) {}

SencTree SencTree::build(const Dataset& data, int min_size, int max_nodes,
                         Rng& rng) {
    if (data.empty())
        throw std::invalid_argument("SencTree::build: empty dataset");
    if (min_size < 1 || max_nodes < 1)
        throw std::invalid_argument("SencTree::build: min_size and max_nodes must be >= 1");

    SencTree tree;
    tree.min_size_ = min_size;
    tree.max_nodes_ = max_nodes;
    tree.dimension_ = data.dimension;
    tree.nodes_.reserve(static_cast<std::size_t>(max_nodes));

    std::vector<const LabeledInstance*> pts;
    pts.reserve(data.size());
    for (const auto& item : data.items) pts.push_back(&item);

    tree.build_node(pts, 0, rng);
    tree.recompute_threshold();
    return tree;
}

void SencTree::make_leaf(int id, const std::vector<const LabeledInstance*>& pts,
                         int depth) {
    TreeNode& leaf = nodes_[static_cast<std::size_t>(id)];
    leaf.split_attribute = -1;
    leaf.left = leaf.right = -1;
    leaf.size = static_cast<int>(pts.size());
    leaf.path_length = depth;

    leaf.center.assign(dimension_, 0.0);
    for (const auto* p : pts)
        for (std::size_t a = 0; a < dimension_; ++a)
            leaf.center[a] += p->features[a];
    for (std::size_t a = 0; a < dimension_; ++a)
        leaf.center[a] /= static_cast<double>(pts.size());

    leaf.radius = 0.0;
    for (const auto* p : pts)
        leaf.radius = std::max(leaf.radius, distance(p->features, leaf.center));

    leaf.class_freq.clear();
    for (const auto* p : pts) ++leaf.class_freq[p->label];
}

int SencTree::build_node(std::vector<const LabeledInstance*>& pts, int depth,
                         Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    build_into(id, pts, depth, rng);
    return id;
}

void SencTree::build_into(int id, std::vector<const LabeledInstance*>& pts,
                          int depth, Rng& rng) {
    const bool budget_ok = node_count() + 2 <= max_nodes_;
    if (static_cast<int>(pts.size()) < min_size_ || !budget_ok) {
        make_leaf(id, pts, depth);
        return;
    }

    // Only attributes with at least two distinct values are splittable.
    std::vector<int> splittable;
    std::vector<double> lo(dimension_), hi(dimension_);
    for (std::size_t a = 0; a < dimension_; ++a) {
        lo[a] = hi[a] = pts[0]->features[a];
        for (const auto* p : pts) {
            lo[a] = std::min(lo[a], p->features[a]);
            hi[a] = std::max(hi[a], p->features[a]);
        }
        if (lo[a] < hi[a]) splittable.push_back(static_cast<int>(a));
    }
    if (splittable.empty()) {
        make_leaf(id, pts, depth);
        return;
    }

    const int q = splittable[rng.next_below(splittable.size())];
    const double p = rng.next_open(lo[static_cast<std::size_t>(q)],
                                   hi[static_cast<std::size_t>(q)]);

    std::vector<const LabeledInstance*> left_pts, right_pts;
    for (const auto* pt : pts) {
        if (pt->features[static_cast<std::size_t>(q)] <= p)
            left_pts.push_back(pt);
        else
            right_pts.push_back(pt);
    }
    pts.clear();
    pts.shrink_to_fit();

    const int left = build_node(left_pts, depth + 1, rng);
    const int right = build_node(right_pts, depth + 1, rng);

    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    node.split_attribute = q;
    node.split_value = p;
    node.left = left;
    node.right = right;
}

RouteResult SencTree::route(const Instance& x) const {
    if (x.size() != dimension_)
        throw std::invalid_argument("SencTree::route: dimension mismatch");
    int id = 0;
    while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
        const TreeNode& n = nodes_[static_cast<std::size_t>(id)];
        id = x[static_cast<std::size_t>(n.split_attribute)] <= n.split_value
                 ? n.left
                 : n.right;
    }
    return {id, nodes_[static_cast<std::size_t>(id)].path_length};
}

bool SencTree::has_anomaly_regions() const {
    return std::isfinite(path_threshold_);
}

bool SencTree::is_anomaly_leaf(int leaf_id) const {
    return has_anomaly_regions() &&
           nodes_[static_cast<std::size_t>(leaf_id)].path_length < path_threshold_;
}

TreeVote SencTree::vote(const Instance& x) const {
    const RouteResult r = route(x);
    const TreeNode& leaf = nodes_[static_cast<std::size_t>(r.leaf_id)];
    if (is_anomaly_leaf(r.leaf_id) && distance(x, leaf.center) > leaf.radius)
        return {kNewClass};

    ClassLabel best = kNewClass;
    int best_count = -1;
    for (const auto& [label, count] : leaf.class_freq) {
        if (count > best_count) { // map order makes ties pick the smallest id
            best = label;
            best_count = count;
        }
    }
    return {best};
}

void SencTree::recompute_threshold() {
    std::vector<int> lengths;
    for (const auto& n : nodes_)
        if (n.is_leaf()) lengths.push_back(n.path_length);
    path_threshold_ = compute_path_threshold(std::move(lengths));
}

Dataset SencTree::pseudo_instances(int leaf_id) const {
    const TreeNode& leaf = nodes_[static_cast<std::size_t>(leaf_id)];
    if (!leaf.is_leaf())
        throw std::invalid_argument("pseudo_instances: node is not a leaf");
    Dataset out;
    out.dimension = dimension_;
    out.items.reserve(static_cast<std::size_t>(leaf.size));
    for (const auto& [label, count] : leaf.class_freq)
        for (int i = 0; i < count; ++i)
            out.items.push_back({leaf.center, label});
    return out;
}

void SencTree::grow_leaf(int leaf_id, const Dataset& new_instances, Rng& rng) {
    if (new_instances.empty())
        throw std::invalid_argument("grow_leaf: no new instances");
    TreeNode& old = nodes_[static_cast<std::size_t>(leaf_id)];
    if (!old.is_leaf())
        throw std::invalid_argument("grow_leaf: node is not a leaf");

    if (node_count() + 2 > max_nodes_) {
        // Budget exhausted: keep the leaf payload, absorb the counts only.
        old.size += static_cast<int>(new_instances.size());
        for (const auto& item : new_instances.items)
            ++old.class_freq[item.label];
        return;
    }

    const Dataset pseudo = pseudo_instances(leaf_id);
    std::vector<const LabeledInstance*> pts;
    pts.reserve(pseudo.size() + new_instances.size());
    for (const auto& item : pseudo.items) pts.push_back(&item);
    for (const auto& item : new_instances.items) pts.push_back(&item);

    const int depth = old.path_length;

    // Rebuild in place: the old leaf's slot becomes the subtree root, so the
    // parent link stays valid and no arena slot is orphaned.
    build_into(leaf_id, pts, depth, rng);
}

std::vector<int> SencTree::leaf_ids() const {
    std::vector<int> ids;
    for (int i = 0; i < node_count(); ++i)
        if (nodes_[static_cast<std::size_t>(i)].is_leaf()) ids.push_back(i);
    return ids;
}

int SencTree::leaf_count() const {
    int n = 0;
    for (const auto& node : nodes_)
        if (node.is_leaf()) n += 1;
    return n;
}

int SencTree::anomaly_leaf_count() const {
    int n = 0;
    for (int i = 0; i < node_count(); ++i)
        if (nodes_[static_cast<std::size_t>(i)].is_leaf() && is_anomaly_leaf(i)) n += 1;
    return n;
}

long SencTree::total_size() const {
    long sum = 0;
    for (const auto& node : nodes_)
        if (node.is_leaf()) sum += node.size;
    return sum;
}

} // namespace senc
