// SencTree behavior: threshold selection, build structure, routing, voting,
// pseudo instances, and in-place leaf growth.

#include <doctest.h>

#include <senc/tree.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

using namespace senc;
using namespace senc::test;

namespace {

// Independent threshold scan: two-pass long-double standard deviations over
// every split position of the sorted list, ties to the smallest position,
// midpoint of the boundary gap.
double oracle_threshold(std::vector<int> paths) {
    std::sort(paths.begin(), paths.end());
    const std::size_t n = paths.size();
    if (n < 2 || paths.front() == paths.back())
        return std::numeric_limits<double>::infinity();
    auto sd = [&](std::size_t lo, std::size_t hi) {
        long double mean = 0;
        for (std::size_t i = lo; i < hi; ++i) mean += paths[i];
        mean /= static_cast<long double>(hi - lo);
        long double var = 0;
        for (std::size_t i = lo; i < hi; ++i)
            var += (paths[i] - mean) * (paths[i] - mean);
        return sqrtl(var / static_cast<long double>(hi - lo));
    };
    std::size_t best = 1;
    long double best_diff = std::numeric_limits<long double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        long double diff = fabsl(sd(0, i) - sd(i, n));
        if (diff < best_diff) {
            best_diff = diff;
            best = i;
        }
    }
    return (paths[best - 1] + paths[best]) / 2.0;
}

RouteResult manual_descent(const SencTree& tree, const Instance& x) {
    int id = tree.root();
    int edges = 0;
    while (!tree.node(id).is_leaf()) {
        const TreeNode& nd = tree.node(id);
        id = x[static_cast<std::size_t>(nd.split_attribute)] <= nd.split_value
                 ? nd.left
                 : nd.right;
        ++edges;
    }
    return {id, edges};
}

std::map<int, std::vector<const LabeledInstance*>> leaf_members(
    const SencTree& tree, const Dataset& data) {
    std::map<int, std::vector<const LabeledInstance*>> members;
    for (const auto& item : data.items)
        members[tree.route(item.features).leaf_id].push_back(&item);
    return members;
}

} // namespace

TEST_CASE("path threshold splits a bimodal list at the gap midpoint") {
    CHECK(compute_path_threshold({1, 1, 8, 9, 9, 10}) == 4.5);
}

TEST_CASE("path threshold ties resolve to the smallest split position") {
    CHECK(compute_path_threshold({2, 7}) == 4.5);
}

TEST_CASE("degenerate path lists yield no anomaly regions") {
    CHECK(std::isinf(compute_path_threshold({3, 3, 3, 3})));
    CHECK(std::isinf(compute_path_threshold({5})));
    CHECK(std::isinf(compute_path_threshold({})));
}

TEST_CASE("path threshold matches an independent scan on random lists") {
    Rng rng(21);
    for (int round = 0; round < 300; ++round) {
        std::vector<int> paths;
        std::size_t n = 1 + rng.next_below(40);
        for (std::size_t i = 0; i < n; ++i)
            paths.push_back(static_cast<int>(rng.next_below(15)));
        double got = compute_path_threshold(paths);
        double want = oracle_threshold(paths);
        if (std::isinf(want))
            CHECK(std::isinf(got));
        else
            CHECK(got == want);
    }
}

TEST_CASE("build conserves instances and honors the node budget") {
    Rng rng(1);
    Dataset data = make_blobs(100, {{0, 0}, {5, 5}}, rng);
    SencTree tree = SencTree::build(data, 10, 300, rng);

    CHECK(tree.total_size() == 200);
    CHECK(tree.node_count() <= 300);
    for (int id = 0; id < tree.node_count(); ++id) {
        const TreeNode& nd = tree.node(id);
        if (nd.is_leaf()) {
            int freq_total = 0;
            for (const auto& [label, count] : nd.class_freq) freq_total += count;
            CHECK(nd.size == freq_total);
            CHECK(nd.radius >= 0.0);
            CHECK(nd.center.size() == 2);
        } else {
            CHECK(nd.left >= 0);
            CHECK(nd.right >= 0);
        }
    }
    double tau = tree.path_threshold();
    if (!std::isinf(tau)) {
        auto leaves = tree.leaf_ids();
        int lo = tree.node(leaves.front()).path_length, hi = lo;
        for (int id : leaves) {
            lo = std::min(lo, tree.node(id).path_length);
            hi = std::max(hi, tree.node(id).path_length);
        }
        CHECK(tau > lo);
        CHECK(tau < hi);
    }
    CHECK(tree.path_threshold() ==
          compute_path_threshold([&] {
              std::vector<int> paths;
              for (int id : tree.leaf_ids())
                  paths.push_back(tree.node(id).path_length);
              return paths;
          }()));
}

TEST_CASE("small build sets stop at the root") {
    Rng rng(2);
    Dataset data = make_blobs(5, {{0, 0}}, rng);
    SencTree tree = SencTree::build(data, 10, 300, rng);
    CHECK(tree.node_count() == 1);
    CHECK(tree.node(0).size == 5);
    CHECK(tree.node(0).path_length == 0);
}

TEST_CASE("identical instances become one zero-radius leaf") {
    Dataset data;
    data.dimension = 2;
    for (int i = 0; i < 20; ++i) data.items.push_back({{1.5, -2.0}, 1});
    Rng rng(3);
    SencTree tree = SencTree::build(data, 4, 300, rng);
    CHECK(tree.node_count() == 1);
    CHECK(tree.node(0).radius == 0.0);
    CHECK(std::isinf(tree.path_threshold()));
}

TEST_CASE("every leaf stopped for a stated reason") {
    Rng rng(4);
    Dataset data = make_blobs(150, {{0, 0}, {4, 0}, {0, 4}}, rng);
    const int min_size = 10;
    for (int max_nodes : {300, 15}) {
        SencTree tree = SencTree::build(data, min_size, max_nodes, rng);
        auto members = leaf_members(tree, data);
        for (int id : tree.leaf_ids()) {
            const auto& pts = members[id];
            bool small = tree.node(id).size < min_size;
            bool identical = true;
            for (const auto* p : pts)
                identical = identical && p->features == pts.front()->features;
            bool budget = tree.node(id).size >= min_size &&
                          tree.node_count() >= max_nodes - 1;
            CHECK((small || identical || budget));
        }
    }
}

TEST_CASE("leaf balls cover their build instances") {
    Rng rng(5);
    Dataset data = make_blobs(120, {{0, 0}, {6, 6}}, rng);
    SencTree tree = SencTree::build(data, 10, 300, rng);
    for (const auto& [leaf, pts] : leaf_members(tree, data)) {
        const TreeNode& nd = tree.node(leaf);
        CHECK(static_cast<int>(pts.size()) == nd.size);
        for (const auto* p : pts)
            CHECK(distance(p->features, nd.center) <= nd.radius * (1 + 1e-9) + 1e-12);
    }
}

TEST_CASE("routing a single-leaf tree stays at the root") {
    SencTree tree = vote_tree(1, 2);
    RouteResult r = tree.route({10.0, -3.0});
    CHECK(r.leaf_id == 0);
    CHECK(r.path_length == 0);
}

TEST_CASE("instances on the split value go left") {
    TreeNode root;
    root.split_attribute = 0;
    root.split_value = 0.5;
    root.left = 1;
    root.right = 2;
    TreeNode left, right;
    left.split_attribute = right.split_attribute = -1;
    left.size = right.size = 1;
    left.class_freq = {{1, 1}};
    right.class_freq = {{2, 1}};
    left.center = right.center = {0.0};
    left.path_length = right.path_length = 1;
    SencTree tree({root, left, right},
                  std::numeric_limits<double>::infinity(), 1, 300, 1);

    CHECK(tree.route({0.5}).leaf_id == 1);
    CHECK(tree.route({0.5 + 1e-12}).leaf_id == 2);
    CHECK(tree.vote({0.5}).label == 1);
}

TEST_CASE("route matches a brute-force descent") {
    Rng rng(6);
    Dataset data = make_blobs(100, {{0, 0}, {5, 0}, {0, 5}}, rng);
    SencTree tree = SencTree::build(data, 5, 300, rng);
    for (int i = 0; i < 100; ++i) {
        Instance x = {rng.next_gaussian() * 4, rng.next_gaussian() * 4};
        RouteResult got = tree.route(x);
        RouteResult want = manual_descent(tree, x);
        CHECK(got.leaf_id == want.leaf_id);
        CHECK(got.path_length == want.path_length);
        CHECK(got.path_length == tree.node(got.leaf_id).path_length);
    }
    CHECK_THROWS_AS(tree.route({1.0}), std::invalid_argument);
}

TEST_CASE("anomaly regions classify inside the ball and flag outside it") {
    SencTree tree = leaf_tree({{1, 3}}, {0.0, 0.0}, 1.0, 1.0); // anomaly leaf
    CHECK(tree.vote({0.0, 0.0}).label == 1);                   // at the center
    CHECK(tree.vote({1.0, 0.0}).label == 1);                   // on the shell
    CHECK(tree.vote({1.0 + 1e-9, 0.0}).label == kNewClass);    // just outside
}

TEST_CASE("normal regions vote their majority even far from the ball") {
    SencTree tree = leaf_tree({{2, 5}, {7, 2}}, {0.0, 0.0}, 1.0,
                              std::numeric_limits<double>::infinity());
    CHECK(tree.vote({500.0, 500.0}).label == 2);
}

TEST_CASE("majority ties break toward the smallest class id") {
    SencTree tree = leaf_tree({{2, 3}, {5, 3}}, {0.0, 0.0}, 1.0,
                              std::numeric_limits<double>::infinity());
    CHECK(tree.vote({0.0, 0.0}).label == 2);
}

TEST_CASE("pseudo instances replicate the center per class count") {
    SencTree tree = leaf_tree({{1, 3}, {2, 2}}, {0.5, 0.5}, 0.3,
                              std::numeric_limits<double>::infinity());
    Dataset pseudo = tree.pseudo_instances(0);
    REQUIRE(pseudo.size() == 5);
    std::map<ClassLabel, int> tally;
    for (const auto& item : pseudo.items) {
        CHECK(item.features == Instance{0.5, 0.5});
        ++tally[item.label];
    }
    CHECK(tally == std::map<ClassLabel, int>{{1, 3}, {2, 2}});
}

TEST_CASE("growing a leaf keeps old frequencies in exactly one descendant") {
    Rng rng(8);
    Dataset data = make_blobs(100, {{0, 0}, {6, 0}}, rng);
    SencTree tree = SencTree::build(data, 10, 300, rng);

    // Find the leaf that absorbs the most probes from a third cluster.
    Dataset probes = make_blobs(60, {{3, 5}}, rng);
    std::map<int, Dataset> hits;
    for (const auto& item : probes.items) {
        Dataset& d = hits[tree.route(item.features).leaf_id];
        d.dimension = 2;
        d.items.push_back({item.features, 99});
    }
    auto target = std::max_element(
        hits.begin(), hits.end(),
        [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    REQUIRE(target->second.size() >= 4);

    const int leaf = target->first;
    const TreeNode before = tree.node(leaf);
    const long old_total = tree.total_size();
    tree.grow_leaf(leaf, target->second, rng);

    CHECK(tree.total_size() ==
          old_total + static_cast<long>(target->second.size()));
    CHECK(tree.node_count() <= 300);

    // The pseudo instances are coincident at the old center, so exactly one
    // descendant leaf carries the old class counts, at a depth at least the
    // old leaf's.
    RouteResult home = tree.route(before.center);
    const TreeNode& carrier = tree.node(home.leaf_id);
    CHECK(carrier.path_length >= before.path_length);
    for (const auto& [label, count] : before.class_freq) {
        auto it = carrier.class_freq.find(label);
        REQUIRE(it != carrier.class_freq.end());
        CHECK(it->second == count);
    }
    // ... and within the regrown subtree (rebuilt in place, so it is still
    // rooted at the old leaf's slot) the carrier is the only leaf holding
    // any of the old labels.
    long old_mass = 0;
    int carriers = 0;
    std::vector<int> stack{leaf};
    while (!stack.empty()) {
        const TreeNode& n = tree.node(stack.back());
        stack.pop_back();
        if (!n.is_leaf()) {
            stack.push_back(n.left);
            stack.push_back(n.right);
            continue;
        }
        long here = 0;
        for (const auto& [label, count] : n.class_freq)
            if (before.class_freq.count(label)) here += count;
        old_mass += here;
        if (here > 0) ++carriers;
    }
    long expected = 0;
    for (const auto& [label, count] : before.class_freq) expected += count;
    CHECK(old_mass == expected);
    CHECK(carriers == 1);
}

TEST_CASE("coincident growth degenerates to a merged leaf") {
    SencTree tree = leaf_tree({{1, 3}}, {0.5, 0.5}, 0.0,
                              std::numeric_limits<double>::infinity());
    Dataset incoming;
    incoming.dimension = 2;
    for (int i = 0; i < 3; ++i) incoming.items.push_back({{0.5, 0.5}, 9});
    Rng rng(9);
    tree.grow_leaf(0, incoming, rng);

    CHECK(tree.node_count() == 1);
    CHECK(tree.node(0).size == 6);
    CHECK(tree.node(0).class_freq ==
          std::map<ClassLabel, int>{{1, 3}, {9, 3}});
}

TEST_CASE("an exhausted node budget merges counts instead of splitting") {
    TreeNode leaf;
    leaf.split_attribute = -1;
    leaf.size = 3;
    leaf.class_freq = {{1, 3}};
    leaf.center = {0.0, 0.0};
    leaf.radius = 0.25;
    SencTree tree({leaf}, std::numeric_limits<double>::infinity(), 1,
                  /*max_nodes=*/1, 2);

    Dataset incoming;
    incoming.dimension = 2;
    incoming.items.push_back({{4.0, 4.0}, 9});
    incoming.items.push_back({{5.0, -1.0}, 9});
    Rng rng(10);
    tree.grow_leaf(0, incoming, rng);

    CHECK(tree.node_count() == 1);
    CHECK(tree.node(0).size == 5);
    CHECK(tree.node(0).class_freq == std::map<ClassLabel, int>{{1, 3}, {9, 2}});
    CHECK(tree.node(0).center == Instance{0.0, 0.0}); // payload untouched
    CHECK(tree.node(0).radius == 0.25);
}
