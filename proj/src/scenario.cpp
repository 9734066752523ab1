#include "senc/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace senc {

namespace {

Dataset from_means(std::size_t n, const std::vector<Instance>& means, Rng& rng) {
    const std::size_t k = means.size();
    const std::size_t dimension = means.front().size();
    Dataset data;
    data.dimension = dimension;
    data.items.reserve(n);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t count = base + (c < extra ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            Instance x(dimension);
            for (std::size_t a = 0; a < dimension; ++a)
                x[a] = means[c][a] + rng.next_gaussian();
            data.items.push_back({std::move(x), static_cast<ClassLabel>(c + 1)});
        }
    }
    return data;
}

} // namespace

Dataset generate_synthetic(std::size_t n, double separation, Rng& rng) {
    if (n < 4)
        throw std::invalid_argument("generate_synthetic: need n >= 4");
    const std::vector<Instance> means = {{0.0, 0.0},
                                         {separation, 0.0},
                                         {0.0, separation},
                                         {separation, separation}};
    return from_means(n, means, rng);
}

Dataset generate_gaussian_ring(std::size_t n, int num_classes, double separation,
                               Rng& rng) {
    if (num_classes < 1)
        throw std::invalid_argument("generate_gaussian_ring: need >= 1 class");
    if (n < static_cast<std::size_t>(num_classes))
        throw std::invalid_argument("generate_gaussian_ring: need n >= classes");
    std::vector<Instance> means;
    if (num_classes == 1) {
        means.push_back({0.0, 0.0});
    } else {
        // Radius chosen so neighboring means are exactly `separation` apart.
        const double radius =
            separation / (2.0 * std::sin(std::numbers::pi / num_classes));
        for (int c = 0; c < num_classes; ++c) {
            const double angle = 2.0 * std::numbers::pi * c / num_classes;
            means.push_back({radius * std::cos(angle), radius * std::sin(angle)});
        }
    }
    return from_means(n, means, rng);
}

Dataset generate_simplex(std::size_t n, int num_classes, double separation,
                         Rng& rng) {
    if (num_classes < 1)
        throw std::invalid_argument("generate_simplex: need >= 1 class");
    if (n < static_cast<std::size_t>(num_classes))
        throw std::invalid_argument("generate_simplex: need n >= classes");
    // One-hot means scaled so |mean_i - mean_j| == separation for all pairs.
    const double scale = separation / std::sqrt(2.0);
    std::vector<Instance> means(
        static_cast<std::size_t>(num_classes),
        Instance(static_cast<std::size_t>(num_classes), 0.0));
    for (int c = 0; c < num_classes; ++c)
        means[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)] = scale;
    return from_means(n, means, rng);
}

ScenarioStream build_scenario_stream(const StreamScenario& scenario, Rng& rng) {
    if (scenario.num_sources < 1 || scenario.source_per_class < 1 ||
        scenario.train_per_class < 1 || scenario.training.empty())
        throw std::invalid_argument("build_scenario_stream: bad scenario");
    for (const auto& period : scenario.periods)
        if (period.components.empty() || period.count < 1)
            throw std::invalid_argument("build_scenario_stream: bad period");

    if (scenario.layout == SourceLayout::square && scenario.num_sources != 4)
        throw std::invalid_argument(
            "build_scenario_stream: square layout needs 4 sources");

    const std::size_t total = static_cast<std::size_t>(scenario.num_sources) *
                              static_cast<std::size_t>(scenario.source_per_class);
    Dataset source;
    switch (scenario.layout) {
    case SourceLayout::square:
        source = generate_synthetic(total, scenario.separation, rng);
        break;
    case SourceLayout::ring:
        source = generate_gaussian_ring(total, scenario.num_sources,
                                        scenario.separation, rng);
        break;
    case SourceLayout::simplex:
        source = generate_simplex(total, scenario.num_sources,
                                  scenario.separation, rng);
        break;
    }

    // Shuffled per-class index pools, consumed front to back.
    std::vector<std::vector<std::size_t>> pools(
        static_cast<std::size_t>(scenario.num_sources));
    for (std::size_t i = 0; i < source.items.size(); ++i)
        pools[static_cast<std::size_t>(source.items[i].label - 1)].push_back(i);
    for (auto& pool : pools)
        for (std::size_t i = pool.size(); i > 1; --i)
            std::swap(pool[i - 1], pool[rng.next_below(i)]);
    std::vector<std::size_t> cursors(pools.size(), 0);

    auto draw = [&](int source_class) -> const LabeledInstance& {
        if (source_class < 1 || source_class > scenario.num_sources)
            throw std::invalid_argument("build_scenario_stream: unknown source class");
        auto& cursor = cursors[static_cast<std::size_t>(source_class - 1)];
        const auto& pool = pools[static_cast<std::size_t>(source_class - 1)];
        if (cursor >= pool.size())
            throw std::runtime_error("build_scenario_stream: source class " +
                                     std::to_string(source_class) +
                                     " exhausted; raise source_per_class");
        return source.items[pool[cursor++]];
    };

    ScenarioStream out;
    out.training.dimension = source.dimension;
    for (const auto& component : scenario.training)
        for (long i = 0; i < scenario.train_per_class; ++i)
            out.training.items.push_back(
                {draw(component.source_class).features, component.stream_id});

    for (const auto& period : scenario.periods) {
        out.period_starts.push_back(static_cast<long>(out.items.size()));
        for (long i = 0; i < period.count; ++i) {
            const MixtureComponent& component =
                period.components[rng.next_below(period.components.size())];
            out.items.push_back(
                {draw(component.source_class).features, component.stream_id});
        }
    }
    return out;
}

StreamScenario two_period_scenario(bool base_size) {
    StreamScenario s;
    s.name = base_size ? "two-period-base" : "two-period";
    s.num_sources = 4;
    s.separation = 5.0;
    s.source_per_class = 5000;
    s.train_per_class = base_size ? 500 : 1000;
    s.training = {{1, 1}, {2, 2}};
    s.periods = {{{{1, 1}, {2, 2}, {3, 3}}, base_size ? 1000 : 2000},
                 {{{1, 1}, {2, 2}, {3, 3}, {4, 4}}, base_size ? 1500 : 3000}};
    s.buffer_size = base_size ? 250 : 500;
    return s;
}

StreamScenario single_period_control_scenario() {
    StreamScenario s;
    s.name = "control";
    s.num_sources = 4;
    s.separation = 5.0;
    s.source_per_class = 5000;
    s.train_per_class = 500;
    s.training = {{1, 1}, {2, 2}};
    s.periods = {{{{1, 1}, {2, 2}}, 1000}};
    s.buffer_size = 250;
    return s;
}

StreamScenario long_stream_scenario() {
    StreamScenario s;
    s.name = "ring-12-period";
    s.layout = SourceLayout::ring;
    s.num_sources = 10;
    s.separation = 8.0;
    s.source_per_class = 4000;
    s.train_per_class = 500;
    // Stride-3 assignment spreads each forest's classes around the ring, so
    // an emerging source sits inside live forests' envelopes (in a sparse
    // gap, where isolation is quick) instead of behind one forest's edge.
    // Sources recur after ten ids, exactly when their old forest retires.
    auto source_of = [](int stream_id) { return (3 * (stream_id - 1)) % 10 + 1; };
    s.training = {{1, source_of(1)}, {2, source_of(2)}};
    for (int p = 1; p <= 12; ++p) {
        ScenarioPeriod period;
        for (int id = p; id <= p + 2; ++id)
            period.components.push_back({id, source_of(id)});
        period.count = 1000;
        s.periods.push_back(period);
    }
    s.buffer_size = 250;
    return s;
}

StreamScenario multi_new_scenario() {
    StreamScenario s;
    s.name = "ring-multi-new";
    s.layout = SourceLayout::ring;
    s.num_sources = 8;
    s.separation = 5.0;
    s.source_per_class = 2000;
    s.train_per_class = 500;
    s.training = {{1, 1}, {2, 2}};
    // Each period: the previous pair of sources stays known, two fresh
    // sources emerge merged under one new stream id.
    s.periods = {{{{1, 1}, {2, 2}, {3, 3}, {3, 4}}, 2000},
                 {{{3, 3}, {3, 4}, {4, 5}, {4, 6}}, 2000},
                 {{{4, 5}, {4, 6}, {5, 7}, {5, 8}}, 2000}};
    s.buffer_size = 250;
    return s;
}

} // namespace senc
