#pragma once

#include <string>
#include <vector>

#include "senc/core.hpp"
#include "senc/rng.hpp"
#include "senc/stream.hpp"

namespace senc {

/// 2-D dataset of n points in 4 equal classes, isotropic unit-variance
/// Gaussians centered on the corners of a square with side = separation.
/// Larger separation means easier detection; 0 collapses all classes.
Dataset generate_synthetic(std::size_t n, double separation, Rng& rng);

/// 2-D dataset of n points in num_classes equal classes, isotropic
/// unit-variance Gaussians centered on a circle sized so neighboring means
/// are separation apart. With num_classes == 4 this is the square layout.
Dataset generate_gaussian_ring(std::size_t n, int num_classes, double separation,
                               Rng& rng);

/// num_classes-dimensional dataset of n points in num_classes equal classes:
/// unit-variance Gaussians at scaled one-hot means, so every pair of class
/// centers is exactly separation apart (a regular simplex). The layout every
/// long-stream scenario wants: no class is ever "behind" another.
Dataset generate_simplex(std::size_t n, int num_classes, double separation,
                         Rng& rng);

/// One ingredient of a period's mixture: instances of source_class presented
/// to the evaluator under stream_id. Several components may share a
/// stream_id (multiple sources merged into one emerging class).
struct MixtureComponent {
    int stream_id = 0;
    int source_class = 0;
};

struct ScenarioPeriod {
    std::vector<MixtureComponent> components;
    long count = 0;
};

enum class SourceLayout {
    square,  // generate_synthetic; requires num_sources == 4
    ring,    // generate_gaussian_ring
    simplex, // generate_simplex
};

/// A full experiment script: which source classes make up training, and the
/// uniform class mixture of every stream period.
struct StreamScenario {
    std::string name;
    SourceLayout layout = SourceLayout::square;
    int num_sources = 4;     // distinct classes in the source dataset
    double separation = 5.0; // generator knob
    long source_per_class = 5000;
    long train_per_class = 500;
    std::vector<MixtureComponent> training; // stream ids 1..K
    std::vector<ScenarioPeriod> periods;
    int buffer_size = 250;
};

struct ScenarioStream {
    Dataset training;              // labeled with stream ids
    std::vector<StreamItem> items; // in stream order, true labels attached
    std::vector<long> period_starts;
};

/// Materialize a scenario: generate the source data, carve per-class pools,
/// fill the training set, then draw every period's instances by picking a
/// mixture component uniformly at random per instance. Pools are consumed
/// without replacement; an exhausted pool is an error (size the scenario's
/// source_per_class generously).
ScenarioStream build_scenario_stream(const StreamScenario& scenario, Rng& rng);

/// Two-period script: train on classes 1,2; class 3 emerges in period one,
/// class 4 in period two. Full size (1000/class training, 2000 + 3000
/// instances, buffer 500) by default; base_size halves everything (the
/// "two-period-base" variant).
StreamScenario two_period_scenario(bool base_size = false);

/// One period, no emerging class: pure known-class classification.
StreamScenario single_period_control_scenario();

/// Twelve periods of 1000 instances over 10 ring sources; period p mixes
/// known ids {p, p+1} with emerging id p+2, so one class emerges per period
/// and old classes fade out. Source classes are reused modulo 10.
StreamScenario long_stream_scenario();

/// Three periods of 2000 instances over 8 ring sources; each period two
/// fresh sources emerge merged under a single new stream id, alongside the
/// previous period's pair.
StreamScenario multi_new_scenario();

} // namespace senc
