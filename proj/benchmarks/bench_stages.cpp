// Microbenchmarks for the per-stage hot paths: spectral derivatives, feature
// projection, windowed association, center updates, token aggregation and the
// classifier forward pass.
#include <benchmark/benchmark.h>

#include "sst/classifier.hpp"
#include "sst/cluster.hpp"
#include "sst/derivative.hpp"
#include "sst/features.hpp"
#include "sst/rng.hpp"
#include "sst/synthetic.hpp"

using namespace sst;

namespace {

HsiCube scene_cube(int side, int bands) {
    auto [cube, labels] = make_synthetic_scene(quadrant_scene(side, side, bands, 0.05, 11));
    (void)labels;
    return cube;
}

FeatureMap random_features(int h, int w, int dim, uint64_t seed) {
    FeatureMap fm(h, w, dim);
    Rng rng(seed);
    for (auto& v : fm.rows) v = rng.uniform(-1.0, 1.0);
    return fm;
}

void bm_first_derivative(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const CubeD cube = to_double_cube(scene_cube(side, 32));
    for (auto _ : state) benchmark::DoNotOptimize(first_derivative(cube, 1));
    state.SetItemsProcessed(state.iterations() * cube.pixels());
}

void bm_semantic_features(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const HsiCube cube = scene_cube(side, 32);
    const ProviderConfig cfg{"linear", 32, 3};
    for (auto _ : state) benchmark::DoNotOptimize(semantic_features(cube, cfg));
    state.SetItemsProcessed(state.iterations() * cube.pixels());
}

void bm_associations(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const FeatureMap q = random_features(side, side, 32, 5);
    ClusterConfig cfg;
    cfg.grid = 8;
    cfg.per_cell = 4;
    const CentroidSet cs = init_centroids(q, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(compute_associations(q, cs, cfg));
    state.SetItemsProcessed(state.iterations() * q.count());
}

void bm_update_centers(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const FeatureMap q = random_features(side, side, 32, 5);
    ClusterConfig cfg;
    cfg.grid = 8;
    cfg.per_cell = 4;
    const CentroidSet cs = init_centroids(q, cfg);
    const AssociationMatrix a = compute_associations(q, cs, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(update_centers(a, q, cs));
    state.SetItemsProcessed(state.iterations() * q.count());
}

void bm_aggregate_tokens(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const FeatureMap q = random_features(side, side, 32, 5);
    ClusterConfig cfg;
    cfg.grid = 8;
    cfg.per_cell = 4;
    const ClusterResult res = cluster(q, q, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(aggregate_tokens(res.associations, res.assignment, q, res.centers));
    state.SetItemsProcessed(state.iterations() * q.count());
}

void bm_classifier_forward(benchmark::State& state) {
    const int tokens = static_cast<int>(state.range(0));
    const ClassifierParams params = init_classifier(32, 4, 2, 8, 7);
    Mat x(tokens, 32);
    Rng rng(9);
    for (auto& v : x.v) v = rng.uniform(-1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(forward(x, params));
    state.SetItemsProcessed(state.iterations() * tokens);
}

BENCHMARK(bm_first_derivative)->Arg(64)->Arg(128);
BENCHMARK(bm_semantic_features)->Arg(64)->Arg(128);
BENCHMARK(bm_associations)->Arg(64)->Arg(128);
BENCHMARK(bm_update_centers)->Arg(64)->Arg(128);
BENCHMARK(bm_aggregate_tokens)->Arg(64)->Arg(128);
BENCHMARK(bm_classifier_forward)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
