#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "actsig/matching.hpp"
#include "actsig/model_io.hpp"
#include "actsig/sampling.hpp"

namespace actsig {

// 1 inside the ellipse x1^2/9 + x2^2/16 < 1, 0 otherwise (boundary is outside).
// ShapeError unless the points are 2-D.
std::vector<std::uint8_t> generate_ellipse_labels(const SampleSet& points);

struct TrainConfig {
    std::size_t hidden_width = 32;
    std::size_t epochs = 20;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    // Weight initialization and minibatch order.
    std::uint64_t seed = 0;
    // Train/test partition; kept separate so several models can share a split.
    std::uint64_t split_seed = 0;
    double train_fraction = 0.8;
};

struct TrainResult {
    Network network;
    double test_accuracy = 0.0;
    // Binary cross-entropy on the training split: entry 0 before the first
    // step, entry e after epoch e.
    std::vector<double> epoch_losses;
};

// Trains input -> hidden relu (unit-norm rows, re-projected after every Adam
// step) -> one sigmoid output with binary cross-entropy.
// DegenerateData if the labels contain a single class.
TrainResult train_mlp(const Matrix& points, std::span<const std::uint8_t> labels,
                      const TrainConfig& config);

struct ReplicationConfig {
    std::uint64_t seed_a = 1;
    std::uint64_t seed_b = 2;
    std::size_t n_samples = 16000;
    std::size_t k = 512;
    std::uint64_t sample_seed = 42;
    std::uint64_t master_seed = kDefaultMasterSeed;
    TrainConfig train;
};

struct ReplicationResult {
    LayerComparisonReport report;
    TrainResult train_a;
    TrainResult train_b;
};

// LHS sample on [-10,10]^2 -> ellipse labels -> two trained networks ->
// hidden-layer comparison with the exact path enabled.
ReplicationResult run_replication(const ReplicationConfig& config);

std::string serialize_replication(const ReplicationResult& result, const ReplicationConfig& config);

} // namespace actsig
