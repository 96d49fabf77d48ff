#include "actsig/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "actsig/errors.hpp"
#include "actsig/rng.hpp"

namespace actsig {

std::vector<std::uint8_t> generate_ellipse_labels(const SampleSet& points) {
    if (points.dimension() != 2) {
        throw ShapeError("ellipse labels need 2-D points");
    }
    std::vector<std::uint8_t> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double x1 = points.points(i, 0);
        const double x2 = points.points(i, 1);
        labels[i] = (x1 * x1 / 9.0 + x2 * x2 / 16.0 - 1.0 < 0.0) ? 1 : 0;
    }
    return labels;
}

namespace {

constexpr double kProbFloor = 1e-12;

// Flat parameter layout for the two-layer model.
struct Params {
    std::size_t d = 0;
    std::size_t h = 0;
    std::vector<double> w1;  // h x d
    std::vector<double> b1;  // h
    std::vector<double> w2;  // h
    double b2 = 0.0;
};

struct AdamSlot {
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamSlot(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void renormalize_rows(Params& p) {
    for (std::size_t j = 0; j < p.h; ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < p.d; ++i) {
            sq += p.w1[j * p.d + i] * p.w1[j * p.d + i];
        }
        const double norm = std::sqrt(sq);
        if (norm > 0.0) {
            for (std::size_t i = 0; i < p.d; ++i) {
                p.w1[j * p.d + i] /= norm;
            }
        }
    }
}

double predict(const Params& p, std::span<const double> x, std::vector<double>& hidden_pre) {
    double z = p.b2;
    for (std::size_t j = 0; j < p.h; ++j) {
        double a = p.b1[j];
        for (std::size_t i = 0; i < p.d; ++i) {
            a += p.w1[j * p.d + i] * x[i];
        }
        hidden_pre[j] = a;
        z += p.w2[j] * (a > 0.0 ? a : 0.0);
    }
    return 1.0 / (1.0 + std::exp(-z));
}

double bce(double prob, std::uint8_t label) {
    const double q = std::clamp(prob, kProbFloor, 1.0 - kProbFloor);
    return label ? -std::log(q) : -std::log(1.0 - q);
}

double mean_loss(const Params& p, const Matrix& x, std::span<const std::uint8_t> y,
                 std::span<const std::size_t> idx) {
    std::vector<double> pre(p.h);
    double total = 0.0;
    for (std::size_t i : idx) {
        total += bce(predict(p, x.row(i), pre), y[i]);
    }
    return idx.empty() ? 0.0 : total / static_cast<double>(idx.size());
}

double accuracy(const Params& p, const Matrix& x, std::span<const std::uint8_t> y,
                std::span<const std::size_t> idx) {
    std::vector<double> pre(p.h);
    std::size_t correct = 0;
    for (std::size_t i : idx) {
        const bool positive = predict(p, x.row(i), pre) > 0.5;
        correct += (positive == (y[i] != 0)) ? 1 : 0;
    }
    return idx.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(idx.size());
}

void adam_update(std::span<double> param, std::span<const double> grad, AdamSlot& slot,
                 const TrainConfig& c, double bc1, double bc2) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        slot.m[i] = c.adam_beta1 * slot.m[i] + (1.0 - c.adam_beta1) * grad[i];
        slot.v[i] = c.adam_beta2 * slot.v[i] + (1.0 - c.adam_beta2) * grad[i] * grad[i];
        const double m_hat = slot.m[i] / bc1;
        const double v_hat = slot.v[i] / bc2;
        param[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.adam_eps);
    }
}

Network to_network(const Params& p) {
    Network net;
    Layer hidden;
    hidden.weights = Matrix(p.h, p.d);
    std::copy(p.w1.begin(), p.w1.end(), hidden.weights.data().begin());
    hidden.bias = p.b1;
    hidden.activation = Activation::relu;
    Layer out;
    out.weights = Matrix(1, p.h);
    std::copy(p.w2.begin(), p.w2.end(), out.weights.data().begin());
    out.bias = {p.b2};
    out.activation = Activation::sigmoid;
    net.layers = {std::move(hidden), std::move(out)};
    return net;
}

} // namespace

TrainResult train_mlp(const Matrix& points, std::span<const std::uint8_t> labels,
                      const TrainConfig& config) {
    if (points.rows() != labels.size()) {
        throw ShapeError("point and label counts differ");
    }
    if (points.rows() < 2 || points.cols() == 0) {
        throw DegenerateData("need at least two labelled points");
    }
    if (config.hidden_width == 0 || config.batch_size == 0 || !(config.train_fraction > 0.0) ||
        !(config.train_fraction < 1.0)) {
        throw DomainError("invalid training configuration");
    }
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (positives == 0 || positives == labels.size()) {
        throw DegenerateData("labels contain a single class");
    }

    // Train/test split.
    const std::size_t n = points.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    {
        SplitMix64 split_rng(config.split_seed, 0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[split_rng.below(i)]);
        }
    }
    auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

    // Glorot-uniform init, zero biases, then project hidden rows to unit norm.
    Params p;
    p.d = points.cols();
    p.h = config.hidden_width;
    p.w1.resize(p.h * p.d);
    p.b1.assign(p.h, 0.0);
    p.w2.resize(p.h);
    {
        SplitMix64 init_rng(config.seed, 0);
        const double lim1 = std::sqrt(6.0 / static_cast<double>(p.d + p.h));
        for (double& w : p.w1) {
            w = (2.0 * init_rng.uniform() - 1.0) * lim1;
        }
        const double lim2 = std::sqrt(6.0 / static_cast<double>(p.h + 1));
        for (double& w : p.w2) {
            w = (2.0 * init_rng.uniform() - 1.0) * lim2;
        }
    }
    renormalize_rows(p);

    TrainResult result;
    result.epoch_losses.push_back(mean_loss(p, points, labels, train));

    AdamSlot s_w1(p.w1.size());
    AdamSlot s_b1(p.h);
    AdamSlot s_w2(p.h);
    AdamSlot s_b2(1);
    std::vector<double> g_w1(p.w1.size());
    std::vector<double> g_b1(p.h);
    std::vector<double> g_w2(p.h);
    std::vector<double> pre(p.h);
    SplitMix64 shuffle_rng(config.seed, 1);
    std::uint64_t step = 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = train.size(); i > 1; --i) {
            std::swap(train[i - 1], train[shuffle_rng.below(i)]);
        }
        for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, train.size());
            const auto bsz = static_cast<double>(end - start);
            std::fill(g_w1.begin(), g_w1.end(), 0.0);
            std::fill(g_b1.begin(), g_b1.end(), 0.0);
            std::fill(g_w2.begin(), g_w2.end(), 0.0);
            double g_b2 = 0.0;
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t idx = train[b];
                const auto x = points.row(idx);
                const double prob = predict(p, x, pre);
                // d(BCE)/dz for a sigmoid output.
                const double dz = (prob - static_cast<double>(labels[idx])) / bsz;
                g_b2 += dz;
                for (std::size_t j = 0; j < p.h; ++j) {
                    if (pre[j] <= 0.0) {
                        continue;
                    }
                    g_w2[j] += dz * pre[j];
                    const double dh = dz * p.w2[j];
                    g_b1[j] += dh;
                    for (std::size_t i = 0; i < p.d; ++i) {
                        g_w1[j * p.d + i] += dh * x[i];
                    }
                }
            }
            ++step;
            const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step));
            adam_update(p.w1, g_w1, s_w1, config, bc1, bc2);
            adam_update(p.b1, g_b1, s_b1, config, bc1, bc2);
            adam_update(p.w2, g_w2, s_w2, config, bc1, bc2);
            adam_update(std::span<double>(&p.b2, 1), std::span<const double>(&g_b2, 1), s_b2, config,
                        bc1, bc2);
            renormalize_rows(p);
        }
        result.epoch_losses.push_back(mean_loss(p, points, labels, train));
    }

    result.test_accuracy = accuracy(p, points, labels, test);
    result.network = to_network(p);
    return result;
}

ReplicationResult run_replication(const ReplicationConfig& config) {
    const std::vector<Interval> box{{-10.0, 10.0}, {-10.0, 10.0}};
    const SampleSet samples = generate_lhs(config.n_samples, box, config.sample_seed);
    const auto labels = generate_ellipse_labels(samples);

    TrainConfig tc_a = config.train;
    tc_a.seed = config.seed_a;
    tc_a.split_seed = config.sample_seed;
    TrainConfig tc_b = config.train;
    tc_b.seed = config.seed_b;
    tc_b.split_seed = config.sample_seed;

    ReplicationResult result;
    result.train_a = train_mlp(samples.points, labels, tc_a);
    result.train_b = train_mlp(samples.points, labels, tc_b);

    const HashFamily family = build_hash_family(config.k, config.master_seed);
    CompareOptions opts;
    opts.exact = true;
    result.report =
        compare_layers(result.train_a.network, result.train_b.network, 0, samples, family, opts);
    return result;
}

std::string serialize_replication(const ReplicationResult& result, const ReplicationConfig& config) {
    using nlohmann::json;
    json doc = json::parse(serialize_report(result.report));
    auto training = [](const TrainResult& t, std::uint64_t seed) {
        return json{{"seed", seed},
                    {"test_accuracy", t.test_accuracy},
                    {"epoch_losses", t.epoch_losses}};
    };
    doc["training"] = {{"a", training(result.train_a, config.seed_a)},
                       {"b", training(result.train_b, config.seed_b)},
                       {"epochs", config.train.epochs},
                       {"batch_size", config.train.batch_size},
                       {"learning_rate", config.train.learning_rate},
                       {"hidden_width", config.train.hidden_width}};
    doc["params"]["seed_a"] = config.seed_a;
    doc["params"]["seed_b"] = config.seed_b;
    return doc.dump(2) + "\n";
}

} // namespace actsig
