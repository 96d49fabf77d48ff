#include "actsig/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "actsig/canonicalize.hpp"
#include "actsig/errors.hpp"
#include "actsig/experiment.hpp"
#include "actsig/matching.hpp"
#include "actsig/model_io.hpp"
#include "actsig/parallel.hpp"
#include "actsig/sampling.hpp"
#include "actsig/signatures.hpp"
#include "actsig/sketching.hpp"

namespace actsig {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_text(out_path, text);
    }
}

std::string scales_json(const std::vector<ScaleFactors>& scales) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& s : scales) {
        layers.push_back(s.values);
    }
    return nlohmann::json{{"scales", std::move(layers)}}.dump() + "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Activation-signature canonicalization and layer comparison for ReLU networks",
                 "actsig"};
    app.set_version_flag("--version", std::string("actsig ") + ACTSIG_VERSION);
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");

    // sample-size
    auto* cmd_size = app.add_subcommand("sample-size", "Minimum probe sample size from the VC bound");
    VcQuery query;
    cmd_size->add_option("--din", query.d_in, "Input dimension of the layer")->required();
    cmd_size->add_option("--neurons", query.n_neurons, "Neurons in the layer")->required();
    cmd_size->add_option("--eps", query.epsilon, "Frequency accuracy epsilon")->required();
    cmd_size->add_option("--delta", query.delta, "Failure probability delta")->required();

    // gen-sample
    auto* cmd_gen = app.add_subcommand("gen-sample", "Generate a probe sample CSV");
    std::string strategy = "lhs";
    std::size_t gen_n = 0;
    std::string bounds_text;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    cmd_gen->add_option("--strategy", strategy, "uniform or lhs")
        ->check(CLI::IsMember({"uniform", "lhs"}));
    cmd_gen->add_option("--n", gen_n, "Number of points")->required();
    cmd_gen->add_option("--bounds", bounds_text, "Box as low:high,low:high,...")->required();
    cmd_gen->add_option("--seed", gen_seed, "PRNG seed")->required();
    cmd_gen->add_option("--out", gen_out, "Output CSV")->required();

    // canonize
    auto* cmd_canon = app.add_subcommand("canonize", "L2-normalize hidden layers with compensation");
    std::string canon_in;
    std::string canon_out;
    std::string canon_scales;
    cmd_canon->add_option("--in", canon_in, "Input network JSON")->required();
    cmd_canon->add_option("--out", canon_out, "Canonical network JSON")->required();
    cmd_canon->add_option("--scales", canon_scales, "Scale factors JSON");

    // signatures
    auto* cmd_sig = app.add_subcommand("signatures", "Write the SASM activation matrix of one layer");
    std::string sig_net;
    std::size_t sig_layer = 0;
    std::string sig_samples;
    std::string sig_out;
    cmd_sig->add_option("--net", sig_net, "Network JSON")->required();
    cmd_sig->add_option("--layer", sig_layer, "Layer index (0-based)");
    cmd_sig->add_option("--samples", sig_samples, "Sample CSV")->required();
    cmd_sig->add_option("--out", sig_out, "Output .sasm file")->required();

    // sketch
    auto* cmd_sketch = app.add_subcommand("sketch", "MinHash sketches of the representative neurons");
    std::string sk_in;
    std::size_t sk_k = 512;
    std::uint64_t sk_seed = kDefaultMasterSeed;
    std::optional<double> sk_alpha;
    std::optional<double> sk_resolution;
    std::string sk_out;
    cmd_sketch->add_option("--signatures", sk_in, "Input .sasm file")->required();
    auto* k_opt = cmd_sketch->add_option("--k", sk_k, "Number of hash functions");
    cmd_sketch->add_option("--seed", sk_seed, "Hash family master seed")->required();
    auto* alpha_opt = cmd_sketch->add_option("--alpha", sk_alpha, "Order-preservation failure probability");
    auto* res_opt =
        cmd_sketch->add_option("--resolution", sk_resolution, "Distance gap to resolve (sizes K)");
    alpha_opt->needs(res_opt);
    res_opt->needs(alpha_opt);
    alpha_opt->excludes(k_opt);
    cmd_sketch->add_option("--out", sk_out, "Output sketch JSON")->required();

    // compare
    auto* cmd_cmp = app.add_subcommand("compare", "LayerDistance between one layer of two networks");
    std::string cmp_a;
    std::string cmp_b;
    std::size_t cmp_layer = 0;
    std::string cmp_samples;
    std::size_t cmp_k = 512;
    std::uint64_t cmp_seed = 0;
    std::string cmp_out;
    bool cmp_exact = false;
    cmd_cmp->add_option("--net-a", cmp_a, "First network JSON")->required();
    cmd_cmp->add_option("--net-b", cmp_b, "Second network JSON")->required();
    cmd_cmp->add_option("--layer", cmp_layer, "Layer index (0-based)");
    cmd_cmp->add_option("--samples", cmp_samples, "Sample CSV")->required();
    cmd_cmp->add_option("--k", cmp_k, "Number of hash functions");
    cmd_cmp->add_option("--seed", cmp_seed, "Hash family master seed")->required();
    cmd_cmp->add_option("--out", cmp_out, "Report JSON (stdout if omitted)");
    cmd_cmp->add_flag("--exact", cmp_exact, "Also compute exact Jaccard validation");

    // replicate
    auto* cmd_rep = app.add_subcommand("replicate", "Train two ellipse classifiers and compare them");
    ReplicationConfig rep;
    std::string rep_out;
    std::string rep_net_a;
    std::string rep_net_b;
    cmd_rep->add_option("--seed-a", rep.seed_a, "Training seed of the first network")->required();
    cmd_rep->add_option("--seed-b", rep.seed_b, "Training seed of the second network")->required();
    cmd_rep->add_option("--n", rep.n_samples, "LHS sample size");
    cmd_rep->add_option("--k", rep.k, "Number of hash functions");
    cmd_rep->add_option("--sample-seed", rep.sample_seed, "Seed of the LHS sample and split");
    cmd_rep->add_option("--hash-seed", rep.master_seed, "Hash family master seed");
    cmd_rep->add_option("--epochs", rep.train.epochs, "Training epochs");
    cmd_rep->add_option("--out", rep_out, "Report JSON")->required();
    cmd_rep->add_option("--net-a-out", rep_net_a, "Export first trained network");
    cmd_rep->add_option("--net-b-out", rep_net_b, "Export second trained network");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    set_thread_limit(threads);

    try {
        if (cmd_size->parsed()) {
            out << solve_min_samples(query) << "\n";
        } else if (cmd_gen->parsed()) {
            const auto bounds = parse_bounds(bounds_text);
            const SampleSet s = strategy == "uniform" ? generate_uniform(gen_n, bounds, gen_seed)
                                                      : generate_lhs(gen_n, bounds, gen_seed);
            save_samples(s, gen_out);
        } else if (cmd_canon->parsed()) {
            const auto [net, scales] = canonicalize_network(load_network(canon_in));
            save_network(net, canon_out);
            if (!canon_scales.empty()) {
                write_text(canon_scales, scales_json(scales));
            }
        } else if (cmd_sig->parsed()) {
            const Network net = canonicalize_network(load_network(sig_net)).first;
            if (sig_layer >= net.layers.size()) {
                throw IndexError("layer " + std::to_string(sig_layer) + " does not exist");
            }
            const SampleSet samples = load_samples(sig_samples);
            const Matrix inputs = layer_inputs(net, sig_layer, samples.points);
            const SignatureMatrix m = compute_signature_matrix(net.layers[sig_layer], inputs);
            save_signatures(m, sig_out);
            const auto report = classify_neurons(m);
            out << "neurons=" << m.n_neurons() << " samples=" << m.n_samples()
                << " dead=" << report.dead.size() << " always_active=" << report.always_active.size()
                << " duplicate_groups=" << report.duplicate_groups.size()
                << " unique=" << report.representatives.size() << "\n";
        } else if (cmd_sketch->parsed()) {
            const SignatureMatrix m = load_signatures(sk_in);
            std::size_t k = sk_k;
            if (sk_alpha) {
                k = required_hashes(*sk_alpha, *sk_resolution);
                if (below_resolution(*sk_resolution, m.n_samples())) {
                    err << "warning: resolution " << *sk_resolution
                        << " is below 1/n_samples; distances that close are not representable\n";
                }
            }
            const HashFamily family = build_hash_family(k, sk_seed);
            const auto sketches = sketch_layer(m, classify_neurons(m), family);
            save_sketches(sketches, k, sk_seed, sk_out);
        } else if (cmd_cmp->parsed()) {
            const Network a = load_network(cmp_a);
            const Network b = load_network(cmp_b);
            const SampleSet samples = load_samples(cmp_samples);
            const HashFamily family = build_hash_family(cmp_k, cmp_seed);
            CompareOptions opts;
            opts.exact = cmp_exact;
            const auto report = compare_layers(a, b, cmp_layer, samples, family, opts);
            emit(cmp_out, serialize_report(report), out);
        } else if (cmd_rep->parsed()) {
            const auto result = run_replication(rep);
            write_text(rep_out, serialize_replication(result, rep));
            if (!rep_net_a.empty()) {
                save_network(result.train_a.network, rep_net_a);
            }
            if (!rep_net_b.empty()) {
                save_network(result.train_b.network, rep_net_b);
            }
            out << "layer_distance=" << result.report.layer_distance;
            if (result.report.validation) {
                out << " exact=" << result.report.validation->exact_layer_distance
                    << " mae=" << result.report.validation->mae;
            }
            out << " accuracy_a=" << result.train_a.test_accuracy
                << " accuracy_b=" << result.train_b.test_accuracy << "\n";
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace actsig
