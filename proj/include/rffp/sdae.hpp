#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "rffp/errors.hpp"
#include "rffp/rng.hpp"
#include "rffp/signal.hpp"

namespace rffp {

/// Denoising-autoencoder training hyperparameters. Layer sizes list every
/// layer from input to output; the middle entry is the code width. Hidden
/// layers are rectifiers, the output layer is a logistic sigmoid, the loss
/// is mean absolute error and the optimizer is Adam.
struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 100;
    int batch_size = 128;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double corruption_snr_lo_db = 0.0;  // per-epoch corruption SNR drawn from
    double corruption_snr_hi_db = 30.0; // U[lo, hi] for every signal
    double validation_fraction = 0.1;
    std::vector<int> layer_sizes = {1024, 512, 128, 32, 128, 512, 1024};
    std::uint64_t seed = 0;
};

struct TrainMeta {
    double learning_rate = 0.0;
    int epochs = 0;
    int batch_size = 0;
    std::uint64_t seed = 0;
    double final_train_loss = 0.0;
    double final_validation_loss = 0.0;
    std::vector<double> train_loss_curve;
    std::vector<double> validation_loss_curve;
};

struct SdaeModel {
    std::vector<int> layer_sizes;
    std::vector<Eigen::MatrixXd> weights; // weights[l] is sizes[l+1] x sizes[l]
    std::vector<Eigen::VectorXd> biases;
    double ref_min = 0.0; // training-corpus extrema used for normalization
    double ref_max = 1.0;
    TrainMeta train_meta;

    int input_dim() const { return layer_sizes.front(); }
    int latent_dim() const { return layer_sizes[layer_sizes.size() / 2]; }
    std::size_t encoder_layers() const { return layer_sizes.size() / 2; }
};

namespace nn {

struct Cache {
    std::vector<Eigen::MatrixXd> zs;          // pre-activations per layer
    std::vector<Eigen::MatrixXd> activations; // activations[0] is the input
};

/// Full forward pass over a column-per-sample batch.
inline Eigen::MatrixXd forward(const SdaeModel& m, const Eigen::MatrixXd& input, Cache* cache = nullptr) {
    Eigen::MatrixXd a = input;
    if (cache) {
        cache->zs.clear();
        cache->activations.clear();
        cache->activations.push_back(a);
    }
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        Eigen::MatrixXd z = (m.weights[l] * a).colwise() + m.biases[l];
        if (l + 1 < m.weights.size())
            a = z.cwiseMax(0.0); // rectifier
        else
            a = ((-z.array()).exp() + 1.0).inverse().matrix(); // sigmoid
        if (cache) {
            cache->zs.push_back(std::move(z));
            cache->activations.push_back(a);
        }
    }
    return a;
}

/// Encoder half only.
inline Eigen::MatrixXd encode(const SdaeModel& m, const Eigen::MatrixXd& input) {
    Eigen::MatrixXd a = input;
    for (std::size_t l = 0; l < m.encoder_layers(); ++l)
        a = ((m.weights[l] * a).colwise() + m.biases[l]).cwiseMax(0.0);
    return a;
}

inline double mae_loss(const Eigen::MatrixXd& output, const Eigen::MatrixXd& target) {
    return (output - target).cwiseAbs().mean();
}

struct Grads {
    std::vector<Eigen::MatrixXd> dw;
    std::vector<Eigen::VectorXd> db;
};

/// Backpropagation of the mean-absolute-error loss through the cached pass.
inline Grads backward(const SdaeModel& m, const Cache& cache, const Eigen::MatrixXd& target) {
    const std::size_t layers = m.weights.size();
    Grads g;
    g.dw.resize(layers);
    g.db.resize(layers);

    const auto& out = cache.activations.back();
    const double scale = 1.0 / static_cast<double>(out.size());
    // d MAE / d output = sign(output - target) / count
    Eigen::MatrixXd delta = (out - target).array().sign().matrix() * scale;
    // through the output sigmoid
    delta = delta.cwiseProduct(out.cwiseProduct(Eigen::MatrixXd::Ones(out.rows(), out.cols()) - out));

    for (std::size_t l = layers; l-- > 0;) {
        g.dw[l] = delta * cache.activations[l].transpose();
        g.db[l] = delta.rowwise().sum();
        if (l == 0) break;
        delta = m.weights[l].transpose() * delta;
        delta = delta.cwiseProduct((cache.zs[l - 1].array() > 0.0).cast<double>().matrix());
    }
    return g;
}

} // namespace nn

namespace detail {

inline void check_sdae_config(const TrainConfig& cfg) {
    if (cfg.layer_sizes.size() < 3 || cfg.layer_sizes.size() % 2 == 0)
        throw invalid_input("sdae: layer_sizes must list an odd number of layers");
    if (cfg.layer_sizes.front() != cfg.layer_sizes.back())
        throw invalid_input("sdae: input and output widths must match");
    for (int w : cfg.layer_sizes)
        if (w < 1) throw invalid_input("sdae: layer widths must be positive");
    if (!(cfg.learning_rate > 0.0) || cfg.epochs < 1 || cfg.batch_size < 1)
        throw invalid_input("sdae: rates and sizes must be positive");
    if (cfg.corruption_snr_hi_db < cfg.corruption_snr_lo_db)
        throw invalid_input("sdae: corruption SNR range is inverted");
    if (cfg.validation_fraction < 0.0 || cfg.validation_fraction >= 1.0)
        throw invalid_input("sdae: validation fraction outside [0, 1)");
}

inline SdaeModel init_sdae(const TrainConfig& cfg, Rng& rng) {
    SdaeModel m;
    m.layer_sizes = cfg.layer_sizes;
    for (std::size_t l = 0; l + 1 < cfg.layer_sizes.size(); ++l) {
        const int fan_in = cfg.layer_sizes[l];
        const int fan_out = cfg.layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(Eigen::VectorXd::Zero(fan_out));
    }
    return m;
}

struct AdamState {
    std::vector<Eigen::MatrixXd> mw, vw;
    std::vector<Eigen::VectorXd> mb, vb;
    long step = 0;
};

inline void adam_update(SdaeModel& model, AdamState& st, const nn::Grads& g, const TrainConfig& cfg) {
    if (st.mw.empty()) {
        for (const auto& w : model.weights) {
            st.mw.emplace_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
            st.vw.emplace_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : model.biases) {
            st.mb.emplace_back(Eigen::VectorXd::Zero(b.size()));
            st.vb.emplace_back(Eigen::VectorXd::Zero(b.size()));
        }
    }
    ++st.step;
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(st.step));
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(st.step));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        st.mw[l] = cfg.adam_beta1 * st.mw[l] + (1.0 - cfg.adam_beta1) * g.dw[l];
        st.vw[l] = cfg.adam_beta2 * st.vw[l] + (1.0 - cfg.adam_beta2) * g.dw[l].cwiseProduct(g.dw[l]);
        model.weights[l] -= cfg.learning_rate *
                            (st.mw[l] / c1).cwiseQuotient((st.vw[l] / c2).cwiseSqrt().array().matrix() +
                                                          Eigen::MatrixXd::Constant(st.mw[l].rows(), st.mw[l].cols(), cfg.adam_eps));
        st.mb[l] = cfg.adam_beta1 * st.mb[l] + (1.0 - cfg.adam_beta1) * g.db[l];
        st.vb[l] = cfg.adam_beta2 * st.vb[l] + (1.0 - cfg.adam_beta2) * g.db[l].cwiseProduct(g.db[l]);
        model.biases[l] -= cfg.learning_rate *
                           (st.mb[l] / c1).cwiseQuotient((st.vb[l] / c2).cwiseSqrt().array().matrix() +
                                                         Eigen::VectorXd::Constant(st.mb[l].size(), cfg.adam_eps));
    }
}

} // namespace detail

/// Trains the denoising autoencoder to map AWGN-corrupted signals back onto
/// their clean versions. Every epoch re-corrupts each training signal at an
/// SNR drawn uniformly from the corruption range; corrupted input and clean
/// target are both min-max normalized with the extrema of the clean training
/// split, which the model stores for later use. Fully deterministic in
/// (data, config, seed): weight init, the validation split, per-epoch batch
/// order and noise all come from one seeded stream.
inline SdaeModel sdae_train(const std::vector<Signal>& clean, const TrainConfig& cfg = {}) {
    detail::check_sdae_config(cfg);
    const std::size_t dim = static_cast<std::size_t>(cfg.layer_sizes.front());
    if (clean.size() < static_cast<std::size_t>(cfg.batch_size))
        throw invalid_input("sdae_train: need at least one full batch of signals");
    for (const auto& s : clean)
        if (s.samples.size() != dim)
            throw invalid_input("sdae_train: signal length does not match the input layer");

    Rng rng(cfg.seed);
    SdaeModel model = detail::init_sdae(cfg, rng);

    std::vector<std::size_t> order(clean.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::size_t val_count =
        static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(clean.size())));
    std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(val_count));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(val_count), order.end());
    if (train_idx.size() < static_cast<std::size_t>(cfg.batch_size))
        throw invalid_input("sdae_train: validation split leaves less than one batch");

    double ref_min = clean[train_idx[0]].samples[0];
    double ref_max = ref_min;
    for (auto i : train_idx)
        for (double v : clean[i].samples) {
            ref_min = std::min(ref_min, v);
            ref_max = std::max(ref_max, v);
        }
    if (!(ref_max > ref_min)) throw degenerate_data("sdae_train: constant training corpus");
    model.ref_min = ref_min;
    model.ref_max = ref_max;
    const double inv_span = 1.0 / (ref_max - ref_min);

    std::vector<double> power(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) power[i] = signal_power(clean[i]);

    detail::AdamState adam;
    auto corrupt_into = [&](std::size_t idx, Eigen::MatrixXd& input, Eigen::MatrixXd& target,
                            Eigen::Index col) {
        const double snr = rng.uniform(cfg.corruption_snr_lo_db, cfg.corruption_snr_hi_db);
        const double sigma = std::sqrt(power[idx] / std::pow(10.0, snr / 10.0));
        const auto& x = clean[idx].samples;
        for (std::size_t t = 0; t < dim; ++t) {
            const double noisy = x[t] + sigma * rng.gaussian();
            input(static_cast<Eigen::Index>(t), col) = (noisy - ref_min) * inv_span;
            target(static_cast<Eigen::Index>(t), col) = (x[t] - ref_min) * inv_span;
        }
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(train_idx);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < train_idx.size(); begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t count = std::min<std::size_t>(cfg.batch_size, train_idx.size() - begin);
            Eigen::MatrixXd input(dim, count), target(dim, count);
            for (std::size_t k = 0; k < count; ++k)
                corrupt_into(train_idx[begin + k], input, target, static_cast<Eigen::Index>(k));

            nn::Cache cache;
            const auto out = nn::forward(model, input, &cache);
            epoch_loss += nn::mae_loss(out, target);
            ++batches;
            const auto grads = nn::backward(model, cache, target);
            detail::adam_update(model, adam, grads, cfg);
        }
        model.train_meta.train_loss_curve.push_back(epoch_loss / static_cast<double>(batches));

        if (!val_idx.empty()) {
            Eigen::MatrixXd input(dim, val_idx.size()), target(dim, val_idx.size());
            for (std::size_t k = 0; k < val_idx.size(); ++k)
                corrupt_into(val_idx[k], input, target, static_cast<Eigen::Index>(k));
            model.train_meta.validation_loss_curve.push_back(nn::mae_loss(nn::forward(model, input), target));
        }
    }

    model.train_meta.learning_rate = cfg.learning_rate;
    model.train_meta.epochs = cfg.epochs;
    model.train_meta.batch_size = cfg.batch_size;
    model.train_meta.seed = cfg.seed;
    model.train_meta.final_train_loss = model.train_meta.train_loss_curve.back();
    model.train_meta.final_validation_loss =
        model.train_meta.validation_loss_curve.empty() ? 0.0 : model.train_meta.validation_loss_curve.back();
    return model;
}

namespace detail {

inline Eigen::MatrixXd normalized_column(const SdaeModel& m, const Signal& s, const char* who) {
    if (s.samples.size() != static_cast<std::size_t>(m.input_dim()))
        throw invalid_input(std::string(who) + ": signal length does not match the input layer");
    Eigen::MatrixXd col(m.input_dim(), 1);
    const double inv_span = 1.0 / (m.ref_max - m.ref_min);
    for (int t = 0; t < m.input_dim(); ++t)
        col(t, 0) = (s.samples[static_cast<std::size_t>(t)] - m.ref_min) * inv_span;
    return col;
}

} // namespace detail

/// Latent code of one signal; the input is normalized with the model's
/// stored training extrema before the encoder pass.
inline std::vector<double> sdae_encode(const SdaeModel& m, const Signal& s) {
    const auto latent = nn::encode(m, detail::normalized_column(m, s, "sdae_encode"));
    return std::vector<double>(latent.data(), latent.data() + latent.size());
}

struct SdaeReconstruction {
    Signal output; // in the normalized [0, 1] domain
    double mae = 0.0;
};

/// Full pass through the network; mae is measured against the normalized input.
inline SdaeReconstruction sdae_reconstruct(const SdaeModel& m, const Signal& s) {
    const auto input = detail::normalized_column(m, s, "sdae_reconstruct");
    const auto out = nn::forward(m, input);
    SdaeReconstruction rec;
    rec.output.sample_rate_hz = s.sample_rate_hz;
    rec.output.samples.assign(out.data(), out.data() + out.size());
    rec.mae = nn::mae_loss(out, input);
    return rec;
}

// ---- serialization ----

static_assert(std::endian::native == std::endian::little,
              "model blobs are little-endian; big-endian hosts need byte swaps");

/// Writes a JSON descriptor at `path` and the raw parameter blob next to it
/// (same name plus ".bin"): per layer, row-major weights then biases, as
/// little-endian 64-bit reals.
inline void sdae_save(const SdaeModel& m, const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path descriptor(path);
    const fs::path blob = fs::path(path).concat(".bin");

    std::size_t count = 0;
    for (std::size_t l = 0; l < m.weights.size(); ++l)
        count += static_cast<std::size_t>(m.weights[l].size() + m.biases[l].size());

    std::ofstream out(blob, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("sdae_save: cannot open " + blob.string());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const auto& w = m.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                const double v = w(r, c);
                out.write(reinterpret_cast<const char*>(&v), sizeof(v));
            }
        const auto& b = m.biases[l];
        out.write(reinterpret_cast<const char*>(b.data()),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(b.size())));
    }
    if (!out) throw io_error("sdae_save: short write to " + blob.string());
    out.close();

    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = "sdae";
    j["layer_sizes"] = m.layer_sizes;
    std::vector<std::string> acts(m.weights.size() - 1, "relu");
    acts.push_back("sigmoid");
    j["activations"] = acts;
    j["ref_min"] = m.ref_min;
    j["ref_max"] = m.ref_max;
    j["parameter_blob"] = blob.filename().string();
    j["parameter_count"] = count;
    j["train_meta"] = {{"learning_rate", m.train_meta.learning_rate},
                       {"epochs", m.train_meta.epochs},
                       {"batch_size", m.train_meta.batch_size},
                       {"seed", m.train_meta.seed},
                       {"final_train_loss", m.train_meta.final_train_loss},
                       {"final_validation_loss", m.train_meta.final_validation_loss},
                       {"train_loss_curve", m.train_meta.train_loss_curve},
                       {"validation_loss_curve", m.train_meta.validation_loss_curve}};

    std::ofstream desc(descriptor, std::ios::trunc);
    if (!desc) throw io_error("sdae_save: cannot open " + descriptor.string());
    desc << j.dump(2) << '\n';
    if (!desc) throw io_error("sdae_save: short write to " + descriptor.string());
}

inline SdaeModel sdae_load(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream desc(path);
    if (!desc) throw io_error("sdae_load: cannot open " + path);
    nlohmann::json j;
    try {
        desc >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("sdae_load: bad descriptor JSON: " + std::string(e.what()));
    }
    if (j.value("kind", "") != "sdae") throw format_error("sdae_load: kind field is not 'sdae'");
    if (j.value("format_version", 0) != 1) throw format_error("sdae_load: unsupported format_version");

    SdaeModel m;
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    if (m.layer_sizes.size() < 3) throw format_error("sdae_load: layer_sizes too short");
    m.ref_min = j.at("ref_min").get<double>();
    m.ref_max = j.at("ref_max").get<double>();
    const auto& tm = j.at("train_meta");
    m.train_meta.learning_rate = tm.value("learning_rate", 0.0);
    m.train_meta.epochs = tm.value("epochs", 0);
    m.train_meta.batch_size = tm.value("batch_size", 0);
    m.train_meta.seed = tm.value("seed", 0ULL);
    m.train_meta.final_train_loss = tm.value("final_train_loss", 0.0);
    m.train_meta.final_validation_loss = tm.value("final_validation_loss", 0.0);
    if (tm.contains("train_loss_curve"))
        m.train_meta.train_loss_curve = tm["train_loss_curve"].get<std::vector<double>>();
    if (tm.contains("validation_loss_curve"))
        m.train_meta.validation_loss_curve = tm["validation_loss_curve"].get<std::vector<double>>();

    const fs::path blob = fs::path(path).parent_path() / j.at("parameter_blob").get<std::string>();
    std::ifstream in(blob, std::ios::binary);
    if (!in) throw io_error("sdae_load: cannot open " + blob.string());
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        Eigen::MatrixXd w(m.layer_sizes[l + 1], m.layer_sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                double v = 0.0;
                if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
                    throw format_error("sdae_load: parameter blob truncated");
                w(r, c) = v;
            }
        Eigen::VectorXd b(m.layer_sizes[l + 1]);
        if (!in.read(reinterpret_cast<char*>(b.data()),
                     static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(b.size()))))
            throw format_error("sdae_load: parameter blob truncated");
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

} // namespace rffp
