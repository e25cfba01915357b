#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nea/alias_table.hpp"
#include "nea/corpus.hpp"
#include "nea/embedding.hpp"
#include "nea/errors.hpp"
#include "nea/factorized.hpp"
#include "nea/matrix.hpp"
#include "nea/negative_sampling.hpp"
#include "nea/rng.hpp"
#include "nea/topic_models.hpp"

namespace nea {

struct TrainConfig {
    int dim = 300;
    std::int64_t minibatches = 1000000;
    int batch_size = 16;
    int negatives = 5;
    double lr_initial = 0.025;
    double lr_floor = 1e-4;
    double noise_exponent = 0.75;
    std::int64_t log_interval = 1000;  // minibatches per loss-log row; 0 disables
    int threads = 1;                   // >1 runs lock-free workers; determinism is surrendered
    std::uint64_t seed = 0;

    void validate() const {
        if (dim < 1) throw usage_error("embedding dimension must be >= 1");
        if (minibatches < 0) throw usage_error("minibatch count must be >= 0");
        if (batch_size < 1) throw usage_error("batch size must be >= 1");
        if (negatives < 1) throw usage_error("negative sample count must be >= 1");
        if (lr_initial <= 0.0 || lr_floor <= 0.0) throw usage_error("learning rates must be positive");
        if (noise_exponent < 0.0) throw usage_error("noise exponent must be >= 0");
        if (log_interval < 0) throw usage_error("log interval must be >= 0");
        if (threads < 1) throw usage_error("thread count must be >= 1");
    }
};

// Running mean of the NEG training loss (the negated objective), one entry
// per log interval.
struct LossLog {
    std::vector<std::pair<std::int64_t, double>> entries;
};

namespace detail {

inline double lr_at(const TrainConfig& cfg, std::int64_t done) {
    double frac = cfg.minibatches > 0
                      ? static_cast<double>(done) / static_cast<double>(cfg.minibatches)
                      : 0.0;
    double lr = cfg.lr_initial * (1.0 - frac);
    return lr > cfg.lr_floor ? lr : cfg.lr_floor;
}

inline std::uint64_t worker_seed(std::uint64_t seed, int worker) {
    return seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(worker + 1);
}

// Drives cfg.minibatches calls of run_one(rng, lr) -> mean minibatch loss.
// Single-threaded mode is fully deterministic; with threads > 1 the workers
// update shared parameters lock-free and only worker 0 contributes log rows.
template <typename MinibatchFn>
LossLog run_minibatch_training(const TrainConfig& cfg, MinibatchFn&& run_one) {
    LossLog log;
    if (cfg.threads == 1) {
        Rng rng(worker_seed(cfg.seed, 0));
        double acc = 0.0;
        std::int64_t n = 0;
        for (std::int64_t mb = 0; mb < cfg.minibatches; ++mb) {
            acc += run_one(rng, lr_at(cfg, mb));
            ++n;
            if (cfg.log_interval > 0 && (mb + 1) % cfg.log_interval == 0) {
                log.entries.emplace_back(mb + 1, acc / static_cast<double>(n));
                acc = 0.0;
                n = 0;
            }
        }
        if (cfg.log_interval > 0 && n > 0)
            log.entries.emplace_back(cfg.minibatches, acc / static_cast<double>(n));
        return log;
    }

    std::atomic<std::int64_t> done{0};
    const std::int64_t per = cfg.minibatches / cfg.threads;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg.threads));
    for (int t = 0; t < cfg.threads; ++t) {
        std::int64_t count = t == 0 ? cfg.minibatches - per * (cfg.threads - 1) : per;
        workers.emplace_back([&, t, count] {
            Rng rng(worker_seed(cfg.seed, t));
            double acc = 0.0;
            std::int64_t n = 0;
            for (std::int64_t i = 0; i < count; ++i) {
                std::int64_t global = done.fetch_add(1, std::memory_order_relaxed);
                double loss = run_one(rng, lr_at(cfg, global));
                if (t == 0) {
                    acc += loss;
                    ++n;
                    if (cfg.log_interval > 0 && n == cfg.log_interval) {
                        log.entries.emplace_back(i + 1, acc / static_cast<double>(n));
                        acc = 0.0;
                        n = 0;
                    }
                }
            }
            if (t == 0 && cfg.log_interval > 0 && n > 0)
                log.entries.emplace_back(count, acc / static_cast<double>(n));
        });
    }
    for (auto& w : workers) w.join();
    return log;
}

}  // namespace detail

// Simulates (topic, word) pairs from a trained LDA model: d ~ uniform,
// z ~ theta[d], w ~ phi[z]. Alias tables make each draw O(1).
class LdaSampler {
public:
    explicit LdaSampler(const LdaParams& params) {
        require_row_stochastic(params.theta, "LDA theta");
        require_row_stochastic(params.phi, "LDA phi");
        theta_rows_.reserve(static_cast<std::size_t>(params.theta.rows));
        for (int d = 0; d < params.theta.rows; ++d)
            theta_rows_.emplace_back(params.theta.row(d));
        phi_rows_.reserve(static_cast<std::size_t>(params.phi.rows));
        for (int k = 0; k < params.phi.rows; ++k) phi_rows_.emplace_back(params.phi.row(k));
    }

    std::pair<int, int> sample(Rng& rng) const {
        int d = rng.uniform_int(static_cast<int>(theta_rows_.size()));
        int z = theta_rows_[static_cast<std::size_t>(d)].sample(rng);
        int w = phi_rows_[static_cast<std::size_t>(z)].sample(rng);
        return {z, w};
    }

private:
    std::vector<AliasTable> theta_rows_;
    std::vector<AliasTable> phi_rows_;
};

inline std::vector<std::pair<int, int>> sample_minibatch_lda(const LdaParams& params,
                                                             int batch_size, Rng& rng) {
    LdaSampler sampler(params);
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i) out.push_back(sampler.sample(rng));
    return out;
}

// Word marginal implied by the model: p(w) = (1/D) sum_d sum_k theta_dk phi_kw.
inline std::vector<double> lda_word_marginal(const LdaParams& params) {
    std::vector<double> topic_mass(static_cast<std::size_t>(params.K), 0.0);
    for (int d = 0; d < params.theta.rows; ++d)
        for (int k = 0; k < params.K; ++k) topic_mass[static_cast<std::size_t>(k)] += params.theta[d][k];
    for (double& m : topic_mass) m /= static_cast<double>(params.theta.rows);
    std::vector<double> marginal(static_cast<std::size_t>(params.phi.cols), 0.0);
    for (int k = 0; k < params.K; ++k)
        for (int w = 0; w < params.phi.cols; ++w)
            marginal[static_cast<std::size_t>(w)] += topic_mass[static_cast<std::size_t>(k)] * params.phi[k][w];
    return marginal;
}

struct NeaLdaResult {
    EmbeddingSet embeddings;  // topics -> words
    Matrix phi_nea;           // K x W smoothed reconstruction
    DocEmbeddings docs;
    LossLog loss;
};

// Algorithm: stream simulated (z, w) minibatches from the LDA parameters,
// NEG-update topic and word vectors, then smooth and build document vectors.
inline NeaLdaResult train_nea_lda(const LdaParams& params, const Corpus& corpus,
                                  const TrainConfig& cfg) {
    cfg.validate();
    if (static_cast<std::int64_t>(params.z.size()) != corpus.num_tokens())
        throw data_error("LDA topic assignments are not aligned with the corpus");

    NeaLdaResult result;
    Rng init_rng(cfg.seed);
    result.embeddings = init_embeddings("topic", params.K, "word", params.phi.cols, cfg.dim,
                                        init_rng);

    const LdaSampler sampler(params);
    const NoiseTable noise(lda_word_marginal(params), cfg.noise_exponent);

    EmbeddingSet& emb = result.embeddings;
    result.loss = detail::run_minibatch_training(cfg, [&](Rng& rng, double lr) {
        double obj = 0.0;
        for (int i = 0; i < cfg.batch_size; ++i) {
            auto [z, w] = sampler.sample(rng);
            obj += neg_update(emb, z, w, noise, cfg.negatives, lr, rng);
        }
        return -obj / cfg.batch_size;
    });

    result.phi_nea = smooth_topics(result.embeddings);
    result.docs = doc_embeddings(params, corpus, result.embeddings.input_vectors);
    return result;
}

// Per-variable embedding matrices for a factorized model. A variable gets an
// input matrix when it parents some link and an output matrix when it is a
// link's child; a variable filling the same role in two links shares one matrix.
struct GeneralEmbeddings {
    int dim = 0;
    std::vector<std::string> variable_names;
    std::vector<Matrix> input_vectors;
    std::vector<Matrix> output_vectors;
};

struct NeaGeneralResult {
    GeneralEmbeddings embeddings;
    std::vector<Matrix> smoothed;  // one reconstructed conditional per link
    LossLog loss;
};

// Algorithm: ancestral-sample the chain per iteration and NEG-update every
// link's embedding pair, then reconstruct each conditional with a softmax.
inline NeaGeneralResult train_nea_general(const FactorizedModel& model, const TrainConfig& cfg) {
    cfg.validate();
    model.validate();
    const int n_vars = model.num_variables();

    NeaGeneralResult result;
    result.embeddings.dim = cfg.dim;
    result.embeddings.input_vectors.resize(static_cast<std::size_t>(n_vars));
    result.embeddings.output_vectors.resize(static_cast<std::size_t>(n_vars));
    for (const auto& v : model.variables) result.embeddings.variable_names.push_back(v.name);

    Rng init_rng(cfg.seed);
    const double scale = 1.0 / cfg.dim;
    for (int v = 0; v < n_vars; ++v) {
        bool is_parent = false;
        for (const auto& link : model.links) is_parent |= link.parent == v;
        if (is_parent) {
            Matrix m(model.variables[static_cast<std::size_t>(v)].cardinality, cfg.dim);
            for (double& x : m.data) x = (init_rng.uniform() - 0.5) * scale;
            result.embeddings.input_vectors[static_cast<std::size_t>(v)] = std::move(m);
        }
        if (v > 0)
            result.embeddings.output_vectors[static_cast<std::size_t>(v)] =
                Matrix(model.variables[static_cast<std::size_t>(v)].cardinality, cfg.dim);
    }

    const AliasTable root_alias(model.root);
    std::vector<std::vector<AliasTable>> row_alias(model.links.size());
    std::vector<NoiseTable> noise(model.links.size());
    for (std::size_t i = 0; i < model.links.size(); ++i) {
        const Matrix& table = model.links[i].table;
        row_alias[i].reserve(static_cast<std::size_t>(table.rows));
        for (int r = 0; r < table.rows; ++r) row_alias[i].emplace_back(table.row(r));
        noise[i] = NoiseTable(model.marginal(static_cast<int>(i) + 1), cfg.noise_exponent);
    }

    auto& emb = result.embeddings;
    result.loss = detail::run_minibatch_training(cfg, [&](Rng& rng, double lr) {
        static thread_local std::vector<int> values;
        static thread_local std::vector<int> negatives;
        values.assign(static_cast<std::size_t>(n_vars), 0);
        double obj = 0.0;
        int updates = 0;
        for (int s = 0; s < cfg.batch_size; ++s) {
            values[0] = root_alias.sample(rng);
            for (std::size_t i = 0; i < model.links.size(); ++i) {
                const int parent_var = model.links[i].parent;
                const int parent_val = values[static_cast<std::size_t>(parent_var)];
                const int child_val = row_alias[i][static_cast<std::size_t>(parent_val)].sample(rng);
                values[i + 1] = child_val;
                draw_negatives(noise[i], cfg.negatives, child_val, rng, negatives);
                obj += neg_step(emb.input_vectors[static_cast<std::size_t>(parent_var)],
                                emb.output_vectors[i + 1], parent_val, child_val, negatives, lr);
                ++updates;
            }
        }
        return updates > 0 ? -obj / updates : 0.0;
    });

    for (std::size_t i = 0; i < model.links.size(); ++i) {
        const Matrix& in = emb.input_vectors[static_cast<std::size_t>(model.links[i].parent)];
        const Matrix& out = emb.output_vectors[i + 1];
        Matrix logits(in.rows, out.rows);
        for (int p = 0; p < in.rows; ++p)
            for (int c = 0; c < out.rows; ++c) logits[p][c] = dot(out.row(c), in.row(p));
        softmax_rows(logits);
        require_row_stochastic(logits, "smoothed conditional for " +
                                           model.variables[i + 1].name);
        result.smoothed.push_back(std::move(logits));
    }
    return result;
}

struct SkipgramResult {
    EmbeddingSet embeddings;  // words -> words
    LossLog loss;
};

// All (input word, context word) pairs within the window, document-major.
inline std::vector<std::pair<int, int>> skipgram_pairs(const Corpus& corpus, int window) {
    if (window < 1) throw usage_error("context window must be >= 1");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& doc : corpus.docs) {
        const auto len = static_cast<int>(doc.tokens.size());
        for (int i = 0; i < len; ++i) {
            auto [lo, hi] = detail::context_bounds(i, len, window);
            for (int j = lo; j <= hi; ++j)
                if (j != i)
                    pairs.emplace_back(doc.tokens[static_cast<std::size_t>(i)],
                                       doc.tokens[static_cast<std::size_t>(j)]);
        }
    }
    if (pairs.empty()) throw data_error("no context pairs: all documents have fewer than 2 tokens");
    return pairs;
}

// Plain skip-gram with negative sampling; pairs are consumed in corpus order,
// cycling until the minibatch budget is spent.
inline SkipgramResult train_skipgram(const Corpus& corpus, int window, const TrainConfig& cfg) {
    cfg.validate();
    corpus.validate();
    const auto pairs = skipgram_pairs(corpus, window);

    std::vector<double> unigram(static_cast<std::size_t>(corpus.num_words()), 0.0);
    for (const auto& doc : corpus.docs)
        for (int t : doc.tokens) unigram[static_cast<std::size_t>(t)] += 1.0;
    const auto n = static_cast<double>(corpus.num_tokens());
    for (double& u : unigram) u /= n;
    const NoiseTable noise(unigram, cfg.noise_exponent);

    SkipgramResult result;
    Rng init_rng(cfg.seed);
    result.embeddings = init_embeddings("word", corpus.num_words(), "word", corpus.num_words(),
                                        cfg.dim, init_rng);

    EmbeddingSet& emb = result.embeddings;
    const std::int64_t total = static_cast<std::int64_t>(pairs.size());
    std::atomic<std::int64_t> cursor{0};
    result.loss = detail::run_minibatch_training(cfg, [&](Rng& rng, double lr) {
        double obj = 0.0;
        for (int i = 0; i < cfg.batch_size; ++i) {
            auto idx = cursor.fetch_add(1, std::memory_order_relaxed) % total;
            const auto& [wi, wc] = pairs[static_cast<std::size_t>(idx)];
            obj += neg_update(emb, wi, wc, noise, cfg.negatives, lr, rng);
        }
        return -obj / cfg.batch_size;
    });
    return result;
}

}  // namespace nea
