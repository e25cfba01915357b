#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nea/corpus.hpp"
#include "nea/errors.hpp"
#include "nea/matrix.hpp"
#include "nea/rng.hpp"

namespace nea {

// Token order for Z arrays is document-major: all tokens of doc 0, then doc 1, ...

struct LdaParams {
    int K = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    Matrix theta;        // D x K
    Matrix phi;          // K x W
    std::vector<int> z;  // per-token topic assignments
};

struct AtmParams {
    int K = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    Matrix theta_author;  // A x K
    Matrix phi;           // K x W
    std::vector<int> z;
    std::vector<int> a;  // per-token author assignments
};

struct MmsgtmParams {
    int K = 0;
    int window = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    Matrix theta_word;  // W x K, input word -> topic
    Matrix phi;         // K x W, topic -> context word
    std::vector<int> z;
};

// Priors from the large-K switch: dense priors below 500 topics, sparse above.
inline std::pair<double, double> default_lda_priors(int k_topics) {
    if (k_topics < 500) return {0.1, 0.01};
    return {0.01, 0.001};
}

namespace detail {

inline void check_sampler_args(const Corpus& corpus, int k_topics, double alpha, double beta,
                               int iterations) {
    corpus.validate();
    if (k_topics < 1) throw usage_error("topic count must be >= 1");
    if (alpha <= 0.0 || beta <= 0.0) throw usage_error("alpha and beta must be positive");
    if (iterations < 1) throw usage_error("iterations must be >= 1");
}

}  // namespace detail

inline LdaParams train_lda(const Corpus& corpus, int k_topics, double alpha, double beta,
                           int iterations, std::uint64_t seed) {
    detail::check_sampler_args(corpus, k_topics, alpha, beta, iterations);
    const int d_count = corpus.num_docs();
    const int w_count = corpus.num_words();
    const std::int64_t n_total = corpus.num_tokens();

    std::vector<int> n_dk(static_cast<std::size_t>(d_count) * k_topics, 0);
    std::vector<int> n_kw(static_cast<std::size_t>(k_topics) * w_count, 0);
    std::vector<int> n_k(static_cast<std::size_t>(k_topics), 0);
    std::vector<int> z(static_cast<std::size_t>(n_total));

    Rng rng(seed);
    std::size_t pos = 0;
    for (int d = 0; d < d_count; ++d) {
        for (int w : corpus.docs[static_cast<std::size_t>(d)].tokens) {
            int k = rng.uniform_int(k_topics);
            z[pos++] = k;
            ++n_dk[static_cast<std::size_t>(d) * k_topics + k];
            ++n_kw[static_cast<std::size_t>(k) * w_count + w];
            ++n_k[static_cast<std::size_t>(k)];
        }
    }

    const double w_beta = w_count * beta;
    std::vector<double> weights(static_cast<std::size_t>(k_topics));
    for (int it = 0; it < iterations; ++it) {
        pos = 0;
        for (int d = 0; d < d_count; ++d) {
            int* dk = n_dk.data() + static_cast<std::size_t>(d) * k_topics;
            for (int w : corpus.docs[static_cast<std::size_t>(d)].tokens) {
                int old = z[pos];
                --dk[old];
                --n_kw[static_cast<std::size_t>(old) * w_count + w];
                --n_k[static_cast<std::size_t>(old)];
                for (int k = 0; k < k_topics; ++k) {
                    weights[static_cast<std::size_t>(k)] =
                        (dk[k] + alpha) *
                        (n_kw[static_cast<std::size_t>(k) * w_count + w] + beta) /
                        (n_k[static_cast<std::size_t>(k)] + w_beta);
                }
                int k = rng.categorical(weights);
                z[pos++] = k;
                ++dk[k];
                ++n_kw[static_cast<std::size_t>(k) * w_count + w];
                ++n_k[static_cast<std::size_t>(k)];
            }
        }
    }

    LdaParams params;
    params.K = k_topics;
    params.alpha = alpha;
    params.beta = beta;
    params.seed = seed;
    params.z = std::move(z);
    params.theta = Matrix(d_count, k_topics);
    params.phi = Matrix(k_topics, w_count);
    for (int d = 0; d < d_count; ++d) {
        const auto n_d =
            static_cast<double>(corpus.docs[static_cast<std::size_t>(d)].tokens.size());
        for (int k = 0; k < k_topics; ++k)
            params.theta[d][k] =
                (n_dk[static_cast<std::size_t>(d) * k_topics + k] + alpha) / (n_d + k_topics * alpha);
    }
    for (int k = 0; k < k_topics; ++k)
        for (int w = 0; w < w_count; ++w)
            params.phi[k][w] = (n_kw[static_cast<std::size_t>(k) * w_count + w] + beta) /
                               (n_k[static_cast<std::size_t>(k)] + w_beta);
    require_row_stochastic(params.theta, "LDA theta");
    require_row_stochastic(params.phi, "LDA phi");
    return params;
}

inline AtmParams train_atm(const Corpus& corpus, int k_topics, double alpha, double beta,
                           int iterations, std::uint64_t seed) {
    detail::check_sampler_args(corpus, k_topics, alpha, beta, iterations);
    if (!corpus.has_authors()) throw data_error("ATM requires author metadata");
    for (const auto& doc : corpus.docs)
        if (doc.authors.empty()) throw data_error("ATM requires a nonempty author list per document");

    const int a_count = corpus.num_authors();
    const int w_count = corpus.num_words();
    const std::int64_t n_total = corpus.num_tokens();

    std::vector<int> n_ak(static_cast<std::size_t>(a_count) * k_topics, 0);
    std::vector<int> n_a(static_cast<std::size_t>(a_count), 0);
    std::vector<int> n_kw(static_cast<std::size_t>(k_topics) * w_count, 0);
    std::vector<int> n_k(static_cast<std::size_t>(k_topics), 0);
    std::vector<int> z(static_cast<std::size_t>(n_total));
    std::vector<int> a(static_cast<std::size_t>(n_total));

    Rng rng(seed);
    std::size_t pos = 0;
    for (const auto& doc : corpus.docs) {
        for (int w : doc.tokens) {
            int au = doc.authors[static_cast<std::size_t>(
                rng.uniform_int(static_cast<int>(doc.authors.size())))];
            int k = rng.uniform_int(k_topics);
            z[pos] = k;
            a[pos] = au;
            ++pos;
            ++n_ak[static_cast<std::size_t>(au) * k_topics + k];
            ++n_a[static_cast<std::size_t>(au)];
            ++n_kw[static_cast<std::size_t>(k) * w_count + w];
            ++n_k[static_cast<std::size_t>(k)];
        }
    }

    const double w_beta = w_count * beta;
    const double k_alpha = k_topics * alpha;
    std::vector<double> weights;
    for (int it = 0; it < iterations; ++it) {
        pos = 0;
        for (const auto& doc : corpus.docs) {
            const auto n_authors = static_cast<int>(doc.authors.size());
            weights.assign(static_cast<std::size_t>(n_authors) * k_topics, 0.0);
            for (int w : doc.tokens) {
                int old_k = z[pos];
                int old_a = a[pos];
                --n_ak[static_cast<std::size_t>(old_a) * k_topics + old_k];
                --n_a[static_cast<std::size_t>(old_a)];
                --n_kw[static_cast<std::size_t>(old_k) * w_count + w];
                --n_k[static_cast<std::size_t>(old_k)];
                // Joint draw of (author, topic); the uniform author prior is constant.
                std::size_t idx = 0;
                for (int ai = 0; ai < n_authors; ++ai) {
                    int au = doc.authors[static_cast<std::size_t>(ai)];
                    double a_denom = n_a[static_cast<std::size_t>(au)] + k_alpha;
                    for (int k = 0; k < k_topics; ++k) {
                        weights[idx++] =
                            (n_ak[static_cast<std::size_t>(au) * k_topics + k] + alpha) / a_denom *
                            (n_kw[static_cast<std::size_t>(k) * w_count + w] + beta) /
                            (n_k[static_cast<std::size_t>(k)] + w_beta);
                    }
                }
                int pick = rng.categorical(weights);
                int au = doc.authors[static_cast<std::size_t>(pick / k_topics)];
                int k = pick % k_topics;
                z[pos] = k;
                a[pos] = au;
                ++pos;
                ++n_ak[static_cast<std::size_t>(au) * k_topics + k];
                ++n_a[static_cast<std::size_t>(au)];
                ++n_kw[static_cast<std::size_t>(k) * w_count + w];
                ++n_k[static_cast<std::size_t>(k)];
            }
        }
    }

    AtmParams params;
    params.K = k_topics;
    params.alpha = alpha;
    params.beta = beta;
    params.seed = seed;
    params.z = std::move(z);
    params.a = std::move(a);
    params.theta_author = Matrix(a_count, k_topics);
    params.phi = Matrix(k_topics, w_count);
    for (int au = 0; au < a_count; ++au)
        for (int k = 0; k < k_topics; ++k)
            params.theta_author[au][k] =
                (n_ak[static_cast<std::size_t>(au) * k_topics + k] + alpha) /
                (n_a[static_cast<std::size_t>(au)] + k_alpha);
    for (int k = 0; k < k_topics; ++k)
        for (int w = 0; w < w_count; ++w)
            params.phi[k][w] = (n_kw[static_cast<std::size_t>(k) * w_count + w] + beta) /
                               (n_k[static_cast<std::size_t>(k)] + w_beta);
    require_row_stochastic(params.theta_author, "ATM theta");
    require_row_stochastic(params.phi, "ATM phi");
    return params;
}

namespace detail {

// Context positions for token i of a document, clipped at the boundaries.
inline std::pair<int, int> context_bounds(int i, int len, int window) {
    int lo = i - window < 0 ? 0 : i - window;
    int hi = i + window >= len ? len - 1 : i + window;
    return {lo, hi};
}

}  // namespace detail

inline MmsgtmParams train_mmsgtm(const Corpus& corpus, int k_topics, int window, double alpha,
                                 double beta, int iterations, std::uint64_t seed) {
    detail::check_sampler_args(corpus, k_topics, alpha, beta, iterations);
    if (window < 1) throw usage_error("context window must be >= 1");

    const int w_count = corpus.num_words();
    const std::int64_t n_total = corpus.num_tokens();

    std::int64_t pair_total = 0;
    for (const auto& doc : corpus.docs) {
        const auto len = static_cast<int>(doc.tokens.size());
        for (int i = 0; i < len; ++i) {
            auto [lo, hi] = detail::context_bounds(i, len, window);
            pair_total += hi - lo;
        }
    }
    if (pair_total == 0) throw data_error("no context pairs: all documents have fewer than 2 tokens");

    std::vector<int> n_wk(static_cast<std::size_t>(w_count) * k_topics, 0);
    std::vector<std::int64_t> n_w(static_cast<std::size_t>(w_count), 0);
    std::vector<int> n_kw(static_cast<std::size_t>(k_topics) * w_count, 0);
    std::vector<std::int64_t> n_k(static_cast<std::size_t>(k_topics), 0);
    std::vector<int> z(static_cast<std::size_t>(n_total));

    Rng rng(seed);
    std::size_t pos = 0;
    for (const auto& doc : corpus.docs) {
        const auto len = static_cast<int>(doc.tokens.size());
        for (int i = 0; i < len; ++i) {
            int w = doc.tokens[static_cast<std::size_t>(i)];
            int k = rng.uniform_int(k_topics);
            z[pos++] = k;
            ++n_wk[static_cast<std::size_t>(w) * k_topics + k];
            ++n_w[static_cast<std::size_t>(w)];
            auto [lo, hi] = detail::context_bounds(i, len, window);
            for (int j = lo; j <= hi; ++j) {
                if (j == i) continue;
                ++n_kw[static_cast<std::size_t>(k) * w_count + doc.tokens[static_cast<std::size_t>(j)]];
                ++n_k[static_cast<std::size_t>(k)];
            }
        }
    }

    const double w_beta = w_count * beta;
    std::vector<double> weights(static_cast<std::size_t>(k_topics));
    std::vector<int> ctx;
    for (int it = 0; it < iterations; ++it) {
        pos = 0;
        for (const auto& doc : corpus.docs) {
            const auto len = static_cast<int>(doc.tokens.size());
            for (int i = 0; i < len; ++i) {
                int w = doc.tokens[static_cast<std::size_t>(i)];
                int old = z[pos];
                ctx.clear();
                auto [lo, hi] = detail::context_bounds(i, len, window);
                for (int j = lo; j <= hi; ++j)
                    if (j != i) ctx.push_back(doc.tokens[static_cast<std::size_t>(j)]);

                --n_wk[static_cast<std::size_t>(w) * k_topics + old];
                for (int c : ctx) --n_kw[static_cast<std::size_t>(old) * w_count + c];
                n_k[static_cast<std::size_t>(old)] -= static_cast<std::int64_t>(ctx.size());

                // Blocked conditional over the whole context multiset; repeats
                // within the context contribute ascending counts.
                for (int k = 0; k < k_topics; ++k) {
                    double p = n_wk[static_cast<std::size_t>(w) * k_topics + k] + alpha;
                    double denom = static_cast<double>(n_k[static_cast<std::size_t>(k)]) + w_beta;
                    for (std::size_t j = 0; j < ctx.size(); ++j) {
                        int repeats = 0;
                        for (std::size_t j2 = 0; j2 < j; ++j2)
                            if (ctx[j2] == ctx[j]) ++repeats;
                        p *= (n_kw[static_cast<std::size_t>(k) * w_count + ctx[j]] + beta + repeats) /
                             (denom + static_cast<double>(j));
                    }
                    weights[static_cast<std::size_t>(k)] = p;
                }
                int k = rng.categorical(weights);
                z[pos++] = k;
                ++n_wk[static_cast<std::size_t>(w) * k_topics + k];
                for (int c : ctx) ++n_kw[static_cast<std::size_t>(k) * w_count + c];
                n_k[static_cast<std::size_t>(k)] += static_cast<std::int64_t>(ctx.size());
            }
        }
    }

    MmsgtmParams params;
    params.K = k_topics;
    params.window = window;
    params.alpha = alpha;
    params.beta = beta;
    params.seed = seed;
    params.z = std::move(z);
    params.theta_word = Matrix(w_count, k_topics);
    params.phi = Matrix(k_topics, w_count);
    for (int w = 0; w < w_count; ++w)
        for (int k = 0; k < k_topics; ++k)
            params.theta_word[w][k] = (n_wk[static_cast<std::size_t>(w) * k_topics + k] + alpha) /
                                      (static_cast<double>(n_w[static_cast<std::size_t>(w)]) +
                                       k_topics * alpha);
    for (int k = 0; k < k_topics; ++k)
        for (int w = 0; w < w_count; ++w)
            params.phi[k][w] = (n_kw[static_cast<std::size_t>(k) * w_count + w] + beta) /
                               (static_cast<double>(n_k[static_cast<std::size_t>(k)]) + w_beta);
    require_row_stochastic(params.theta_word, "MMSGTM theta");
    require_row_stochastic(params.phi, "MMSGTM phi");
    return params;
}

// Exact MLE of the naive Bayes skip-gram topic model: row-normalized
// co-occurrence counts. Rows for words that never occur as an input with
// context are flagged undefined and left uniform.
struct SgtmMle {
    Matrix table;                      // W x W, row w_i = p_data(w_c | w_i)
    std::vector<std::int64_t> counts;  // W x W raw pair counts, row-major
    std::vector<std::int64_t> row_totals;
    std::vector<std::uint8_t> defined;
};

inline SgtmMle sgtm_mle(const Corpus& corpus, int window) {
    corpus.validate();
    if (window < 1) throw usage_error("context window must be >= 1");
    const int w_count = corpus.num_words();

    SgtmMle out;
    out.counts.assign(static_cast<std::size_t>(w_count) * w_count, 0);
    out.row_totals.assign(static_cast<std::size_t>(w_count), 0);
    for (const auto& doc : corpus.docs) {
        const auto len = static_cast<int>(doc.tokens.size());
        for (int i = 0; i < len; ++i) {
            int wi = doc.tokens[static_cast<std::size_t>(i)];
            auto [lo, hi] = detail::context_bounds(i, len, window);
            for (int j = lo; j <= hi; ++j) {
                if (j == i) continue;
                ++out.counts[static_cast<std::size_t>(wi) * w_count +
                             doc.tokens[static_cast<std::size_t>(j)]];
                ++out.row_totals[static_cast<std::size_t>(wi)];
            }
        }
    }
    std::int64_t grand_total = 0;
    for (auto t : out.row_totals) grand_total += t;
    if (grand_total == 0) throw data_error("no context pairs in corpus");

    out.table = Matrix(w_count, w_count);
    out.defined.assign(static_cast<std::size_t>(w_count), 0);
    for (int wi = 0; wi < w_count; ++wi) {
        auto total = out.row_totals[static_cast<std::size_t>(wi)];
        if (total == 0) {
            for (int wc = 0; wc < w_count; ++wc) out.table[wi][wc] = 1.0 / w_count;
        } else {
            out.defined[static_cast<std::size_t>(wi)] = 1;
            for (int wc = 0; wc < w_count; ++wc)
                out.table[wi][wc] =
                    static_cast<double>(out.counts[static_cast<std::size_t>(wi) * w_count + wc]) /
                    static_cast<double>(total);
        }
    }
    require_row_stochastic(out.table, "SGTM MLE table");
    return out;
}

}  // namespace nea
