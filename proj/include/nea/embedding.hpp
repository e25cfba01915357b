#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nea/corpus.hpp"
#include "nea/errors.hpp"
#include "nea/matrix.hpp"
#include "nea/rng.hpp"
#include "nea/topic_models.hpp"

namespace nea {

// Paired input/output vectors of one log-bilinear link, e.g. topics -> words.
struct EmbeddingSet {
    std::string input_kind;
    std::string output_kind;
    int dim = 0;
    Matrix input_vectors;   // #inputs x dim
    Matrix output_vectors;  // #outputs x dim
};

// Inputs start uniform in [-0.5/dim, 0.5/dim], outputs at zero, so the
// untrained softmax reconstruction is exactly uniform.
inline EmbeddingSet init_embeddings(const std::string& input_kind, int num_inputs,
                                    const std::string& output_kind, int num_outputs, int dim,
                                    Rng& rng) {
    if (dim < 1) throw usage_error("embedding dimension must be >= 1");
    EmbeddingSet emb;
    emb.input_kind = input_kind;
    emb.output_kind = output_kind;
    emb.dim = dim;
    emb.input_vectors = Matrix(num_inputs, dim);
    emb.output_vectors = Matrix(num_outputs, dim);
    const double scale = 1.0 / dim;
    for (double& v : emb.input_vectors.data) v = (rng.uniform() - 0.5) * scale;
    return emb;
}

// Softmax reconstruction of the conditional table the embeddings encode:
// row i = softmax over outputs of the dot products with input vector i.
inline Matrix smooth_topics(const EmbeddingSet& emb) {
    for (double v : emb.input_vectors.data)
        if (!std::isfinite(v)) throw numeric_error("non-finite input embedding");
    for (double v : emb.output_vectors.data)
        if (!std::isfinite(v)) throw numeric_error("non-finite output embedding");
    Matrix logits(emb.input_vectors.rows, emb.output_vectors.rows);
    for (int i = 0; i < logits.rows; ++i)
        for (int o = 0; o < logits.cols; ++o)
            logits[i][o] = dot(emb.output_vectors.row(o), emb.input_vectors.row(i));
    softmax_rows(logits);
    require_row_stochastic(logits, "smoothed conditional table");
    return logits;
}

struct DocEmbeddings {
    Matrix vectors;              // D x dim, unit rows (zero rows for empty documents)
    std::vector<int> empty_docs;
};

// Document vectors: sum of normalized topic vectors over the model's token
// assignments, then normalized to unit length.
inline DocEmbeddings doc_embeddings(const LdaParams& params, const Corpus& corpus,
                                    const Matrix& topic_vectors) {
    if (static_cast<std::int64_t>(params.z.size()) != corpus.num_tokens())
        throw data_error("topic assignments are not aligned with the corpus");
    const int dim = topic_vectors.cols;

    std::vector<double> norms(static_cast<std::size_t>(topic_vectors.rows));
    for (int k = 0; k < topic_vectors.rows; ++k)
        norms[static_cast<std::size_t>(k)] = l2_norm(topic_vectors.row(k));

    DocEmbeddings out;
    out.vectors = Matrix(corpus.num_docs(), dim);
    std::size_t pos = 0;
    for (int d = 0; d < corpus.num_docs(); ++d) {
        double* vd = out.vectors[d];
        const auto& tokens = corpus.docs[static_cast<std::size_t>(d)].tokens;
        if (tokens.empty()) {
            out.empty_docs.push_back(d);
            continue;
        }
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            int k = params.z[pos++];
            double norm = norms[static_cast<std::size_t>(k)];
            if (norm <= 0.0)
                throw numeric_error("zero-norm topic vector for an assigned topic");
            const double* vk = topic_vectors[k];
            for (int c = 0; c < dim; ++c) vd[c] += vk[c] / norm;
        }
        double norm = l2_norm(out.vectors.row(d));
        if (norm > 0.0)
            for (int c = 0; c < dim; ++c) vd[c] /= norm;
    }
    return out;
}

// Skip-gram document features: mean of normalized input word vectors.
inline DocEmbeddings sg_doc_features(const Corpus& corpus, const EmbeddingSet& word_embeddings) {
    const int dim = word_embeddings.dim;
    const Matrix& words = word_embeddings.input_vectors;
    if (words.rows != corpus.num_words())
        throw data_error("word embeddings are not aligned with the corpus vocabulary");

    std::vector<double> norms(static_cast<std::size_t>(words.rows));
    for (int w = 0; w < words.rows; ++w) norms[static_cast<std::size_t>(w)] = l2_norm(words.row(w));

    DocEmbeddings out;
    out.vectors = Matrix(corpus.num_docs(), dim);
    for (int d = 0; d < corpus.num_docs(); ++d) {
        const auto& tokens = corpus.docs[static_cast<std::size_t>(d)].tokens;
        if (tokens.empty()) {
            out.empty_docs.push_back(d);
            continue;
        }
        double* vd = out.vectors[d];
        for (int w : tokens) {
            double norm = norms[static_cast<std::size_t>(w)];
            if (norm <= 0.0) continue;
            const double* vw = words[w];
            for (int c = 0; c < dim; ++c) vd[c] += vw[c] / norm;
        }
        for (int c = 0; c < dim; ++c) vd[c] /= static_cast<double>(tokens.size());
        double norm = l2_norm(out.vectors.row(d));
        if (norm > 0.0)
            for (int c = 0; c < dim; ++c) vd[c] /= norm;
    }
    return out;
}

}  // namespace nea
