#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "nea/alias_table.hpp"
#include "nea/embedding.hpp"
#include "nea/errors.hpp"
#include "nea/matrix.hpp"
#include "nea/rng.hpp"

namespace nea {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Numerically stable log(sigmoid(x)).
inline double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

// Noise distribution for NEG: base probabilities raised to an exponent and
// renormalized, wrapped in an alias table for O(1) draws.
class NoiseTable {
public:
    NoiseTable() = default;

    NoiseTable(std::span<const double> base_probs, double exponent) {
        std::vector<double> weights(base_probs.size());
        for (std::size_t i = 0; i < base_probs.size(); ++i) {
            if (base_probs[i] < 0.0) throw numeric_error("negative noise probability");
            weights[i] = exponent == 0.0 ? 1.0 : std::pow(base_probs[i], exponent);
        }
        alias_ = AliasTable(weights);
    }

    int sample(Rng& rng) const { return alias_.sample(rng); }
    int size() const { return alias_.size(); }
    const std::vector<double>& probs() const { return alias_.probs(); }

private:
    AliasTable alias_;
};

// NEG objective: log sigma(v'_pos . v_in) + sum_i log sigma(-v'_neg_i . v_in).
inline double neg_objective(std::span<const double> input, std::span<const double> positive,
                            const std::vector<std::span<const double>>& negatives) {
    if (positive.size() != input.size()) throw data_error("embedding dimension mismatch");
    double obj = log_sigmoid(dot(positive, input));
    for (const auto& neg : negatives) {
        if (neg.size() != input.size()) throw data_error("embedding dimension mismatch");
        obj += log_sigmoid(-dot(neg, input));
    }
    return obj;
}

// One stochastic gradient-ascent step on the NEG objective with an explicit
// negative set. Output rows update against the pre-step input vector and vice
// versa. Returns the objective at the pre-step parameters.
inline double neg_step(Matrix& input_vectors, Matrix& output_vectors, int input_id,
                       int positive_id, std::span<const int> negative_ids, double lr) {
    const int dim = input_vectors.cols;
    double* v_in = input_vectors[input_id];

    static thread_local std::vector<double> input_grad;
    input_grad.assign(static_cast<std::size_t>(dim), 0.0);

    double* v_pos = output_vectors[positive_id];
    double s_pos = 0.0;
    for (int c = 0; c < dim; ++c) s_pos += v_pos[c] * v_in[c];
    double objective = log_sigmoid(s_pos);
    double g_pos = (1.0 - sigmoid(s_pos)) * lr;
    for (int c = 0; c < dim; ++c) {
        input_grad[static_cast<std::size_t>(c)] += g_pos * v_pos[c];
        v_pos[c] += g_pos * v_in[c];
    }

    for (int neg_id : negative_ids) {
        double* v_neg = output_vectors[neg_id];
        double s_neg = 0.0;
        for (int c = 0; c < dim; ++c) s_neg += v_neg[c] * v_in[c];
        objective += log_sigmoid(-s_neg);
        double g_neg = -sigmoid(s_neg) * lr;
        for (int c = 0; c < dim; ++c) {
            input_grad[static_cast<std::size_t>(c)] += g_neg * v_neg[c];
            v_neg[c] += g_neg * v_in[c];
        }
    }

    for (int c = 0; c < dim; ++c) v_in[c] += input_grad[static_cast<std::size_t>(c)];
    return objective;
}

inline double neg_step(EmbeddingSet& emb, int input_id, int positive_id,
                       std::span<const int> negative_ids, double lr) {
    return neg_step(emb.input_vectors, emb.output_vectors, input_id, positive_id, negative_ids,
                    lr);
}

// Draws k negatives from the noise distribution. A draw colliding with the
// positive id is retried a few times, then dropped.
inline void draw_negatives(const NoiseTable& noise, int k, int positive_id, Rng& rng,
                           std::vector<int>& out) {
    out.clear();
    for (int i = 0; i < k; ++i) {
        int neg = -1;
        for (int attempt = 0; attempt < 8; ++attempt) {
            neg = noise.sample(rng);
            if (neg != positive_id) break;
            neg = -1;
        }
        if (neg >= 0) out.push_back(neg);
    }
}

inline double neg_update(EmbeddingSet& emb, int input_id, int positive_id, const NoiseTable& noise,
                         int k, double lr, Rng& rng) {
    if (input_id < 0 || input_id >= emb.input_vectors.rows)
        throw data_error("input id out of range");
    if (positive_id < 0 || positive_id >= emb.output_vectors.rows)
        throw data_error("output id out of range");
    if (lr < 0.0) throw usage_error("learning rate must be nonnegative");
    static thread_local std::vector<int> negatives;
    draw_negatives(noise, k, positive_id, rng, negatives);
    return neg_step(emb, input_id, positive_id, negatives, lr);
}

}  // namespace nea
