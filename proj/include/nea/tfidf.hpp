#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "nea/corpus.hpp"
#include "nea/errors.hpp"
#include "nea/matrix.hpp"

namespace nea {

// One sparse row per document over the vocabulary; entries sorted by word id.
struct TfIdfMatrix {
    int width = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;

    int num_rows() const { return static_cast<int>(rows.size()); }
};

// weight(d, w) = tf(d, w) * log(D / df(w)), rows L2-normalized. Words present
// in every document get idf 0 and drop out of the sparse rows.
inline TfIdfMatrix tfidf(const Corpus& corpus) {
    corpus.validate();
    const int w_count = corpus.num_words();
    const int d_count = corpus.num_docs();

    std::vector<int> df(static_cast<std::size_t>(w_count), 0);
    std::vector<int> tf(static_cast<std::size_t>(w_count), 0);
    std::vector<int> touched;
    for (const auto& doc : corpus.docs) {
        touched.clear();
        for (int t : doc.tokens) {
            if (tf[static_cast<std::size_t>(t)] == 0) touched.push_back(t);
            ++tf[static_cast<std::size_t>(t)];
        }
        for (int t : touched) {
            ++df[static_cast<std::size_t>(t)];
            tf[static_cast<std::size_t>(t)] = 0;
        }
    }

    std::vector<double> idf(static_cast<std::size_t>(w_count), 0.0);
    for (int w = 0; w < w_count; ++w)
        if (df[static_cast<std::size_t>(w)] > 0)
            idf[static_cast<std::size_t>(w)] =
                std::log(static_cast<double>(d_count) / df[static_cast<std::size_t>(w)]);

    TfIdfMatrix out;
    out.width = w_count;
    out.rows.resize(static_cast<std::size_t>(d_count));
    std::vector<double> acc(static_cast<std::size_t>(w_count), 0.0);
    for (int d = 0; d < d_count; ++d) {
        touched.clear();
        for (int t : corpus.docs[static_cast<std::size_t>(d)].tokens) {
            if (acc[static_cast<std::size_t>(t)] == 0.0) touched.push_back(t);
            acc[static_cast<std::size_t>(t)] += 1.0;
        }
        std::sort(touched.begin(), touched.end());
        double norm_sq = 0.0;
        auto& row = out.rows[static_cast<std::size_t>(d)];
        for (int t : touched) {
            double v = acc[static_cast<std::size_t>(t)] * idf[static_cast<std::size_t>(t)];
            acc[static_cast<std::size_t>(t)] = 0.0;
            if (v != 0.0) {
                row.emplace_back(t, v);
                norm_sq += v * v;
            }
        }
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [_, v] : row) v *= inv;
        }
    }
    return out;
}

inline Matrix to_dense(const TfIdfMatrix& m) {
    Matrix out(m.num_rows(), m.width, 0.0);
    for (int r = 0; r < m.num_rows(); ++r)
        for (const auto& [w, v] : m.rows[static_cast<std::size_t>(r)]) out[r][w] = v;
    return out;
}

}  // namespace nea
