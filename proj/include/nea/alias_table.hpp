#pragma once

#include <queue>
#include <span>
#include <vector>

#include "nea/errors.hpp"
#include "nea/rng.hpp"

namespace nea {

// Walker/Vose alias method: O(n) build, O(1) draws from a discrete distribution.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(std::span<const double> weights) {
        const int n = static_cast<int>(weights.size());
        if (n == 0) throw data_error("alias table over empty distribution");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw numeric_error("negative weight in discrete distribution");
            total += w;
        }
        if (total <= 0.0) throw numeric_error("discrete distribution sums to zero");

        probs_.resize(n);
        for (int i = 0; i < n; ++i) probs_[i] = weights[i] / total;

        threshold_.assign(n, 0.0);
        alias_.assign(n, 0);
        std::queue<int> small, large;
        std::vector<double> scaled(n);
        for (int i = 0; i < n; ++i) {
            scaled[i] = probs_[i] * n;
            (scaled[i] < 1.0 ? small : large).push(i);
        }
        while (!small.empty() && !large.empty()) {
            int s = small.front(), l = large.front();
            small.pop();
            large.pop();
            threshold_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            (scaled[l] < 1.0 ? small : large).push(l);
        }
        // Leftovers are full buckets up to rounding.
        while (!large.empty()) {
            threshold_[large.front()] = 1.0;
            large.pop();
        }
        while (!small.empty()) {
            threshold_[small.front()] = 1.0;
            small.pop();
        }
    }

    int sample(Rng& rng) const {
        int i = rng.uniform_int(static_cast<int>(threshold_.size()));
        return rng.uniform() < threshold_[i] ? i : alias_[i];
    }

    int size() const { return static_cast<int>(threshold_.size()); }
    bool empty() const { return threshold_.empty(); }

    // Normalized distribution the table was built from.
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> threshold_;
    std::vector<int> alias_;
    std::vector<double> probs_;
};

}  // namespace nea
