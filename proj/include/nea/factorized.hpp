#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nea/corpus.hpp"
#include "nea/errors.hpp"
#include "nea/matrix.hpp"
#include "nea/topic_models.hpp"

namespace nea {

// A topic model in root-plus-conditionals form: P(a_0) * prod_i P(a_i | parent(a_i)).
// Variable 0 is the root; variable i+1 is the child of links[i], whose parent
// index is strictly smaller, so the structure is acyclic by construction.
struct FactorizedVariable {
    std::string name;
    int cardinality = 0;
};

struct FactorizedLink {
    int parent = 0;  // variable index
    Matrix table;    // cardinality(parent) x cardinality(child)
};

struct FactorizedModel {
    std::vector<FactorizedVariable> variables;
    std::vector<double> root;         // distribution over variables[0]
    std::vector<FactorizedLink> links;  // links[i] conditions variable i+1

    int num_variables() const { return static_cast<int>(variables.size()); }

    void validate() const {
        if (variables.empty()) throw data_error("factorized model has no variables");
        if (static_cast<int>(root.size()) != variables[0].cardinality)
            throw data_error("root distribution size mismatch");
        if (static_cast<int>(links.size()) != num_variables() - 1)
            throw data_error("factorized model needs one link per non-root variable");
        double sum = 0.0;
        for (double p : root) {
            if (p < 0.0) throw numeric_error("negative root probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw numeric_error("root distribution does not sum to 1");
        for (std::size_t i = 0; i < links.size(); ++i) {
            const auto child = static_cast<int>(i) + 1;
            const auto& link = links[i];
            if (link.parent < 0 || link.parent >= child)
                throw data_error("link parent must precede its child");
            if (link.table.rows != variables[static_cast<std::size_t>(link.parent)].cardinality ||
                link.table.cols != variables[static_cast<std::size_t>(child)].cardinality)
                throw data_error("conditional table shape mismatch for variable " +
                                 variables[static_cast<std::size_t>(child)].name);
            require_row_stochastic(link.table, "conditional P(" +
                                                   variables[static_cast<std::size_t>(child)].name +
                                                   " | parent)");
        }
    }

    // Exact marginal of a variable, obtained by pushing the root forward.
    std::vector<double> marginal(int var) const {
        if (var == 0) return root;
        const auto& link = links[static_cast<std::size_t>(var - 1)];
        std::vector<double> parent = marginal(link.parent);
        std::vector<double> out(static_cast<std::size_t>(link.table.cols), 0.0);
        for (int p = 0; p < link.table.rows; ++p) {
            double pp = parent[static_cast<std::size_t>(p)];
            if (pp == 0.0) continue;
            for (int c = 0; c < link.table.cols; ++c) out[static_cast<std::size_t>(c)] += pp * link.table[p][c];
        }
        return out;
    }
};

// LDA as a chain: document -> topic -> word, uniform root over documents.
inline FactorizedModel as_factorized(const LdaParams& params, const Corpus& corpus) {
    FactorizedModel model;
    model.variables = {{"document", corpus.num_docs()},
                       {"topic", params.K},
                       {"word", corpus.num_words()}};
    model.root.assign(static_cast<std::size_t>(corpus.num_docs()), 1.0 / corpus.num_docs());
    model.links.push_back({0, params.theta});
    model.links.push_back({1, params.phi});
    model.validate();
    return model;
}

// ATM as a chain: document -> author (uniform over the document's author
// list) -> topic -> word.
inline FactorizedModel as_factorized(const AtmParams& params, const Corpus& corpus) {
    if (!corpus.has_authors()) throw data_error("ATM factorization requires author metadata");
    FactorizedModel model;
    model.variables = {{"document", corpus.num_docs()},
                       {"author", corpus.num_authors()},
                       {"topic", params.K},
                       {"word", corpus.num_words()}};
    model.root.assign(static_cast<std::size_t>(corpus.num_docs()), 1.0 / corpus.num_docs());

    Matrix doc_author(corpus.num_docs(), corpus.num_authors(), 0.0);
    for (int d = 0; d < corpus.num_docs(); ++d) {
        const auto& authors = corpus.docs[static_cast<std::size_t>(d)].authors;
        if (authors.empty()) throw data_error("document without authors in ATM factorization");
        double p = 1.0 / static_cast<double>(authors.size());
        for (int a : authors) doc_author[d][a] += p;
    }
    model.links.push_back({0, std::move(doc_author)});
    model.links.push_back({1, params.theta_author});
    model.links.push_back({2, params.phi});
    model.validate();
    return model;
}

// MMSGTM as a chain: input word (empirical distribution) -> topic -> context word.
inline FactorizedModel as_factorized(const MmsgtmParams& params, const Corpus& corpus) {
    FactorizedModel model;
    model.variables = {{"input_word", corpus.num_words()},
                       {"topic", params.K},
                       {"context_word", corpus.num_words()}};
    std::vector<double> p_data(static_cast<std::size_t>(corpus.num_words()), 0.0);
    for (const auto& doc : corpus.docs)
        for (int t : doc.tokens) p_data[static_cast<std::size_t>(t)] += 1.0;
    const auto n = static_cast<double>(corpus.num_tokens());
    for (double& p : p_data) p /= n;
    model.root = std::move(p_data);
    model.links.push_back({0, params.theta_word});
    model.links.push_back({1, params.phi});
    model.validate();
    return model;
}

}  // namespace nea
