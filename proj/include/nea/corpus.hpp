#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nea/errors.hpp"
#include "nea/rng.hpp"

namespace nea {

// Dense word <-> id bijection, ids in [0, W).
struct Vocabulary {
    std::vector<std::string> words;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(words.size()); }

    int add(const std::string& w) {
        auto it = index.find(w);
        if (it != index.end()) return it->second;
        int id = size();
        words.push_back(w);
        index.emplace(w, id);
        return id;
    }

    int id(const std::string& w) const {
        auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }

    const std::string& word(int id) const { return words[static_cast<std::size_t>(id)]; }
};

struct Document {
    std::vector<int> tokens;
    std::vector<int> authors;  // empty when the corpus carries no author metadata
    int label = -1;            // -1 = unlabeled
};

struct Corpus {
    Vocabulary vocab;
    std::vector<Document> docs;
    std::vector<std::string> author_names;
    std::vector<std::string> class_names;

    int num_words() const { return vocab.size(); }
    int num_docs() const { return static_cast<int>(docs.size()); }
    int num_authors() const { return static_cast<int>(author_names.size()); }
    int num_classes() const { return static_cast<int>(class_names.size()); }
    bool has_authors() const { return !author_names.empty(); }
    bool has_labels() const { return !class_names.empty(); }

    std::int64_t num_tokens() const {
        std::int64_t n = 0;
        for (const auto& d : docs) n += static_cast<std::int64_t>(d.tokens.size());
        return n;
    }

    void validate() const {
        if (docs.empty()) throw data_error("corpus has no documents");
        if (num_tokens() < 1) throw data_error("corpus has no tokens");
        const int w = num_words(), a = num_authors(), c = num_classes();
        for (const auto& d : docs) {
            for (int t : d.tokens)
                if (t < 0 || t >= w) throw data_error("token id out of range");
            for (int au : d.authors)
                if (au < 0 || au >= a) throw data_error("author id out of range");
            if (d.label >= c) throw data_error("label id out of range");
        }
    }
};

struct TokenizerConfig {
    bool lowercase = true;
    // Minimum total occurrence count across the corpus; rarer words are dropped.
    int min_count = 1;
    std::unordered_set<std::string> stopwords;
};

inline std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            if (!cfg.stopwords.count(cur)) out.push_back(cur);
            cur.clear();
        }
    };
    for (char ch : text) {
        bool alnum = (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') ||
                     (ch >= 'A' && ch <= 'Z');
        if (alnum) {
            if (cfg.lowercase && ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
            cur.push_back(ch);
        } else {
            flush();
        }
    }
    flush();
    return out;
}

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot read stopword file: " + path);
    std::unordered_set<std::string> stop;
    std::string w;
    while (in >> w) stop.insert(w);
    return stop;
}

// Assembles a corpus from pre-tokenized documents plus optional sidecar
// metadata. min_count filtering happens here so the vocabulary stays dense.
inline Corpus build_corpus(const std::vector<std::vector<std::string>>& raw_docs,
                           const TokenizerConfig& cfg,
                           const std::vector<std::vector<std::string>>& raw_authors = {},
                           const std::vector<std::string>& raw_labels = {}) {
    if (raw_docs.empty()) throw data_error("no documents to ingest");
    if (!raw_authors.empty() && raw_authors.size() != raw_docs.size())
        throw data_error("author sidecar length mismatch");
    if (!raw_labels.empty() && raw_labels.size() != raw_docs.size())
        throw data_error("label sidecar length mismatch");

    std::unordered_map<std::string, std::int64_t> freq;
    for (const auto& doc : raw_docs)
        for (const auto& w : doc) ++freq[w];

    Corpus corpus;
    for (std::size_t d = 0; d < raw_docs.size(); ++d) {
        Document doc;
        for (const auto& w : raw_docs[d]) {
            if (freq[w] < cfg.min_count) continue;
            doc.tokens.push_back(corpus.vocab.add(w));
        }
        corpus.docs.push_back(std::move(doc));
    }
    if (corpus.num_tokens() < 1) throw data_error("corpus is empty after filtering");

    if (!raw_authors.empty()) {
        Vocabulary authors;
        for (std::size_t d = 0; d < raw_docs.size(); ++d)
            for (const auto& name : raw_authors[d])
                corpus.docs[d].authors.push_back(authors.add(name));
        corpus.author_names = authors.words;
    }
    if (!raw_labels.empty()) {
        Vocabulary classes;
        for (std::size_t d = 0; d < raw_docs.size(); ++d)
            corpus.docs[d].label = classes.add(raw_labels[d]);
        corpus.class_names = classes.words;
    }
    corpus.validate();
    return corpus;
}

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot read file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::string> split_whitespace(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> parts;
    std::string p;
    while (iss >> p) parts.push_back(p);
    return parts;
}

}  // namespace detail

// Ingests a text file (one document per line) or a directory (one document per
// file, paths sorted). Optional sidecars: one line per document with
// whitespace-separated author names, and one class label per line.
inline Corpus ingest(const std::string& path, const TokenizerConfig& cfg,
                     const std::string& authors_path = "", const std::string& labels_path = "") {
    namespace fs = std::filesystem;
    std::vector<std::string> texts;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f);
            if (!in) throw data_error("cannot read file: " + f.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            texts.push_back(ss.str());
        }
    } else if (fs::is_regular_file(path)) {
        texts = detail::read_lines(path);
    } else {
        throw data_error("input path not found: " + path);
    }

    std::vector<std::vector<std::string>> raw_docs;
    raw_docs.reserve(texts.size());
    for (const auto& t : texts) raw_docs.push_back(tokenize(t, cfg));

    std::vector<std::vector<std::string>> raw_authors;
    if (!authors_path.empty()) {
        for (const auto& line : detail::read_lines(authors_path))
            raw_authors.push_back(detail::split_whitespace(line));
    }
    std::vector<std::string> raw_labels;
    if (!labels_path.empty()) {
        raw_labels = detail::read_lines(labels_path);
        for (const auto& l : raw_labels)
            if (l.empty()) throw data_error("empty label line in " + labels_path);
    }
    return build_corpus(raw_docs, cfg, raw_authors, raw_labels);
}

// Deterministic train/test partition. The training half defines the shared
// vocabulary; test tokens outside it are dropped.
inline std::pair<Corpus, Corpus> split(const Corpus& corpus, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw usage_error("split ratio must be in (0, 1)");
    const int d_total = corpus.num_docs();
    int n_train = static_cast<int>(std::llround(ratio * d_total));
    n_train = std::clamp(n_train, 1, d_total - 1);

    std::vector<int> order(static_cast<std::size_t>(d_total));
    for (int i = 0; i < d_total; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    for (int i = d_total - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[static_cast<std::size_t>(rng.uniform_int(i + 1))]);

    std::vector<int> train_ids(order.begin(), order.begin() + n_train);
    std::vector<int> test_ids(order.begin() + n_train, order.end());
    std::sort(train_ids.begin(), train_ids.end());
    std::sort(test_ids.begin(), test_ids.end());

    // Remap: new ids follow ascending old id over words seen in training docs.
    std::vector<int> remap(static_cast<std::size_t>(corpus.num_words()), -1);
    std::vector<char> seen(static_cast<std::size_t>(corpus.num_words()), 0);
    for (int d : train_ids)
        for (int t : corpus.docs[static_cast<std::size_t>(d)].tokens)
            seen[static_cast<std::size_t>(t)] = 1;

    Vocabulary shared;
    for (int w = 0; w < corpus.num_words(); ++w)
        if (seen[static_cast<std::size_t>(w)])
            remap[static_cast<std::size_t>(w)] = shared.add(corpus.vocab.word(w));

    auto take = [&](const std::vector<int>& ids) {
        Corpus part;
        part.vocab = shared;
        part.author_names = corpus.author_names;
        part.class_names = corpus.class_names;
        for (int d : ids) {
            const Document& src = corpus.docs[static_cast<std::size_t>(d)];
            Document doc;
            doc.authors = src.authors;
            doc.label = src.label;
            for (int t : src.tokens) {
                int nt = remap[static_cast<std::size_t>(t)];
                if (nt >= 0) doc.tokens.push_back(nt);
            }
            part.docs.push_back(std::move(doc));
        }
        return part;
    };

    Corpus train = take(train_ids);
    Corpus test = take(test_ids);

    if (corpus.has_labels()) {
        std::vector<char> present(static_cast<std::size_t>(corpus.num_classes()), 0);
        for (const auto& doc : train.docs)
            if (doc.label >= 0) present[static_cast<std::size_t>(doc.label)] = 1;
        std::vector<char> used(static_cast<std::size_t>(corpus.num_classes()), 0);
        for (const auto& doc : corpus.docs)
            if (doc.label >= 0) used[static_cast<std::size_t>(doc.label)] = 1;
        for (int c = 0; c < corpus.num_classes(); ++c)
            if (used[static_cast<std::size_t>(c)] && !present[static_cast<std::size_t>(c)])
                throw data_error("class '" + corpus.class_names[static_cast<std::size_t>(c)] +
                                 "' has no training documents after split");
    }
    return {std::move(train), std::move(test)};
}

}  // namespace nea
