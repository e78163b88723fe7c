#pragma once

// TF-IDF weighted multiset similarity between code entities.
//
// Over a corpus E (all entities of the revisions being compared):
//   idf(t)        = log10(1 + |E| / n_t)        n_t = entities containing t
//   w(e, t)       = multiplicity(e, t) * idf(t)
//   sim(e1, e2)   = sum_t min(w1, w2) / sum_t max(w1, w2)
//   sim_u(e1, e2) = sum_t min(w1, w2) / sum_t w(e1, t)
//
// sim_u saturates at 1 exactly when e1's multiset is contained in e2's,
// which is what extraction and inlining conditions test for.
//
// Sums always run in ascending token order so results are reproducible to
// the bit across runs and thread counts.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "refdetect/model.hpp"

namespace refdetect {

struct EmptyCorpus : Error {
    EmptyCorpus() : Error("weight index built over an empty corpus") {}
};

struct EmptyNumeratorBasis : Error {
    EmptyNumeratorBasis()
        : Error("asymmetric similarity is undefined for an empty basis "
                "multiset") {}
};

class WeightIndex {
public:
    std::size_t entity_count() const { return entity_count_; }

    int doc_frequency(const std::string& token) const {
        auto it = df_.find(token);
        return it == df_.end() ? 0 : it->second;
    }

    // Tokens never seen by the index get the rarest weight (n_t treated as
    // 1); within-corpus queries always have n_t >= 1.
    double idf(const std::string& token) const {
        auto it = idf_.find(token);
        if (it != idf_.end()) return it->second;
        return std::log10(1.0 + static_cast<double>(entity_count_));
    }

    static WeightIndex build(const std::vector<const CodeEntity*>& corpus) {
        if (corpus.empty()) throw EmptyCorpus();
        WeightIndex idx;
        idx.entity_count_ = corpus.size();
        for (const CodeEntity* e : corpus)
            for (const auto& [token, mult] : e->tokens)
                if (mult > 0) idx.df_[token] += 1;
        const double n = static_cast<double>(idx.entity_count_);
        for (const auto& [token, df] : idx.df_)
            idx.idf_[token] = std::log10(1.0 + n / static_cast<double>(df));
        return idx;
    }

private:
    std::size_t entity_count_ = 0;
    std::map<std::string, int> df_;
    std::map<std::string, double> idf_;
};

inline WeightIndex build_weight_index(
    const std::vector<const CodeEntity*>& corpus) {
    return WeightIndex::build(corpus);
}

// Shared corpus for one revision pair: every entity of both models. Requires
// field virtual bodies, otherwise field idf contributions would be bogus.
inline WeightIndex build_weight_index(const CodeModel& before,
                                      const CodeModel& after) {
    if (!before.virtual_bodies_applied() || !after.virtual_bodies_applied())
        throw Error("weight index requires field virtual bodies to be applied");
    std::vector<const CodeEntity*> corpus;
    corpus.reserve(before.entities().size() + after.entities().size());
    for (const auto& e : before.entities()) corpus.push_back(&e);
    for (const auto& e : after.entities()) corpus.push_back(&e);
    return build_weight_index(corpus);
}

inline double weight(const CodeEntity& e, const std::string& token,
                     const WeightIndex& index) {
    int m = e.tokens.multiplicity(token);
    return m == 0 ? 0.0 : static_cast<double>(m) * index.idf(token);
}

// Symmetric similarity in [0, 1]; 0 when either multiset is empty (an empty
// body is treated as carrying no evidence, not as a perfect match).
inline double sim(const CodeEntity& e1, const CodeEntity& e2,
                  const WeightIndex& index) {
    double num = 0.0, den = 0.0;
    auto i1 = e1.tokens.begin(), end1 = e1.tokens.end();
    auto i2 = e2.tokens.begin(), end2 = e2.tokens.end();
    while (i1 != end1 || i2 != end2) {
        int m1 = 0, m2 = 0;
        std::string token;
        if (i2 == end2 || (i1 != end1 && i1->first < i2->first)) {
            token = i1->first;
            m1 = i1->second;
            ++i1;
        } else if (i1 == end1 || i2->first < i1->first) {
            token = i2->first;
            m2 = i2->second;
            ++i2;
        } else {
            token = i1->first;
            m1 = i1->second;
            m2 = i2->second;
            ++i1;
            ++i2;
        }
        double f = index.idf(token);
        double w1 = m1 * f, w2 = m2 * f;
        num += std::min(w1, w2);
        den += std::max(w1, w2);
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

// Asymmetric containment score: how much of e1 is inside e2.
inline double sim_u(const CodeEntity& e1, const CodeEntity& e2,
                    const WeightIndex& index) {
    if (e1.tokens.empty()) throw EmptyNumeratorBasis();
    double num = 0.0, den = 0.0;
    for (const auto& [token, m1] : e1.tokens) {
        double f = index.idf(token);
        double w1 = m1 * f;
        double w2 = e2.tokens.multiplicity(token) * f;
        num += std::min(w1, w2);
        den += w1;
    }
    return num / den;
}

} // namespace refdetect
