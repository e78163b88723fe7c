#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracle_similarity.hpp"
#include "refdetect/parser.hpp"
#include "refdetect/similarity.hpp"

using namespace refdetect;

namespace {

CodeEntity ent(std::initializer_list<std::pair<const char*, int>> items) {
    CodeEntity e;
    static int n = 0;
    e.id = EntityId{EntityKind::Method, "synth.m" + std::to_string(n++), "m()"};
    for (const auto& [t, c] : items) e.tokens.add(t, c);
    return e;
}

std::vector<const CodeEntity*> ptrs(const std::vector<CodeEntity>& v) {
    std::vector<const CodeEntity*> out;
    for (const auto& e : v) out.push_back(&e);
    return out;
}

simoracle::Multiset to_oracle(const TokenMultiset& m) {
    simoracle::Multiset out;
    for (const auto& [t, c] : m) out[t] = c;
    return out;
}

simoracle::Corpus oracle_corpus(const std::vector<CodeEntity>& v) {
    simoracle::Corpus c;
    for (const auto& e : v) c.docs.push_back(to_oracle(e.tokens));
    return c;
}

} // namespace

TEST_CASE("idf grows with rarity over the shared corpus") {
    std::vector<CodeEntity> corpus = {
        ent({{"count", 2}, {"if", 1}, {"return", 1}}),
        ent({{"count", 1}, {"x", 1}}),
        ent({{"y", 1}, {"return", 1}}),
    };
    WeightIndex idx = build_weight_index(ptrs(corpus));
    REQUIRE(idx.entity_count() == 3);
    CHECK(idx.doc_frequency("count") == 2);
    CHECK(idx.doc_frequency("x") == 1);
    CHECK(idx.doc_frequency("missing") == 0);

    // |E| = 3: a token in 2 entities weighs log10(1 + 3/2), in 1 log10(1 + 3)
    CHECK(idx.idf("count") == Catch::Approx(0.39794).margin(1e-5));
    CHECK(idx.idf("x") == Catch::Approx(0.60206).margin(1e-5));
    // never-seen tokens get the rarest weight
    CHECK(idx.idf("missing") == Catch::Approx(std::log10(4.0)).margin(1e-12));

    // weight multiplies multiplicity in: count appears twice in the first body
    CHECK(weight(corpus[0], "count", idx) == Catch::Approx(0.79588).margin(1e-5));
}

TEST_CASE("a distinctive token repeated three times outweighs common ones") {
    std::vector<CodeEntity> corpus;
    corpus.push_back(ent({{"rare", 3}, {"x", 1}}));
    for (int i = 0; i < 7; ++i)
        corpus.push_back(ent({{"x", 1}, {"y", 1}}));
    WeightIndex idx = build_weight_index(ptrs(corpus));
    REQUIRE(idx.entity_count() == 8);
    // 3 * log10(1 + 8/1)
    CHECK(weight(corpus[0], "rare", idx) ==
          Catch::Approx(2.86272).margin(1e-5));
}

TEST_CASE("similarity is the ratio of weighted overlap to weighted union") {
    std::vector<CodeEntity> corpus = {
        ent({{"a", 2}, {"b", 1}}),
        ent({{"a", 1}, {"c", 1}}),
    };
    WeightIndex idx = build_weight_index(ptrs(corpus));
    double l2 = std::log10(2.0), l3 = std::log10(3.0);
    // overlap: min(2,1)*idf(a); union: 2*idf(a) + idf(b) + idf(c)
    CHECK(sim(corpus[0], corpus[1], idx) ==
          Catch::Approx(l2 / (2 * l2 + 2 * l3)).margin(1e-12));
    // one-sided: basis e2 = {a, c}
    CHECK(sim_u(corpus[1], corpus[0], idx) ==
          Catch::Approx(l2 / (l2 + l3)).margin(1e-12));
}

TEST_CASE("empty bodies carry no evidence") {
    std::vector<CodeEntity> corpus = {
        ent({}),
        ent({}),
        ent({{"a", 1}}),
    };
    WeightIndex idx = build_weight_index(ptrs(corpus));
    CHECK(sim(corpus[0], corpus[1], idx) == 0.0);
    CHECK(sim(corpus[0], corpus[2], idx) == 0.0);
    CHECK(sim_u(corpus[2], corpus[0], idx) == 0.0);
    CHECK_THROWS_AS(sim_u(corpus[0], corpus[2], idx), EmptyNumeratorBasis);
}

TEST_CASE("an empty corpus is rejected") {
    CHECK_THROWS_AS(build_weight_index(std::vector<const CodeEntity*>{}),
                    EmptyCorpus);
}

TEST_CASE("containment saturates the one-sided score at exactly one") {
    std::vector<CodeEntity> corpus = {
        ent({{"a", 1}, {"b", 1}}),
        ent({{"a", 2}, {"b", 1}, {"c", 5}}),
    };
    WeightIndex idx = build_weight_index(ptrs(corpus));
    CHECK(sim_u(corpus[0], corpus[1], idx) == 1.0);
    CHECK(sim_u(corpus[1], corpus[0], idx) < 1.0);
    CHECK(sim(corpus[0], corpus[1], idx) < 1.0);
}

TEST_CASE("identical multisets score exactly one") {
    std::vector<CodeEntity> corpus = {
        ent({{"a", 2}, {"b", 3}}),
        ent({{"a", 2}, {"b", 3}}),
        ent({{"z", 1}}),
    };
    WeightIndex idx = build_weight_index(ptrs(corpus));
    CHECK(sim(corpus[0], corpus[1], idx) == 1.0);
    CHECK(sim_u(corpus[0], corpus[1], idx) == 1.0);
}

TEST_CASE("randomized agreement with the brute-force reference") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> n_entities(2, 8);
    std::uniform_int_distribution<int> n_tokens(0, 12);
    std::uniform_int_distribution<int> token_pick(0, 19);
    std::uniform_int_distribution<int> mult_pick(1, 4);

    for (int trial = 0; trial < 300; ++trial) {
        std::vector<CodeEntity> corpus;
        int n = n_entities(rng);
        for (int i = 0; i < n; ++i) {
            CodeEntity e = ent({});
            int k = n_tokens(rng);
            for (int j = 0; j < k; ++j)
                e.tokens.add("t" + std::to_string(token_pick(rng)),
                             mult_pick(rng));
            corpus.push_back(std::move(e));
        }
        WeightIndex idx = build_weight_index(ptrs(corpus));
        simoracle::Corpus ref = oracle_corpus(corpus);

        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const auto& a = corpus[i];
                const auto& b = corpus[j];
                double got = sim(a, b, idx);
                double want = simoracle::similarity(ref, to_oracle(a.tokens),
                                                    to_oracle(b.tokens));
                REQUIRE(got == Catch::Approx(want).margin(1e-12));
                REQUIRE(got >= 0.0);
                REQUIRE(got <= 1.0 + 1e-15);
                REQUIRE(got == sim(b, a, idx)); // symmetric bit for bit

                if (!a.tokens.empty()) {
                    double got_u = sim_u(a, b, idx);
                    double want_u = simoracle::containment(
                        ref, to_oracle(a.tokens), to_oracle(b.tokens));
                    REQUIRE(got_u == Catch::Approx(want_u).margin(1e-12));
                    // saturation characterizes containment exactly
                    REQUIRE((got_u == 1.0) == a.tokens.subset_of(b.tokens));
                }
            }
            if (!corpus[i].tokens.empty())
                REQUIRE(sim(corpus[i], corpus[i], idx) == 1.0);
        }
    }
}

TEST_CASE("model-level corpus requires field virtual bodies") {
    auto b = parse_source_set({{"A.java", "package p; class A { int x; void f() { x = 1; } }"}}, "b");
    auto a = parse_source_set({{"A.java", "package p; class A { int x; void f() { x = 2; } }"}}, "a");
    CHECK_THROWS_AS(build_weight_index(b.model, a.model), Error);
    apply_field_virtual_bodies(b.model);
    CHECK_THROWS_AS(build_weight_index(b.model, a.model), Error);
    apply_field_virtual_bodies(a.model);
    WeightIndex idx = build_weight_index(b.model, a.model);
    // corpus is every entity from both sides: 2 x (type + field + method)
    CHECK(idx.entity_count() == 6);
}

TEST_CASE("index construction does not depend on corpus order") {
    std::vector<CodeEntity> corpus = {
        ent({{"a", 1}, {"b", 2}}),
        ent({{"b", 1}}),
        ent({{"c", 4}, {"a", 1}}),
    };
    auto fwd = ptrs(corpus);
    auto rev = fwd;
    std::reverse(rev.begin(), rev.end());
    WeightIndex i1 = build_weight_index(fwd);
    WeightIndex i2 = build_weight_index(rev);
    for (const char* t : {"a", "b", "c", "zz"})
        CHECK(i1.idf(t) == i2.idf(t));
}
