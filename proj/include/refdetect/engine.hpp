#pragma once

// Relationship analysis over two parsed revisions. Runs one candidate pass
// per matching relationship type in declaration order, resolving conflicts
// greedily so every entity ends up in at most one matching relationship,
// then scans for the non-matching kinds (extraction, inlining) which are
// free to share endpoints.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "refdetect/model.hpp"
#include "refdetect/relationships.hpp"
#include "refdetect/similarity.hpp"

namespace refdetect {

struct CandidateTriple {
    EntityId before;
    EntityId after;
    double score = 0.0;
};

// One-to-one mapping accumulated by the matching passes.
class MatchContext {
public:
    bool before_matched(const EntityId& id) const { return b2a_.count(id); }
    bool after_matched(const EntityId& id) const { return a2b_.count(id); }

    bool pair_matched(const EntityId& b, const EntityId& a) const {
        auto it = b2a_.find(b);
        return it != b2a_.end() && it->second == a;
    }

    std::optional<EntityId> counterpart_after(const EntityId& b) const {
        auto it = b2a_.find(b);
        if (it == b2a_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<EntityId> counterpart_before(const EntityId& a) const {
        auto it = a2b_.find(a);
        if (it == a2b_.end()) return std::nullopt;
        return it->second;
    }

    void record(const EntityId& b, const EntityId& a) {
        b2a_.emplace(b, a);
        a2b_.emplace(a, b);
    }

    const std::map<EntityId, EntityId>& pairs() const { return b2a_; }

private:
    std::map<EntityId, EntityId> b2a_;
    std::map<EntityId, EntityId> a2b_;
};

// Greedy resolution: highest score first, lexicographic on ids between equal
// scores, and a triple is kept only while both endpoints are still free (in
// this pass or any earlier one). Accepted pairs are recorded into ctx.
inline std::vector<CandidateTriple> resolve_conflicts(
    std::vector<CandidateTriple> candidates, MatchContext& ctx) {
    std::sort(candidates.begin(), candidates.end(),
              [](const CandidateTriple& a, const CandidateTriple& b) {
                  if (a.score != b.score) return a.score > b.score;
                  if (a.before != b.before) return a.before < b.before;
                  return a.after < b.after;
              });
    std::vector<CandidateTriple> accepted;
    for (auto& c : candidates) {
        if (ctx.before_matched(c.before) || ctx.after_matched(c.after))
            continue;
        ctx.record(c.before, c.after);
        accepted.push_back(std::move(c));
    }
    return accepted;
}

namespace detail {

inline bool declares_supertype(const CodeEntity& type,
                               const std::string& simple) {
    for (const auto& s : type.supertypes)
        if (s == simple) return true;
    return false;
}

} // namespace detail

// Candidate triples for one matching relationship type. Entities already
// claimed by an earlier pass never become candidates again.
inline std::vector<CandidateTriple> find_matching_candidates(
    RelationshipType type, const CodeModel& before, const CodeModel& after,
    const WeightIndex& index, const ThresholdConfig& config,
    const MatchContext& ctx) {
    std::vector<CandidateTriple> out;
    const double tau = is_same_relationship(type) ? 0.0 : config.tau(type);

    auto consider_sim = [&](const CodeEntity& e1, const CodeEntity& e2) {
        double s = sim(e1, e2, index);
        if (s > tau)
            out.push_back(CandidateTriple{e1.id, e2.id, s});
    };

    auto each_pair = [&](EntityKind kind, auto&& cond) {
        for (const CodeEntity* e1 : before.of_kind(kind)) {
            if (ctx.before_matched(e1->id)) continue;
            for (const CodeEntity* e2 : after.of_kind(kind)) {
                if (ctx.after_matched(e2->id)) continue;
                cond(*e1, *e2);
            }
        }
    };

    switch (type) {
        case RelationshipType::SameType:
            each_pair(EntityKind::Type, [&](const CodeEntity& a, const CodeEntity& b) {
                if (a.id.qualified_name == b.id.qualified_name)
                    out.push_back(CandidateTriple{a.id, b.id, 1.0});
            });
            break;

        case RelationshipType::MoveType:
            each_pair(EntityKind::Type, [&](const CodeEntity& a, const CodeEntity& b) {
                if (a.simple_name() == b.simple_name() &&
                    a.id.container_path() != b.id.container_path())
                    consider_sim(a, b);
            });
            break;

        case RelationshipType::RenameType:
            each_pair(EntityKind::Type, [&](const CodeEntity& a, const CodeEntity& b) {
                if (a.simple_name() != b.simple_name() &&
                    a.id.container_path() == b.id.container_path())
                    consider_sim(a, b);
            });
            break;

        case RelationshipType::MoveAndRenameType:
            each_pair(EntityKind::Type, [&](const CodeEntity& a, const CodeEntity& b) {
                if (a.simple_name() != b.simple_name() &&
                    a.id.container_path() != b.id.container_path())
                    consider_sim(a, b);
            });
            break;

        case RelationshipType::SameMethod:
            // constructors track their container's name, so a constructor of
            // a renamed class still matches by parameter list alone
            each_pair(EntityKind::Method, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (!ctx.pair_matched(*a.container, *b.container)) return;
                bool same_sig = a.id.signature == b.id.signature;
                bool ctor_pair = a.is_constructor && b.is_constructor &&
                                 a.param_types == b.param_types;
                if (same_sig || ctor_pair)
                    out.push_back(CandidateTriple{a.id, b.id, 1.0});
            });
            break;

        case RelationshipType::PullUpMethod:
            each_pair(EntityKind::Method, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.id.signature != b.id.signature) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                auto ca = ctx.counterpart_after(*a.container);
                if (!ca) return;
                const CodeEntity* ca_entity = after.find(*ca);
                if (!ca_entity ||
                    !detail::declares_supertype(*ca_entity,
                                                b.container->simple_name()))
                    return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::PushDownMethod:
            each_pair(EntityKind::Method, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.id.signature != b.id.signature) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                auto sa = ctx.counterpart_after(*a.container);
                if (!sa) return;
                const CodeEntity* cb_entity = after.find(*b.container);
                if (!cb_entity ||
                    !detail::declares_supertype(*cb_entity, sa->simple_name()))
                    return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::RenameMethod:
            each_pair(EntityKind::Method, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (!ctx.pair_matched(*a.container, *b.container)) return;
                if (a.simple_name() == b.simple_name()) return;
                if (a.is_constructor || b.is_constructor) return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::MoveMethod:
            each_pair(EntityKind::Method, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.id.signature != b.id.signature) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::SameField:
            each_pair(EntityKind::Field, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (!ctx.pair_matched(*a.container, *b.container)) return;
                if (a.simple_name() == b.simple_name())
                    out.push_back(CandidateTriple{a.id, b.id, 1.0});
            });
            break;

        case RelationshipType::PullUpField:
            each_pair(EntityKind::Field, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.simple_name() != b.simple_name()) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                auto ca = ctx.counterpart_after(*a.container);
                if (!ca) return;
                const CodeEntity* ca_entity = after.find(*ca);
                if (!ca_entity ||
                    !detail::declares_supertype(*ca_entity,
                                                b.container->simple_name()))
                    return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::PushDownField:
            each_pair(EntityKind::Field, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.simple_name() != b.simple_name()) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                auto sa = ctx.counterpart_after(*a.container);
                if (!sa) return;
                const CodeEntity* cb_entity = after.find(*b.container);
                if (!cb_entity ||
                    !detail::declares_supertype(*cb_entity, sa->simple_name()))
                    return;
                consider_sim(a, b);
            });
            break;

        case RelationshipType::MoveField:
            each_pair(EntityKind::Field, [&](const CodeEntity& a, const CodeEntity& b) {
                if (!a.container || !b.container) return;
                if (a.simple_name() != b.simple_name()) return;
                if (ctx.pair_matched(*a.container, *b.container)) return;
                consider_sim(a, b);
            });
            break;

        default:
            throw Error(std::string("not a matching relationship type: ") +
                        to_string(type));
    }
    return out;
}

// Extraction and inlining relationships; these reuse matched endpoints and
// several of them may share the same before or after entity.
inline std::vector<Relationship> find_non_matching(
    const CodeModel& before, const CodeModel& after, const WeightIndex& index,
    const ThresholdConfig& config, const MatchContext& ctx) {
    std::vector<Relationship> out;

    // Extract Supertype: a new type whose body came out of a surviving one
    // that now declares it as a supertype.
    {
        const double tau = config.tau(RelationshipType::ExtractSupertype);
        for (const CodeEntity* t2 : after.of_kind(EntityKind::Type)) {
            if (ctx.after_matched(t2->id) || t2->tokens.empty()) continue;
            for (const CodeEntity* t1 : before.of_kind(EntityKind::Type)) {
                auto y = ctx.counterpart_after(t1->id);
                if (!y) continue;
                const CodeEntity* y_entity = after.find(*y);
                if (!y_entity ||
                    !detail::declares_supertype(*y_entity, t2->simple_name()))
                    continue;
                double s = sim_u(*t2, *t1, index);
                if (s > tau)
                    out.push_back(Relationship{RelationshipType::ExtractSupertype,
                                               t1->id, t2->id, s});
            }
        }
    }

    // Extract Method: a new method whose body is contained in the old body
    // of a surviving method that now calls it.
    {
        const double tau = config.tau(RelationshipType::ExtractMethod);
        for (const CodeEntity* m2 : after.of_kind(EntityKind::Method)) {
            if (ctx.after_matched(m2->id) || m2->tokens.empty()) continue;
            CallDescriptor callee{m2->simple_name(),
                                  static_cast<int>(m2->param_types.size())};
            for (const CodeEntity* m1 : before.of_kind(EntityKind::Method)) {
                auto y = ctx.counterpart_after(m1->id);
                if (!y) continue;
                const CodeEntity* y_entity = after.find(*y);
                if (!y_entity || !y_entity->calls.count(callee)) continue;
                if (m1->tokens.empty()) continue;
                double s = sim_u(*m2, *m1, index);
                if (s > tau)
                    out.push_back(Relationship{RelationshipType::ExtractMethod,
                                               m1->id, m2->id, s});
            }
        }
    }

    // Inline Method: a removed method whose body is contained in the new
    // body of a surviving method that used to call it.
    {
        const double tau = config.tau(RelationshipType::InlineMethod);
        for (const CodeEntity* m1 : before.of_kind(EntityKind::Method)) {
            if (ctx.before_matched(m1->id) || m1->tokens.empty()) continue;
            CallDescriptor callee{m1->simple_name(),
                                  static_cast<int>(m1->param_types.size())};
            for (const CodeEntity* m2 : after.of_kind(EntityKind::Method)) {
                auto x = ctx.counterpart_before(m2->id);
                if (!x) continue;
                const CodeEntity* x_entity = before.find(*x);
                if (!x_entity || !x_entity->calls.count(callee)) continue;
                if (m2->tokens.empty()) continue;
                double s = sim_u(*m1, *m2, index);
                if (s > tau)
                    out.push_back(Relationship{RelationshipType::InlineMethod,
                                               m1->id, m2->id, s});
            }
        }
    }
    return out;
}

struct DetectionResult {
    std::vector<Relationship> all;          // including Same* matches
    std::vector<Relationship> refactorings; // reportable types only, ordered
    MatchContext matches;
};

inline DetectionResult detect(const CodeModel& before, const CodeModel& after,
                              const ThresholdConfig& config) {
    if (!before.virtual_bodies_applied() || !after.virtual_bodies_applied())
        throw Error("detect: field virtual bodies not applied");

    WeightIndex index = build_weight_index(before, after);
    DetectionResult r;

    for (RelationshipType type : all_relationship_types()) {
        if (!is_matching_relationship(type)) continue;
        auto cands =
            find_matching_candidates(type, before, after, index, config,
                                     r.matches);
        for (auto& c : resolve_conflicts(std::move(cands), r.matches))
            r.all.push_back(Relationship{type, c.before, c.after, c.score});
    }
    for (auto& rel : find_non_matching(before, after, index, config,
                                       r.matches))
        r.all.push_back(rel);

    auto order_of = [](RelationshipType t) {
        const auto& all = all_relationship_types();
        for (std::size_t i = 0; i < all.size(); ++i)
            if (all[i] == t) return i;
        return all.size();
    };
    for (const auto& rel : r.all)
        if (!is_same_relationship(rel.type)) r.refactorings.push_back(rel);
    std::sort(r.refactorings.begin(), r.refactorings.end(),
              [&](const Relationship& a, const Relationship& b) {
                  auto oa = order_of(a.type), ob = order_of(b.type);
                  if (oa != ob) return oa < ob;
                  if (a.before != b.before) return a.before < b.before;
                  return a.after < b.after;
              });
    return r;
}

} // namespace refdetect
