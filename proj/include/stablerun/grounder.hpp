#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stablerun/ground.hpp"
#include "stablerun/program.hpp"

namespace stablerun {

/// Partition of a program's predicates into extensional ones (defined purely
/// by ground facts; their extensions are finite relations) and intensional
/// ones (everything else).
struct EdbSplit {
    std::set<Predicate> edb;
    std::set<Predicate> idb;

    /// A predicate is extensional iff all of its defining clauses are ground
    /// facts and it is not forced intensional by a #intensional directive.
    /// Predicates with no defining clause count as extensional with an empty
    /// extension.
    static EdbSplit infer(const Program& p) {
        EdbSplit out;
        std::set<Predicate> has_rule;
        for (const Clause& cl : p.clauses())
            if (!cl.is_fact() || !cl.head.ground())
                has_rule.insert(cl.head.predicate());
        for (const Predicate& pr : p.predicates()) {
            if (has_rule.count(pr) || p.forced_intensional().count(pr))
                out.idb.insert(pr);
            else
                out.edb.insert(pr);
        }
        return out;
    }
};

/// True iff every variable of every clause (head and body) occurs in some
/// positive body atom whose predicate is extensional.
inline bool check_domain_restricted(const Program& p, const EdbSplit& split) {
    for (const Clause& cl : p.clauses()) {
        std::set<std::string> bound;
        for (const Literal& l : cl.body)
            if (!l.negated && split.edb.count(l.atom.predicate()))
                for (const Term& t : l.atom.args)
                    if (t.is_variable())
                        bound.insert(t.name);
        for (const std::string& var : cl.variables())
            if (!bound.count(var))
                return false;
    }
    return true;
}

namespace detail {

/// A materialized extensional relation with O(1) membership and lazily built
/// hash indexes keyed by the set of bound argument positions.
class EdbRelation {
public:
    explicit EdbRelation(int arity) : arity_(arity) {}

    int arity() const { return arity_; }
    std::size_t size() const { return count_; }

    void add(std::span<const int32_t> tuple) {
        uint64_t h = hash_tuple(tuple);
        int32_t found = members_.find(h, [&](int32_t row) { return row_equals(row, tuple); });
        if (found != HashIndex::kEmpty)
            return;
        members_.insert(h, static_cast<int32_t>(count_));
        data_.insert(data_.end(), tuple.begin(), tuple.end());
        ++count_;
    }

    bool contains(std::span<const int32_t> tuple) const {
        uint64_t h = hash_tuple(tuple);
        return members_.find(h, [&](int32_t row) { return row_equals(row, tuple); }) !=
               HashIndex::kEmpty;
    }

    std::span<const int32_t> row(std::size_t r) const {
        return {data_.data() + r * arity_, static_cast<std::size_t>(arity_)};
    }

    /// Rows whose arguments at the positions in `mask` equal `bound_vals`
    /// (listed in position order). mask == 0 means all rows.
    const std::vector<uint32_t>& candidates(uint32_t mask,
                                            std::span<const int32_t> bound_vals) {
        if (mask == 0) {
            if (all_rows_.size() != count_) {
                all_rows_.resize(count_);
                for (std::size_t i = 0; i < count_; ++i)
                    all_rows_[i] = static_cast<uint32_t>(i);
            }
            return all_rows_;
        }
        auto& index = indexes_[mask];
        if (index.empty() && count_ > 0) {
            for (std::size_t r = 0; r < count_; ++r) {
                uint64_t h = 0x9b97f4a7u;
                std::span<const int32_t> tup = row(r);
                for (int i = 0; i < arity_; ++i)
                    if (mask & (1u << i))
                        h = hash_mix(h, static_cast<uint64_t>(tup[i]));
                index[h].push_back(static_cast<uint32_t>(r));
            }
        }
        uint64_t h = 0x9b97f4a7u;
        for (int32_t val : bound_vals)
            h = hash_mix(h, static_cast<uint64_t>(val));
        auto it = index.find(h);
        if (it == index.end())
            return empty_;
        return it->second;
    }

private:
    static uint64_t hash_tuple(std::span<const int32_t> tuple) {
        uint64_t h = 0x2545f491u;
        for (int32_t x : tuple)
            h = hash_mix(h, static_cast<uint64_t>(x));
        return h;
    }

    bool row_equals(std::size_t r, std::span<const int32_t> tuple) const {
        std::span<const int32_t> mine = row(r);
        return std::equal(mine.begin(), mine.end(), tuple.begin(), tuple.end());
    }

    int arity_;
    std::size_t count_ = 0;
    std::vector<int32_t> data_;
    HashIndex members_{64};
    std::map<uint32_t, std::unordered_map<uint64_t, std::vector<uint32_t>>> indexes_;
    std::vector<uint32_t> all_rows_;
    std::vector<uint32_t> empty_;
};

struct CompiledArg {
    bool is_var;
    int32_t index;  // constant id or clause-local variable slot
};

struct CompiledLiteral {
    int32_t pred;
    bool negated;
    bool edb;
    std::vector<CompiledArg> args;
};

}  // namespace detail

/// Grounds a domain-restricted program by joining over the extensions of the
/// positive extensional body atoms of each clause instead of enumerating all
/// substitutions. Extensional guards that are satisfied are dropped from the
/// ground bodies and clauses with unsatisfiable extensional literals are
/// dropped entirely; stable models are unchanged (extensional atoms beyond
/// the facts are never derivable).
inline GroundProgram relational_ground(const Program& p, const EdbSplit& split) {
    for (const Clause& cl : p.clauses())
        if (split.edb.count(cl.head.predicate()) && !(cl.is_fact() && cl.head.ground()))
            throw InvalidEdbSplitError("extensional predicate " + cl.head.pred +
                                       "/" + std::to_string(cl.head.arity()) +
                                       " has a non-fact defining clause");
    if (!check_domain_restricted(p, split))
        throw NotDomainRestrictedError(
            "program is not domain-restricted for the given extensional split");

    GroundProgram::Builder b;
    std::map<int32_t, detail::EdbRelation> relations;
    auto relation_of = [&](int32_t pred, int arity) -> detail::EdbRelation& {
        auto it = relations.find(pred);
        if (it == relations.end())
            it = relations.emplace(pred, detail::EdbRelation(arity)).first;
        return it->second;
    };

    // Pass 1: extensional facts become both relation rows and output facts.
    std::vector<const Clause*> rules;
    for (const Clause& cl : p.clauses()) {
        if (split.edb.count(cl.head.predicate())) {
            int32_t pid = b.pred_id(cl.head.predicate());
            std::vector<int32_t> tuple;
            tuple.reserve(cl.head.args.size());
            for (const Term& t : cl.head.args)
                tuple.push_back(b.const_id(t.name));
            relation_of(pid, cl.head.arity()).add(tuple);
            b.add_clause(b.atom_id(pid, tuple), {}, {});
        } else {
            rules.push_back(&cl);
        }
    }

    // Pass 2: instantiate the remaining clauses by joins.
    std::vector<int32_t> subst;
    std::vector<int32_t> bound_vals;
    std::vector<int32_t> atom_args;
    for (const Clause* clp : rules) {
        const Clause& cl = *clp;
        std::map<std::string, int32_t> var_slot;
        auto compile_atom = [&](const Atom& a, bool negated) {
            detail::CompiledLiteral lit;
            lit.pred = b.pred_id(a.predicate());
            lit.negated = negated;
            lit.edb = split.edb.count(a.predicate()) != 0;
            for (const Term& t : a.args) {
                if (t.is_constant()) {
                    lit.args.push_back({false, b.const_id(t.name)});
                } else {
                    auto [it, fresh] =
                        var_slot.emplace(t.name, static_cast<int32_t>(var_slot.size()));
                    (void)fresh;
                    lit.args.push_back({true, it->second});
                }
            }
            return lit;
        };
        detail::CompiledLiteral head = compile_atom(cl.head, false);
        std::vector<detail::CompiledLiteral> body;
        body.reserve(cl.body.size());
        for (const Literal& l : cl.body)
            body.push_back(compile_atom(l.atom, l.negated));

        std::vector<std::size_t> plan;
        for (std::size_t i = 0; i < body.size(); ++i)
            if (!body[i].negated && body[i].edb)
                plan.push_back(i);

        subst.assign(var_slot.size(), -1);
        auto intern = [&](const detail::CompiledLiteral& lit) {
            atom_args.clear();
            for (const detail::CompiledArg& a : lit.args)
                atom_args.push_back(a.is_var ? subst[a.index] : a.index);
            return b.atom_id(lit.pred, atom_args);
        };

        auto emit = [&]() {
            std::vector<GroundProgram::AtomId> pos, neg;
            for (const detail::CompiledLiteral& lit : body) {
                if (!lit.negated) {
                    if (!lit.edb)
                        pos.push_back(intern(lit));
                    continue;
                }
                if (lit.edb) {
                    // A negated extensional atom is constant across all
                    // stable models: false when it is a fact, true otherwise.
                    atom_args.clear();
                    for (const detail::CompiledArg& a : lit.args)
                        atom_args.push_back(a.is_var ? subst[a.index] : a.index);
                    auto it = relations.find(lit.pred);
                    bool is_fact = it != relations.end() && it->second.contains(atom_args);
                    if (is_fact)
                        return;  // body unsatisfiable, drop the instance
                } else {
                    neg.push_back(intern(lit));
                }
            }
            b.add_clause(intern(head), std::move(pos), std::move(neg));
        };

        auto join = [&](auto&& self, std::size_t k) -> void {
            if (k == plan.size()) {
                emit();
                return;
            }
            const detail::CompiledLiteral& lit = body[plan[k]];
            auto it = relations.find(lit.pred);
            if (it == relations.end())
                return;  // empty extension, no instances
            detail::EdbRelation& rel = it->second;
            uint32_t mask = 0;
            bound_vals.clear();
            bool all_bound = true;
            for (std::size_t i = 0; i < lit.args.size(); ++i) {
                const detail::CompiledArg& a = lit.args[i];
                int32_t val = a.is_var ? subst[a.index] : a.index;
                if (val >= 0) {
                    mask |= 1u << i;
                    bound_vals.push_back(val);
                } else {
                    all_bound = false;
                }
            }
            if (all_bound) {
                if (rel.contains(bound_vals))
                    self(self, k + 1);
                return;
            }
            const std::vector<uint32_t>& rows = rel.candidates(mask, bound_vals);
            std::array<int32_t, 16> trail;
            for (uint32_t r : rows) {
                std::span<const int32_t> tup = rel.row(r);
                bool ok = true;
                int trail_len = 0;
                for (std::size_t i = 0; i < lit.args.size(); ++i) {
                    const detail::CompiledArg& a = lit.args[i];
                    if (!a.is_var) {
                        if (a.index != tup[i]) { ok = false; break; }
                        continue;
                    }
                    int32_t cur = subst[a.index];
                    if (cur < 0) {
                        subst[a.index] = tup[i];
                        trail[trail_len++] = a.index;
                    } else if (cur != tup[i]) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    self(self, k + 1);
                for (int t = 0; t < trail_len; ++t)
                    subst[trail[t]] = -1;
            }
        };
        join(join, 0);
    }
    return b.build();
}

/// Grounds with an automatically inferred extensional split.
inline GroundProgram relational_ground(const Program& p) {
    return relational_ground(p, EdbSplit::infer(p));
}

}  // namespace stablerun
