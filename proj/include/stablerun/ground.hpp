#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablerun/program.hpp"

namespace stablerun {

namespace detail {

inline uint64_t hash_mix(uint64_t h, uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

/// Open-addressing table mapping hashed keys to int32 payloads. Entries are
/// never removed. The caller resolves collisions by comparing actual content.
class HashIndex {
public:
    explicit HashIndex(std::size_t expected = 16) { rehash(round_up(expected * 2)); }

    template <typename Equal>
    int32_t find(uint64_t hash, Equal&& equal) const {
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash & mask;
        while (slots_[i] != kEmpty) {
            if (hashes_[i] == hash && equal(slots_[i]))
                return slots_[i];
            i = (i + 1) & mask;
        }
        return kEmpty;
    }

    void insert(uint64_t hash, int32_t value) {
        if ((count_ + 1) * 3 > slots_.size() * 2)
            grow();
        std::size_t mask = slots_.size() - 1;
        std::size_t i = hash & mask;
        while (slots_[i] != kEmpty)
            i = (i + 1) & mask;
        slots_[i] = value;
        hashes_[i] = hash;
        ++count_;
    }

    static constexpr int32_t kEmpty = -1;

private:
    static std::size_t round_up(std::size_t n) {
        std::size_t p = 16;
        while (p < n)
            p <<= 1;
        return p;
    }

    void rehash(std::size_t cap) {
        slots_.assign(cap, kEmpty);
        hashes_.assign(cap, 0);
    }

    void grow() {
        std::vector<int32_t> old_slots = std::move(slots_);
        std::vector<uint64_t> old_hashes = std::move(hashes_);
        rehash(old_slots.size() * 2);
        count_ = 0;
        for (std::size_t i = 0; i < old_slots.size(); ++i)
            if (old_slots[i] != kEmpty)
                insert(old_hashes[i], old_slots[i]);
    }

    std::vector<int32_t> slots_;
    std::vector<uint64_t> hashes_;
    std::size_t count_ = 0;
};

}  // namespace detail

/// A variable-free program over densely numbered atoms. Atom ids index into
/// a symbol table shared with the grounder, so models decode back to the
/// symbolic level. Clause bodies are stored deduplicated (set semantics).
class GroundProgram {
public:
    using AtomId = int32_t;

    struct ClauseView {
        AtomId head;
        std::span<const AtomId> pos;
        std::span<const AtomId> neg;
    };

    class Builder;

    std::size_t num_clauses() const { return clauses_.size(); }
    std::size_t num_atoms() const { return atom_pred_.size(); }

    ClauseView clause(std::size_t i) const {
        const ClauseRec& c = clauses_[i];
        return {c.head,
                {lits_.data() + c.pos_off, static_cast<std::size_t>(c.pos_len)},
                {lits_.data() + c.pos_off + c.pos_len, static_cast<std::size_t>(c.neg_len)}};
    }

    const std::string& constant_name(int32_t id) const { return consts_[id]; }
    const Predicate& predicate(int32_t id) const { return preds_[id]; }
    std::size_t num_constants() const { return consts_.size(); }
    std::size_t num_predicates() const { return preds_.size(); }

    int32_t atom_pred(AtomId id) const { return atom_pred_[id]; }
    std::span<const int32_t> atom_args(AtomId id) const {
        return {atom_args_.data() + atom_arg_off_[id],
                static_cast<std::size_t>(preds_[atom_pred_[id]].arity)};
    }

    Atom atom(AtomId id) const {
        const Predicate& p = preds_[atom_pred_[id]];
        std::vector<Term> args;
        args.reserve(p.arity);
        for (int32_t cid : atom_args(id))
            args.push_back(Term::constant(consts_[cid]));
        return Atom{p.name, std::move(args)};
    }

    std::optional<AtomId> find_atom(const Atom& a) const {
        auto pit = pred_ids_.find(a.predicate());
        if (pit == pred_ids_.end())
            return std::nullopt;
        std::vector<int32_t> args;
        args.reserve(a.args.size());
        for (const Term& t : a.args) {
            if (!t.is_constant())
                return std::nullopt;
            auto cit = const_ids_.find(t.name);
            if (cit == const_ids_.end())
                return std::nullopt;
            args.push_back(cit->second);
        }
        uint64_t h = atom_hash(pit->second, args);
        int32_t id = atom_index_.find(h, [&](int32_t cand) {
            return atom_equals(cand, pit->second, args);
        });
        if (id == detail::HashIndex::kEmpty)
            return std::nullopt;
        return id;
    }

    /// True if the exact ground clause (same head, same body sets) is present.
    bool contains_clause(AtomId head, std::vector<AtomId> pos, std::vector<AtomId> neg) const {
        normalize_body(pos);
        normalize_body(neg);
        uint64_t h = clause_hash(head, pos, neg);
        int32_t idx = clause_index_.find(h, [&](int32_t cand) {
            return clause_equals(cand, head, pos, neg);
        });
        return idx != detail::HashIndex::kEmpty;
    }

    Interpretation interpretation_of(const std::vector<AtomId>& ids) const {
        std::vector<Atom> atoms;
        atoms.reserve(ids.size());
        for (AtomId id : ids)
            atoms.push_back(atom(id));
        return Interpretation(std::move(atoms));
    }

    /// Maps a symbolic interpretation to atom ids. Atoms that do not occur in
    /// the program are reported through `unknown` and skipped.
    std::vector<AtomId> ids_of(const Interpretation& m, std::size_t* unknown = nullptr) const {
        std::vector<AtomId> out;
        std::size_t missing = 0;
        for (const Atom& a : m) {
            if (auto id = find_atom(a))
                out.push_back(*id);
            else
                ++missing;
        }
        if (unknown)
            *unknown = missing;
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Ground atoms over the program's predicates and constants (untyped
    /// Herbrand base), not just the atoms that occur in clauses.
    uint64_t herbrand_base_size() const {
        uint64_t total = 0;
        for (const Predicate& p : preds_) {
            uint64_t count = 1;
            for (int i = 0; i < p.arity; ++i) {
                if (consts_.empty())
                    return total;
                if (count > UINT64_MAX / consts_.size())
                    return UINT64_MAX;
                count *= consts_.size();
            }
            if (total > UINT64_MAX - count)
                return UINT64_MAX;
            total += count;
        }
        return total;
    }

    std::vector<Atom> herbrand_base(std::size_t cap = 1u << 20) const {
        if (herbrand_base_size() > cap)
            throw BaseTooLargeError("Herbrand base exceeds " + std::to_string(cap) + " atoms");
        std::vector<Atom> out;
        for (const Predicate& p : preds_) {
            if (p.arity == 0) {
                out.push_back(Atom{p.name, {}});
                continue;
            }
            if (consts_.empty())
                continue;
            std::vector<std::size_t> odo(p.arity, 0);
            while (true) {
                std::vector<Term> args;
                args.reserve(p.arity);
                for (std::size_t i : odo)
                    args.push_back(Term::constant(consts_[i]));
                out.push_back(Atom{p.name, std::move(args)});
                int pos = p.arity - 1;
                while (pos >= 0 && ++odo[pos] == consts_.size())
                    odo[pos--] = 0;
                if (pos < 0)
                    break;
            }
        }
        return out;
    }

    /// Converts back to a symbolic program (used for printing and tests).
    std::vector<Clause> to_clauses() const {
        std::vector<Clause> out;
        out.reserve(clauses_.size());
        for (std::size_t i = 0; i < clauses_.size(); ++i) {
            ClauseView cv = clause(i);
            Clause cl(atom(cv.head));
            for (AtomId a : cv.pos)
                cl.body.push_back(Literal{atom(a), false});
            for (AtomId a : cv.neg)
                cl.body.push_back(Literal{atom(a), true});
            out.push_back(std::move(cl));
        }
        return out;
    }

private:
    struct ClauseRec {
        AtomId head;
        uint32_t pos_off;
        uint16_t pos_len;
        uint16_t neg_len;
    };

    static void normalize_body(std::vector<AtomId>& b) {
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
    }

    uint64_t atom_hash(int32_t pred, std::span<const int32_t> args) const {
        uint64_t h = detail::hash_mix(0x51ed2701u, static_cast<uint64_t>(pred));
        for (int32_t a : args)
            h = detail::hash_mix(h, static_cast<uint64_t>(a));
        return h;
    }

    bool atom_equals(AtomId id, int32_t pred, std::span<const int32_t> args) const {
        if (atom_pred_[id] != pred)
            return false;
        std::span<const int32_t> mine = atom_args(id);
        return std::equal(mine.begin(), mine.end(), args.begin(), args.end());
    }

    uint64_t clause_hash(AtomId head, std::span<const AtomId> pos,
                         std::span<const AtomId> neg) const {
        uint64_t h = detail::hash_mix(0xc1a0737fu, static_cast<uint64_t>(head));
        h = detail::hash_mix(h, pos.size());
        for (AtomId a : pos)
            h = detail::hash_mix(h, static_cast<uint64_t>(a));
        h = detail::hash_mix(h, 0xfeedu);
        for (AtomId a : neg)
            h = detail::hash_mix(h, static_cast<uint64_t>(a));
        return h;
    }

    bool clause_equals(std::size_t idx, AtomId head, std::span<const AtomId> pos,
                       std::span<const AtomId> neg) const {
        ClauseView cv = clause(idx);
        return cv.head == head &&
               std::equal(cv.pos.begin(), cv.pos.end(), pos.begin(), pos.end()) &&
               std::equal(cv.neg.begin(), cv.neg.end(), neg.begin(), neg.end());
    }

    std::vector<Predicate> preds_;
    std::map<Predicate, int32_t> pred_ids_;
    std::vector<std::string> consts_;
    std::map<std::string, int32_t> const_ids_;

    std::vector<int32_t> atom_pred_;
    std::vector<uint32_t> atom_arg_off_;
    std::vector<int32_t> atom_args_;
    detail::HashIndex atom_index_;

    std::vector<ClauseRec> clauses_;
    std::vector<AtomId> lits_;
    detail::HashIndex clause_index_;

    friend class Builder;
};

/// Incrementally interns predicates, constants, atoms and clauses.
class GroundProgram::Builder {
public:
    Builder() = default;

    /// Seeds the symbol tables from an existing program so that atom ids in
    /// the new program are compatible where contents overlap.
    explicit Builder(const GroundProgram& proto) {
        gp_.preds_ = proto.preds_;
        gp_.pred_ids_ = proto.pred_ids_;
        gp_.consts_ = proto.consts_;
        gp_.const_ids_ = proto.const_ids_;
        gp_.atom_pred_ = proto.atom_pred_;
        gp_.atom_arg_off_ = proto.atom_arg_off_;
        gp_.atom_args_ = proto.atom_args_;
        gp_.atom_index_ = proto.atom_index_;
    }

    int32_t pred_id(const Predicate& p) {
        auto it = gp_.pred_ids_.find(p);
        if (it != gp_.pred_ids_.end())
            return it->second;
        int32_t id = static_cast<int32_t>(gp_.preds_.size());
        gp_.preds_.push_back(p);
        gp_.pred_ids_.emplace(p, id);
        return id;
    }

    int32_t const_id(const std::string& name) {
        auto it = gp_.const_ids_.find(name);
        if (it != gp_.const_ids_.end())
            return it->second;
        int32_t id = static_cast<int32_t>(gp_.consts_.size());
        gp_.consts_.push_back(name);
        gp_.const_ids_.emplace(name, id);
        return id;
    }

    AtomId atom_id(int32_t pred, std::span<const int32_t> args) {
        uint64_t h = gp_.atom_hash(pred, args);
        int32_t found = gp_.atom_index_.find(
            h, [&](int32_t cand) { return gp_.atom_equals(cand, pred, args); });
        if (found != detail::HashIndex::kEmpty)
            return found;
        AtomId id = static_cast<AtomId>(gp_.atom_pred_.size());
        gp_.atom_pred_.push_back(pred);
        gp_.atom_arg_off_.push_back(static_cast<uint32_t>(gp_.atom_args_.size()));
        gp_.atom_args_.insert(gp_.atom_args_.end(), args.begin(), args.end());
        gp_.atom_index_.insert(h, id);
        return id;
    }

    AtomId atom_id(const Atom& a) {
        int32_t pid = pred_id(a.predicate());
        std::vector<int32_t> args;
        args.reserve(a.args.size());
        for (const Term& t : a.args) {
            if (!t.is_constant())
                throw Error("cannot intern non-ground atom");
            args.push_back(const_id(t.name));
        }
        return atom_id(pid, args);
    }

    /// Adds a clause; bodies are treated as sets and exact duplicate clauses
    /// are dropped. Returns true if the clause was new.
    bool add_clause(AtomId head, std::vector<AtomId> pos, std::vector<AtomId> neg) {
        normalize_body(pos);
        normalize_body(neg);
        uint64_t h = gp_.clause_hash(head, pos, neg);
        int32_t found = gp_.clause_index_.find(
            h, [&](int32_t cand) { return gp_.clause_equals(cand, head, pos, neg); });
        if (found != detail::HashIndex::kEmpty)
            return false;
        ClauseRec rec;
        rec.head = head;
        rec.pos_off = static_cast<uint32_t>(gp_.lits_.size());
        rec.pos_len = static_cast<uint16_t>(pos.size());
        rec.neg_len = static_cast<uint16_t>(neg.size());
        gp_.lits_.insert(gp_.lits_.end(), pos.begin(), pos.end());
        gp_.lits_.insert(gp_.lits_.end(), neg.begin(), neg.end());
        gp_.clause_index_.insert(h, static_cast<int32_t>(gp_.clauses_.size()));
        gp_.clauses_.push_back(rec);
        return true;
    }

    bool add_clause(const Clause& cl) {
        AtomId head = atom_id(cl.head);
        std::vector<AtomId> pos, neg;
        for (const Literal& l : cl.body)
            (l.negated ? neg : pos).push_back(atom_id(l.atom));
        return add_clause(head, std::move(pos), std::move(neg));
    }

    GroundProgram build() { return std::move(gp_); }

private:
    GroundProgram gp_;
};

/// Instantiates one clause under an explicit substitution. Every variable of
/// the clause must be bound.
inline Clause ground_instance(const Clause& cl,
                              const std::map<std::string, std::string>& subst) {
    auto apply = [&](const Atom& a) {
        Atom out;
        out.pred = a.pred;
        out.args.reserve(a.args.size());
        for (const Term& t : a.args) {
            if (t.is_constant()) {
                out.args.push_back(t);
            } else {
                auto it = subst.find(t.name);
                if (it == subst.end())
                    throw UnboundVariableError("no binding for variable " + t.name);
                out.args.push_back(Term::constant(it->second));
            }
        }
        return out;
    };
    Clause out(apply(cl.head));
    out.body.reserve(cl.body.size());
    for (const Literal& l : cl.body)
        out.body.push_back(Literal{apply(l.atom), l.negated});
    return out;
}

/// Naive grounding: every clause is instantiated with every substitution of
/// program constants for its variables. The instance count of a clause with
/// k variables is |constants|^k, so this is only usable at small scale; the
/// relational grounder covers domain-restricted programs efficiently.
inline GroundProgram ground_program(const Program& p) {
    GroundProgram::Builder b;
    const std::vector<std::string>& consts = p.constants();
    for (const Clause& cl : p.clauses()) {
        std::set<std::string> varset = cl.variables();
        std::vector<std::string> vars(varset.begin(), varset.end());
        if (vars.empty()) {
            b.add_clause(cl);
            continue;
        }
        if (consts.empty())
            continue;  // no ground instance exists
        std::map<std::string, std::string> subst;
        std::vector<std::size_t> odo(vars.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < vars.size(); ++i)
                subst[vars[i]] = consts[odo[i]];
            b.add_clause(ground_instance(cl, subst));
            int pos = static_cast<int>(vars.size()) - 1;
            while (pos >= 0 && ++odo[pos] == consts.size())
                odo[pos--] = 0;
            if (pos < 0)
                break;
        }
    }
    return b.build();
}

}  // namespace stablerun
