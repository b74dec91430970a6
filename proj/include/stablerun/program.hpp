#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stablerun/errors.hpp"

namespace stablerun {

/// A term is either an opaque constant (lowercase identifier, numeral, or
/// the blank symbol "B") or a variable (uppercase-initial identifier).
struct Term {
    enum class Kind : uint8_t { Constant, Variable };

    Kind kind = Kind::Constant;
    std::string name;

    static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
    static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }

    bool is_constant() const { return kind == Kind::Constant; }
    bool is_variable() const { return kind == Kind::Variable; }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.name == b.name;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        if (a.kind != b.kind)
            return a.kind < b.kind;
        return a.name < b.name;
    }
};

/// Predicate identity is the (name, arity) pair: state/1 and state/2 are
/// distinct predicates and may coexist in one program.
struct Predicate {
    std::string name;
    int arity = 0;

    friend bool operator==(const Predicate& a, const Predicate& b) {
        return a.arity == b.arity && a.name == b.name;
    }
    friend bool operator!=(const Predicate& a, const Predicate& b) { return !(a == b); }
    friend bool operator<(const Predicate& a, const Predicate& b) {
        if (a.name != b.name)
            return a.name < b.name;
        return a.arity < b.arity;
    }
};

struct Atom {
    std::string pred;
    std::vector<Term> args;

    Atom() = default;
    Atom(std::string p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {}

    int arity() const { return static_cast<int>(args.size()); }
    Predicate predicate() const { return {pred, arity()}; }

    bool ground() const {
        for (const Term& t : args)
            if (t.is_variable())
                return false;
        return true;
    }

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.pred == b.pred && a.args == b.args;
    }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.pred != b.pred)
            return a.pred < b.pred;
        if (a.args.size() != b.args.size())
            return a.args.size() < b.args.size();
        return a.args < b.args;
    }
};

/// Convenience factories for hand-written atoms in tests and builders.
inline Term c(std::string name) { return Term::constant(std::move(name)); }
inline Term v(std::string name) { return Term::variable(std::move(name)); }

struct Literal {
    Atom atom;
    bool negated = false;

    friend bool operator==(const Literal& a, const Literal& b) {
        return a.negated == b.negated && a.atom == b.atom;
    }
    friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
    friend bool operator<(const Literal& a, const Literal& b) {
        if (a.negated != b.negated)
            return a.negated < b.negated;
        return a.atom < b.atom;
    }
};

/// head :- body. Body literals keep their source order; a fact has an empty
/// body.
struct Clause {
    Atom head;
    std::vector<Literal> body;

    Clause() = default;
    explicit Clause(Atom h) : head(std::move(h)) {}
    Clause(Atom h, std::vector<Literal> b) : head(std::move(h)), body(std::move(b)) {}

    bool is_fact() const { return body.empty(); }

    bool ground() const {
        if (!head.ground())
            return false;
        for (const Literal& l : body)
            if (!l.atom.ground())
                return false;
        return true;
    }

    std::vector<Atom> pos_body() const {
        std::vector<Atom> out;
        for (const Literal& l : body)
            if (!l.negated)
                out.push_back(l.atom);
        return out;
    }

    std::vector<Atom> neg_body() const {
        std::vector<Atom> out;
        for (const Literal& l : body)
            if (l.negated)
                out.push_back(l.atom);
        return out;
    }

    /// All variable names occurring anywhere in the clause.
    std::set<std::string> variables() const {
        std::set<std::string> out;
        auto scan = [&](const Atom& a) {
            for (const Term& t : a.args)
                if (t.is_variable())
                    out.insert(t.name);
        };
        scan(head);
        for (const Literal& l : body)
            scan(l.atom);
        return out;
    }

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.head == b.head && a.body == b.body;
    }
    friend bool operator!=(const Clause& a, const Clause& b) { return !(a == b); }
    friend bool operator<(const Clause& a, const Clause& b) {
        if (!(a.head == b.head))
            return a.head < b.head;
        return a.body < b.body;
    }
};

/// A finite set of clauses. Duplicate clauses collapse silently; the first
/// occurrence fixes the position of a clause in the stored order, which all
/// downstream iteration (grounding, printing) follows.
class Program {
public:
    Program() = default;

    explicit Program(std::vector<Clause> clauses,
                     std::set<Predicate> forced_intensional = {})
        : forced_intensional_(std::move(forced_intensional)) {
        std::set<Clause> seen;
        for (Clause& cl : clauses)
            if (seen.insert(cl).second)
                clauses_.push_back(std::move(cl));
        index_symbols();
    }

    const std::vector<Clause>& clauses() const { return clauses_; }
    std::size_t size() const { return clauses_.size(); }

    /// Constants in order of first occurrence; this is the Herbrand universe.
    const std::vector<std::string>& constants() const { return constants_; }
    const std::vector<std::string>& herbrand_universe() const { return constants_; }

    /// Predicates in order of first occurrence.
    const std::vector<Predicate>& predicates() const { return predicates_; }

    /// Predicates forced intensional by a #intensional directive.
    const std::set<Predicate>& forced_intensional() const { return forced_intensional_; }

    /// Number of ground atoms over the program's predicates and constants.
    /// Saturates at UINT64_MAX.
    uint64_t herbrand_base_size() const {
        uint64_t total = 0;
        for (const Predicate& p : predicates_) {
            uint64_t count = 1;
            for (int i = 0; i < p.arity; ++i) {
                if (constants_.empty())
                    return total;  // no ground atom for positive arity
                if (count > UINT64_MAX / constants_.size())
                    return UINT64_MAX;
                count *= constants_.size();
            }
            if (total > UINT64_MAX - count)
                return UINT64_MAX;
            total += count;
        }
        return total;
    }

    /// Materializes the Herbrand base. Throws BaseTooLargeError beyond cap.
    std::vector<Atom> herbrand_base(std::size_t cap = 1u << 20) const {
        if (herbrand_base_size() > cap)
            throw BaseTooLargeError("Herbrand base exceeds " + std::to_string(cap) + " atoms");
        std::vector<Atom> out;
        for (const Predicate& p : predicates_) {
            if (p.arity == 0) {
                out.push_back(Atom{p.name, {}});
                continue;
            }
            if (constants_.empty())
                continue;
            std::vector<std::size_t> odo(p.arity, 0);
            while (true) {
                std::vector<Term> args;
                args.reserve(p.arity);
                for (std::size_t i : odo)
                    args.push_back(Term::constant(constants_[i]));
                out.push_back(Atom{p.name, std::move(args)});
                int pos = p.arity - 1;
                while (pos >= 0 && ++odo[pos] == constants_.size())
                    odo[pos--] = 0;
                if (pos < 0)
                    break;
            }
        }
        return out;
    }

    /// Union of two programs (set semantics).
    friend Program operator+(const Program& a, const Program& b) {
        std::vector<Clause> all = a.clauses_;
        all.insert(all.end(), b.clauses_.begin(), b.clauses_.end());
        std::set<Predicate> forced = a.forced_intensional_;
        forced.insert(b.forced_intensional_.begin(), b.forced_intensional_.end());
        return Program(std::move(all), std::move(forced));
    }

private:
    void index_symbols() {
        std::set<std::string> const_seen;
        std::set<Predicate> pred_seen;
        auto scan = [&](const Atom& a) {
            if (pred_seen.insert(a.predicate()).second)
                predicates_.push_back(a.predicate());
            for (const Term& t : a.args)
                if (t.is_constant() && const_seen.insert(t.name).second)
                    constants_.push_back(t.name);
        };
        for (const Clause& cl : clauses_) {
            scan(cl.head);
            for (const Literal& l : cl.body)
                scan(l.atom);
        }
    }

    std::vector<Clause> clauses_;
    std::vector<std::string> constants_;
    std::vector<Predicate> predicates_;
    std::set<Predicate> forced_intensional_;
};

/// A finite set of ground atoms, kept sorted and duplicate-free.
class Interpretation {
public:
    Interpretation() = default;

    explicit Interpretation(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        for (const Atom& a : atoms_)
            if (!a.ground())
                throw Error("interpretation contains a non-ground atom");
        std::sort(atoms_.begin(), atoms_.end());
        atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
    }

    Interpretation(std::initializer_list<Atom> atoms)
        : Interpretation(std::vector<Atom>(atoms)) {}

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    bool contains(const Atom& a) const {
        return std::binary_search(atoms_.begin(), atoms_.end(), a);
    }

    bool subset_of(const Interpretation& other) const {
        return std::includes(other.atoms_.begin(), other.atoms_.end(),
                             atoms_.begin(), atoms_.end());
    }

    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }

    friend bool operator==(const Interpretation& a, const Interpretation& b) {
        return a.atoms_ == b.atoms_;
    }
    friend bool operator!=(const Interpretation& a, const Interpretation& b) {
        return !(a == b);
    }
    friend bool operator<(const Interpretation& a, const Interpretation& b) {
        return a.atoms_ < b.atoms_;
    }

private:
    std::vector<Atom> atoms_;
};

}  // namespace stablerun
