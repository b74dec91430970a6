#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stablerun/ground.hpp"
#include "stablerun/semantics.hpp"

namespace stablerun {

struct SolveLimits {
    std::optional<uint64_t> max_models;
    std::optional<uint64_t> max_decisions;
};

/// Result of a model enumeration. `complete` is true iff the search space
/// was exhausted; a truncated enumeration still contains only genuine models.
struct ModelSet {
    std::vector<Interpretation> models;
    bool complete = true;

    bool contains(const Interpretation& m) const {
        for (const Interpretation& x : models)
            if (x == m)
                return true;
        return false;
    }

    /// Set equality, ignoring enumeration order.
    friend bool operator==(const ModelSet& a, const ModelSet& b) {
        if (a.complete != b.complete || a.models.size() != b.models.size())
            return false;
        std::vector<Interpretation> x = a.models, y = b.models;
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        return x == y;
    }
};

namespace detail {

/// Backtracking enumeration of stable models.
///
/// The decision variables are the atoms occurring in some negative body: the
/// reduct of the program depends only on the membership of those atoms, so a
/// total assignment nu determines one candidate, the least model of the
/// corresponding reduct, which is stable iff it agrees with nu on the
/// decision atoms. The search maintains two closures under the current
/// partial assignment:
///   L - atoms derivable through clauses whose negative bodies are decided
///       entirely false (guaranteed in every completion),
///   U - atoms derivable through clauses with no negative literal decided
///       true (the union of all possible completions).
/// Any candidate of any completion lies between L and U, which justifies the
/// forcing rules, the conflict rules and the acceptance test L == U.
class StableEnumerator {
public:
    explicit StableEnumerator(const GroundProgram& gp) : gp_(gp) {
        std::size_t n = gp.num_atoms();
        std::size_t m = gp.num_clauses();
        base_need_.resize(m);
        occ_start_.assign(n + 1, 0);
        n_index_.assign(n, -1);
        for (std::size_t i = 0; i < m; ++i) {
            auto cv = gp.clause(i);
            base_need_[i] = static_cast<uint32_t>(cv.pos.size());
            for (auto a : cv.pos)
                ++occ_start_[a + 1];
            if (!cv.neg.empty()) {
                for (auto a : cv.neg)
                    if (n_index_[a] < 0) {
                        n_index_[a] = static_cast<int32_t>(n_atoms_.size());
                        n_atoms_.push_back(a);
                    }
                for (auto a : cv.neg)
                    if (a == cv.head) {
                        self_neg_.push_back(static_cast<uint32_t>(i));
                        break;
                    }
            }
        }
        // Heads that occur only in clauses of the shape a :- body, not a can
        // never belong to a stable model; such clauses act as constraints.
        other_support_.assign(n, 0);
        for (std::size_t i = 0; i < m; ++i) {
            auto cv = gp.clause(i);
            bool self = false;
            for (auto a : cv.neg)
                if (a == cv.head) {
                    self = true;
                    break;
                }
            if (!self)
                other_support_[cv.head] = 1;
        }
        for (std::size_t i = 0; i < n; ++i)
            occ_start_[i + 1] += occ_start_[i];
        occ_.resize(occ_start_.back());
        std::vector<uint32_t> fill(occ_start_.begin(), occ_start_.end() - 1);
        for (std::size_t i = 0; i < m; ++i)
            for (auto a : gp.clause(i).pos)
                occ_[fill[a]++] = static_cast<uint32_t>(i);
        need_.resize(m);
        in_l_.resize(n);
        in_u_.resize(n);
    }

    ModelSet enumerate(const SolveLimits& limits) {
        limits_ = limits;
        out_ = ModelSet{};
        decisions_ = 0;
        stopped_ = false;
        std::vector<int8_t> assign(n_atoms_.size(), kUnknown);
        search(assign);
        out_.complete = !stopped_;
        return out_;
    }

private:
    static constexpr int8_t kUnknown = 0;
    static constexpr int8_t kFalse = 1;
    static constexpr int8_t kTrue = 2;

    // Closure over clauses admitted by `alive`; returns derived-atom count.
    template <typename AlivePred>
    std::size_t closure(std::vector<char>& in, AlivePred&& alive) {
        std::fill(in.begin(), in.end(), 0);
        need_ = base_need_;
        queue_.clear();
        std::size_t count = 0;
        auto derive = [&](GroundProgram::AtomId a) {
            if (!in[a]) {
                in[a] = 1;
                ++count;
                queue_.push_back(a);
            }
        };
        for (std::size_t i = 0; i < gp_.num_clauses(); ++i)
            if (base_need_[i] == 0 && alive(i))
                derive(gp_.clause(i).head);
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            GroundProgram::AtomId a = queue_[qi];
            for (uint32_t k = occ_start_[a]; k < occ_start_[a + 1]; ++k) {
                uint32_t ci = occ_[k];
                if (--need_[ci] == 0 && alive(ci))
                    derive(gp_.clause(ci).head);
            }
        }
        return count;
    }

    bool l_alive(std::size_t ci, const std::vector<int8_t>& assign) const {
        for (auto a : gp_.clause(ci).neg)
            if (assign[n_index_[a]] != kFalse)
                return false;
        return true;
    }

    bool u_alive(std::size_t ci, const std::vector<int8_t>& assign) const {
        for (auto a : gp_.clause(ci).neg)
            if (assign[n_index_[a]] == kTrue)
                return false;
        return true;
    }

    struct PropagationResult {
        bool conflict = false;
        std::size_t l_size = 0;
        std::size_t u_size = 0;
        int32_t frontier = -1;  // N-slot to branch on when L != U
    };

    PropagationResult propagate(std::vector<int8_t>& assign) {
        PropagationResult res;
        while (true) {
            res.l_size = closure(in_l_, [&](std::size_t ci) { return l_alive(ci, assign); });
            for (std::size_t s = 0; s < n_atoms_.size(); ++s)
                if (assign[s] == kFalse && in_l_[n_atoms_[s]]) {
                    res.conflict = true;  // a guaranteed atom was decided absent
                    return res;
                }
            // Constraint pattern a :- body, not a where a has no other kind
            // of defining clause: a cannot belong to any stable model, so
            // once the rest of the body is guaranteed the clause fires in
            // every completion and none of them is stable.
            for (uint32_t ci : self_neg_) {
                auto cv = gp_.clause(ci);
                if (other_support_[cv.head])
                    continue;
                bool pos_ok = true;
                for (auto a : cv.pos)
                    if (!in_l_[a]) {
                        pos_ok = false;
                        break;
                    }
                if (!pos_ok)
                    continue;
                bool others_false = true;
                for (auto a : cv.neg)
                    if (a != cv.head && assign[n_index_[a]] != kFalse) {
                        others_false = false;
                        break;
                    }
                if (others_false) {
                    res.conflict = true;
                    return res;
                }
            }
            res.frontier = -1;
            res.u_size = u_closure(assign, res.frontier);
            for (std::size_t s = 0; s < n_atoms_.size(); ++s)
                if (assign[s] == kTrue && !in_u_[n_atoms_[s]]) {
                    res.conflict = true;  // a decided-present atom became underivable
                    return res;
                }
            bool changed = false;
            for (std::size_t s = 0; s < n_atoms_.size(); ++s) {
                if (assign[s] != kUnknown)
                    continue;
                if (in_l_[n_atoms_[s]]) {
                    assign[s] = kTrue;
                    changed = true;
                } else if (!in_u_[n_atoms_[s]]) {
                    assign[s] = kFalse;
                    changed = true;
                }
            }
            if (!changed)
                return res;
        }
    }

    // U-closure that also records the first fired clause which is grounded
    // in L but not L-alive; its first undecided negative literal is the
    // branching atom. Such a clause exists whenever L != U.
    std::size_t u_closure(const std::vector<int8_t>& assign, int32_t& frontier) {
        std::fill(in_u_.begin(), in_u_.end(), 0);
        need_ = base_need_;
        queue_.clear();
        std::size_t count = 0;
        auto fire = [&](std::size_t ci) {
            auto cv = gp_.clause(ci);
            if (frontier < 0 && !in_l_[cv.head]) {
                bool grounded = true;
                for (auto a : cv.pos)
                    if (!in_l_[a]) {
                        grounded = false;
                        break;
                    }
                if (grounded)
                    for (auto a : cv.neg)
                        if (assign[n_index_[a]] == kUnknown) {
                            frontier = n_index_[a];
                            break;
                        }
            }
            if (!in_u_[cv.head]) {
                in_u_[cv.head] = 1;
                ++count;
                queue_.push_back(cv.head);
            }
        };
        for (std::size_t i = 0; i < gp_.num_clauses(); ++i)
            if (base_need_[i] == 0 && u_alive(i, assign))
                fire(i);
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            GroundProgram::AtomId a = queue_[qi];
            for (uint32_t k = occ_start_[a]; k < occ_start_[a + 1]; ++k) {
                uint32_t ci = occ_[k];
                if (--need_[ci] == 0 && u_alive(ci, assign))
                    fire(ci);
            }
        }
        return count;
    }

    void emit_current_l() {
        std::vector<GroundProgram::AtomId> ids;
        for (std::size_t a = 0; a < in_l_.size(); ++a)
            if (in_l_[a])
                ids.push_back(static_cast<GroundProgram::AtomId>(a));
        out_.models.push_back(gp_.interpretation_of(ids));
        if (limits_.max_models && out_.models.size() >= *limits_.max_models)
            stopped_ = true;
    }

    void search(std::vector<int8_t>& assign) {
        if (stopped_)
            return;
        PropagationResult res = propagate(assign);
        if (res.conflict)
            return;
        if (res.l_size == res.u_size) {
            // Every completion of this assignment induces the same candidate,
            // namely L itself, and L is stable by construction.
            emit_current_l();
            return;
        }
        if (res.frontier < 0)
            throw Error("internal: no branching literal although L != U");
        if (limits_.max_decisions && decisions_ >= *limits_.max_decisions) {
            stopped_ = true;
            return;
        }
        ++decisions_;
        int32_t slot = res.frontier;
        std::vector<int8_t> saved = assign;
        assign[slot] = kFalse;  // explore "atom absent" first
        search(assign);
        if (stopped_)
            return;
        assign = saved;
        assign[slot] = kTrue;
        search(assign);
        if (!stopped_)
            assign = std::move(saved);
    }

    const GroundProgram& gp_;
    std::vector<uint32_t> base_need_;
    std::vector<uint32_t> occ_start_;
    std::vector<uint32_t> occ_;
    std::vector<int32_t> n_index_;
    std::vector<GroundProgram::AtomId> n_atoms_;
    std::vector<uint32_t> self_neg_;
    std::vector<char> other_support_;

    std::vector<uint32_t> need_;
    std::vector<char> in_l_, in_u_;
    std::vector<GroundProgram::AtomId> queue_;

    SolveLimits limits_;
    ModelSet out_;
    uint64_t decisions_ = 0;
    bool stopped_ = false;
};

}  // namespace detail

/// Enumerates the stable models of a ground program. With default limits the
/// enumeration is exhaustive; every returned interpretation is stable and no
/// duplicates are produced. The enumeration order is fixed by the program's
/// clause order (branching always picks the first undecided negative literal
/// of the first pending clause, absent before present).
inline ModelSet enumerate_stable_models(const GroundProgram& gp, SolveLimits limits = {}) {
    detail::StableEnumerator e(gp);
    return e.enumerate(limits);
}

/// Exhaustive supported-model enumeration by testing every subset of the
/// Herbrand base for T_P(m) = m. Guarded: the base may not exceed 22 atoms.
inline ModelSet enumerate_supported_models_bruteforce(const GroundProgram& gp) {
    uint64_t base_size = gp.herbrand_base_size();
    if (base_size > 22)
        throw BaseTooLargeError("Herbrand base has " + std::to_string(base_size) +
                                " atoms, brute force is capped at 22");
    // Atoms that occur in no clause are never derived by T_P, so a fixed
    // point cannot contain them; enumerating subsets of the occurring atoms
    // is exhaustive over the full base.
    std::size_t n = gp.num_atoms();
    if (n > 22)
        throw BaseTooLargeError("internal: occurring atoms exceed base bound");
    struct MaskClause {
        uint32_t pos, neg, head;
    };
    std::vector<MaskClause> clauses;
    clauses.reserve(gp.num_clauses());
    for (std::size_t i = 0; i < gp.num_clauses(); ++i) {
        auto cv = gp.clause(i);
        MaskClause mc{0, 0, 1u << cv.head};
        for (auto a : cv.pos)
            mc.pos |= 1u << a;
        for (auto a : cv.neg)
            mc.neg |= 1u << a;
        clauses.push_back(mc);
    }
    ModelSet out;
    for (uint32_t m = 0; m < (1u << n); ++m) {
        uint32_t tp = 0;
        for (const MaskClause& mc : clauses)
            if ((mc.pos & m) == mc.pos && (mc.neg & m) == 0)
                tp |= mc.head;
        if (tp == m) {
            std::vector<GroundProgram::AtomId> ids;
            for (std::size_t a = 0; a < n; ++a)
                if (m & (1u << a))
                    ids.push_back(static_cast<GroundProgram::AtomId>(a));
            out.models.push_back(gp.interpretation_of(ids));
        }
    }
    out.complete = true;
    return out;
}

/// True iff no model in the set is a proper subset of another.
inline bool is_antichain(const ModelSet& ms) {
    for (std::size_t i = 0; i < ms.models.size(); ++i)
        for (std::size_t j = 0; j < ms.models.size(); ++j) {
            if (i == j)
                continue;
            if (ms.models[i].subset_of(ms.models[j]) && ms.models[i] != ms.models[j])
                return false;
        }
    return true;
}

}  // namespace stablerun
