#pragma once

#include <vector>

#include "stablerun/ground.hpp"

namespace stablerun {

namespace detail {

/// Queue-based least-model computation restricted to clauses for which
/// `alive(i)` holds; negative bodies of alive clauses are ignored (they are
/// assumed eliminated, as in a reduct). Linear in program size.
template <typename AlivePred>
std::vector<char> least_model_mask(const GroundProgram& gp, AlivePred&& alive) {
    std::size_t n = gp.num_atoms();
    std::vector<char> in(n, 0);
    // Count of still-unsatisfied positive body atoms per clause.
    std::vector<uint32_t> need(gp.num_clauses());
    // Occurrence lists are rebuilt per call; callers on hot paths use the
    // indexed solver machinery instead.
    std::vector<uint32_t> occ_start(n + 1, 0);
    for (std::size_t i = 0; i < gp.num_clauses(); ++i)
        for (auto a : gp.clause(i).pos)
            ++occ_start[a + 1];
    for (std::size_t i = 0; i < n; ++i)
        occ_start[i + 1] += occ_start[i];
    std::vector<uint32_t> occ(occ_start.back());
    {
        std::vector<uint32_t> fill(occ_start.begin(), occ_start.end() - 1);
        for (std::size_t i = 0; i < gp.num_clauses(); ++i)
            for (auto a : gp.clause(i).pos)
                occ[fill[a]++] = static_cast<uint32_t>(i);
    }
    std::vector<GroundProgram::AtomId> queue;
    auto derive = [&](GroundProgram::AtomId a) {
        if (!in[a]) {
            in[a] = 1;
            queue.push_back(a);
        }
    };
    for (std::size_t i = 0; i < gp.num_clauses(); ++i) {
        auto cv = gp.clause(i);
        need[i] = static_cast<uint32_t>(cv.pos.size());
        if (need[i] == 0 && alive(i))
            derive(cv.head);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        GroundProgram::AtomId a = queue[qi];
        for (uint32_t k = occ_start[a]; k < occ_start[a + 1]; ++k) {
            uint32_t ci = occ[k];
            if (--need[ci] == 0 && alive(ci))
                derive(gp.clause(ci).head);
        }
    }
    return in;
}

inline std::vector<char> member_mask(const GroundProgram& gp,
                                     const std::vector<GroundProgram::AtomId>& ids) {
    std::vector<char> in(gp.num_atoms(), 0);
    for (auto id : ids)
        in[id] = 1;
    return in;
}

inline Interpretation mask_to_interpretation(const GroundProgram& gp,
                                             const std::vector<char>& mask) {
    std::vector<GroundProgram::AtomId> ids;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
            ids.push_back(static_cast<GroundProgram::AtomId>(i));
    return gp.interpretation_of(ids);
}

}  // namespace detail

/// Gelfond-Lifschitz transform: delete clauses whose negative body meets m,
/// strip the negative body of the rest. The result is a Horn program over
/// the same symbol tables.
inline GroundProgram gl_reduct(const GroundProgram& gp, const Interpretation& m) {
    std::size_t unknown = 0;
    std::vector<char> in = detail::member_mask(gp, gp.ids_of(m, &unknown));
    GroundProgram::Builder b(gp);
    for (std::size_t i = 0; i < gp.num_clauses(); ++i) {
        auto cv = gp.clause(i);
        bool blocked = false;
        for (auto a : cv.neg)
            if (in[a]) {
                blocked = true;
                break;
            }
        if (!blocked)
            b.add_clause(cv.head, {cv.pos.begin(), cv.pos.end()}, {});
    }
    return b.build();
}

/// Least model of a Horn program (every clause must have an empty negative
/// body), computed by unit propagation to fixpoint.
inline Interpretation least_model(const GroundProgram& horn) {
    for (std::size_t i = 0; i < horn.num_clauses(); ++i)
        if (!horn.clause(i).neg.empty())
            throw NotHornError("least_model requires an empty negative body in every clause");
    std::vector<char> lm = detail::least_model_mask(horn, [](std::size_t) { return true; });
    return detail::mask_to_interpretation(horn, lm);
}

/// One-step provability operator: heads of clauses whose positive body is
/// contained in m and whose negative body avoids m.
inline Interpretation tp_step(const GroundProgram& gp, const Interpretation& m) {
    std::size_t unknown = 0;
    std::vector<char> in = detail::member_mask(gp, gp.ids_of(m, &unknown));
    std::vector<GroundProgram::AtomId> heads;
    for (std::size_t i = 0; i < gp.num_clauses(); ++i) {
        auto cv = gp.clause(i);
        bool fires = true;
        for (auto a : cv.pos)
            if (!in[a]) {
                fires = false;
                break;
            }
        if (fires)
            for (auto a : cv.neg)
                if (in[a]) {
                    fires = false;
                    break;
                }
        if (fires)
            heads.push_back(cv.head);
    }
    return gp.interpretation_of(heads);
}

/// m is stable iff it equals the least model of its own reduct. Computed
/// without materializing the reduct.
inline bool is_stable(const GroundProgram& gp, const Interpretation& m) {
    std::size_t unknown = 0;
    std::vector<GroundProgram::AtomId> mids = gp.ids_of(m, &unknown);
    if (unknown > 0)
        return false;  // an atom with no occurrence in gp is never derivable
    std::vector<char> in = detail::member_mask(gp, mids);
    std::vector<char> lm = detail::least_model_mask(gp, [&](std::size_t i) {
        for (auto a : gp.clause(i).neg)
            if (in[a])
                return false;
        return true;
    });
    return lm == in;
}

/// m is supported iff it is a fixed point of tp_step.
inline bool is_supported(const GroundProgram& gp, const Interpretation& m) {
    return tp_step(gp, m) == m;
}

}  // namespace stablerun
