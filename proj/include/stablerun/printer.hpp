#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "stablerun/ground.hpp"
#include "stablerun/program.hpp"
#include "stablerun/turing.hpp"

namespace stablerun {

inline std::string to_string(const Term& t) { return t.name; }

inline std::string to_string(const Atom& a) {
    if (a.args.empty())
        return a.pred;
    std::string out = a.pred + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i)
            out += ",";
        out += a.args[i].name;
    }
    out += ")";
    return out;
}

inline std::string to_string(const Literal& l) {
    return l.negated ? "not " + to_string(l.atom) : to_string(l.atom);
}

inline std::string to_string(const Clause& cl) {
    std::string out = to_string(cl.head);
    if (!cl.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < cl.body.size(); ++i) {
            if (i)
                out += ", ";
            out += to_string(cl.body[i]);
        }
    }
    out += ".";
    return out;
}

inline void print_program(const Program& p, std::ostream& os) {
    for (const Predicate& pr : p.forced_intensional())
        os << "#intensional " << pr.name << "/" << pr.arity << ".\n";
    for (const Clause& cl : p.clauses())
        os << to_string(cl) << "\n";
}

/// Ground program in its stored clause order (grounding is deterministic).
inline void print_ground_program(const GroundProgram& gp, std::ostream& os) {
    for (const Clause& cl : gp.to_clauses())
        os << to_string(cl) << "\n";
}

/// One line, atoms sorted lexicographically and separated by single spaces.
inline std::string to_string(const Interpretation& m) {
    std::string out;
    for (const Atom& a : m) {
        if (!out.empty())
            out += " ";
        out += to_string(a);
    }
    return out;
}

inline std::string to_string(const Instruction& i) {
    return i.q + " " + i.a + " -> " + i.q1 + " " + i.a1 + " " + direction_name(i.d);
}

/// Step table for a set of runs, sorted canonically so that any two producers
/// of the same run set print byte-identical text.
inline void print_run_table(std::vector<Run> runs, std::ostream& os) {
    std::sort(runs.begin(), runs.end());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        os << "run " << (r + 1) << ":\n";
        for (std::size_t t = 0; t < runs[r].configs.size(); ++t) {
            const Configuration& c = runs[r].configs[t];
            os << "  t=" << t << " state=" << c.instr.q << " head=" << c.head << " tape=[";
            for (std::size_t i = 0; i < c.tape.cells.size(); ++i) {
                if (i)
                    os << " ";
                os << c.tape.cells[i];
            }
            os << "] instr=(" << to_string(c.instr) << ")\n";
        }
    }
    os << "total runs: " << runs.size() << "\n";
}

}  // namespace stablerun
