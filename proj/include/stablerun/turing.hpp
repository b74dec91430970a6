#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "stablerun/errors.hpp"

namespace stablerun {

namespace detail {

/// Machine state and symbol names double as program constants, so they must
/// be lowercase identifiers, numerals, or the conventional blank "B".
inline bool valid_constant_name(const std::string& s) {
    if (s.empty())
        return false;
    bool all_digits = true;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            all_digits = false;
    if (all_digits)
        return true;
    if (s == "B")
        return true;
    if (!std::islower(static_cast<unsigned char>(s[0])))
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

}  // namespace detail

enum class Direction : uint8_t { Left, Right, Stay };

inline const std::string& direction_name(Direction d) {
    static const std::string names[3] = {"l", "r", "lambda"};
    return names[static_cast<int>(d)];
}

/// A transition quintuple: in state `q` reading `a`, switch to state `q1`,
/// write `a1` and move `d`.
struct Instruction {
    std::string q, a, q1, a1;
    Direction d = Direction::Stay;

    friend bool operator==(const Instruction& x, const Instruction& y) {
        return x.q == y.q && x.a == y.a && x.q1 == y.q1 && x.a1 == y.a1 && x.d == y.d;
    }
    friend bool operator!=(const Instruction& x, const Instruction& y) { return !(x == y); }
    friend bool operator<(const Instruction& x, const Instruction& y) {
        if (x.q != y.q) return x.q < y.q;
        if (x.a != y.a) return x.a < y.a;
        if (x.q1 != y.q1) return x.q1 < y.q1;
        if (x.a1 != y.a1) return x.a1 < y.a1;
        return x.d < y.d;
    }
};

/// Nondeterministic Turing machine on a one-way tape: states Q with start
/// and final state, input alphabet, tape alphabet = input alphabet plus the
/// blank, and the transition relation delta as a set of quintuples.
struct Machine {
    std::vector<std::string> states;
    std::vector<std::string> input_alphabet;
    std::string blank = "B";
    std::string start;
    std::string final_state;
    std::vector<Instruction> delta;

    std::vector<std::string> tape_alphabet() const {
        std::vector<std::string> out = input_alphabet;
        out.push_back(blank);
        return out;
    }

    bool has_state(const std::string& s) const {
        return std::find(states.begin(), states.end(), s) != states.end();
    }

    bool has_tape_symbol(const std::string& s) const {
        return s == blank ||
               std::find(input_alphabet.begin(), input_alphabet.end(), s) !=
                   input_alphabet.end();
    }

    bool has_instruction(const Instruction& i) const {
        return std::find(delta.begin(), delta.end(), i) != delta.end();
    }

    /// Rank helpers fixing the symbol orderings used for enumeration.
    int state_rank(const std::string& s) const {
        return static_cast<int>(std::find(states.begin(), states.end(), s) - states.begin());
    }
    int symbol_rank(const std::string& s) const {
        if (s == blank)
            return static_cast<int>(input_alphabet.size());
        return static_cast<int>(
            std::find(input_alphabet.begin(), input_alphabet.end(), s) -
            input_alphabet.begin());
    }

    /// Instructions applicable in state q reading a, ordered lexicographically
    /// by (target state, written symbol, direction) under the declared symbol
    /// orderings with l < r < lambda.
    std::vector<Instruction> instructions_from(const std::string& q,
                                               const std::string& a) const {
        std::vector<Instruction> out;
        for (const Instruction& i : delta)
            if (i.q == q && i.a == a)
                out.push_back(i);
        std::sort(out.begin(), out.end(), [&](const Instruction& x, const Instruction& y) {
            if (x.q1 != y.q1)
                return state_rank(x.q1) < state_rank(y.q1);
            if (x.a1 != y.a1)
                return symbol_rank(x.a1) < symbol_rank(y.a1);
            return x.d < y.d;
        });
        return out;
    }

    /// Validates the septuple structure; throws SemanticError.
    void validate() const {
        std::set<std::string> qs(states.begin(), states.end());
        if (qs.size() != states.size())
            throw SemanticError("duplicate state name");
        std::set<std::string> sym(input_alphabet.begin(), input_alphabet.end());
        if (sym.size() != input_alphabet.size())
            throw SemanticError("duplicate alphabet symbol");
        if (sym.count(blank))
            throw SemanticError("blank symbol must not belong to the input alphabet");
        if (!has_state(start))
            throw SemanticError("start state " + start + " is not declared");
        if (!has_state(final_state))
            throw SemanticError("final state " + final_state + " is not declared");
        for (const Instruction& i : delta) {
            if (!has_state(i.q) || !has_state(i.q1))
                throw SemanticError("transition uses undeclared state");
            if (!has_tape_symbol(i.a) || !has_tape_symbol(i.a1))
                throw SemanticError("transition uses undeclared symbol");
        }
    }

    /// True iff delta restricted to the final state is exactly the padding
    /// loop { (f,a,f,a,stay) : a in tape alphabet }.
    bool is_normalized() const {
        std::set<std::string> padded;
        for (const Instruction& i : delta) {
            if (i.q != final_state)
                continue;
            if (i.q1 != final_state || i.a1 != i.a || i.d != Direction::Stay)
                return false;
            padded.insert(i.a);
        }
        for (const std::string& a : tape_alphabet())
            if (!padded.count(a))
                return false;
        return true;
    }
};

/// Sum of a_i * n^i, coefficients constant-term first, all nonnegative, and
/// the leading coefficient nonzero unless the polynomial is the constant a_0.
struct RuntimePolynomial {
    std::vector<uint64_t> coefficients;

    RuntimePolynomial() = default;
    explicit RuntimePolynomial(std::vector<uint64_t> coeffs)
        : coefficients(std::move(coeffs)) {
        if (coefficients.empty())
            throw SemanticError("polynomial needs at least one coefficient");
        if (coefficients.size() > 1 && coefficients.back() == 0)
            throw SemanticError("leading polynomial coefficient must be nonzero");
    }

    uint64_t operator()(uint64_t n) const {
        uint64_t value = 0;
        uint64_t power = 1;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            value += coefficients[i] * power;
            power *= n;
        }
        return value;
    }
};

/// Rewrites delta so that the final state carries exactly the padding loop:
/// delta(f,a) = {(f,a,stay)} for every tape symbol a. Delta is a set, so
/// duplicate tuples collapse. Idempotent.
inline Machine normalize_machine(Machine m) {
    std::vector<Instruction> kept;
    kept.reserve(m.delta.size());
    for (const Instruction& i : m.delta)
        if (i.q != m.final_state &&
            std::find(kept.begin(), kept.end(), i) == kept.end())
            kept.push_back(i);
    for (const std::string& a : m.tape_alphabet())
        kept.push_back(Instruction{m.final_state, a, m.final_state, a, Direction::Stay});
    m.delta = std::move(kept);
    return m;
}

/// A tape truncated to exactly p(n) cells.
struct TapeState {
    std::vector<std::string> cells;

    friend bool operator==(const TapeState& a, const TapeState& b) {
        return a.cells == b.cells;
    }
    friend bool operator!=(const TapeState& a, const TapeState& b) { return !(a == b); }
    friend bool operator<(const TapeState& a, const TapeState& b) {
        return a.cells < b.cells;
    }
};

/// The instruction about to execute, the tape, and the head position. The
/// coherence condition tape[head] == instr.a must hold.
struct Configuration {
    Instruction instr;
    TapeState tape;
    int head = 0;

    bool coherent() const {
        return head >= 0 && head < static_cast<int>(tape.cells.size()) &&
               tape.cells[head] == instr.a;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.instr == b.instr && a.tape == b.tape && a.head == b.head;
    }
    friend bool operator!=(const Configuration& a, const Configuration& b) {
        return !(a == b);
    }
    friend bool operator<(const Configuration& a, const Configuration& b) {
        if (a.instr != b.instr) return a.instr < b.instr;
        if (a.head != b.head) return a.head < b.head;
        return a.tape < b.tape;
    }
};

/// A sequence of p(n)+1 configurations; valid when the final configuration
/// executes the padding instruction of the final state.
struct Run {
    std::vector<Configuration> configs;

    friend bool operator==(const Run& a, const Run& b) { return a.configs == b.configs; }
    friend bool operator!=(const Run& a, const Run& b) { return !(a == b); }
    friend bool operator<(const Run& a, const Run& b) { return a.configs < b.configs; }
};

/// Cells 0..n-1 hold the input word, the rest of the p(n) cells are blank.
inline TapeState initial_configuration_tape(const Machine& m, const RuntimePolynomial& p,
                                            const std::vector<std::string>& input) {
    uint64_t n = input.size();
    uint64_t len = p(n);
    if (n > len)
        throw InputTooLongError("input of length " + std::to_string(n) +
                                " does not fit on a tape of length " + std::to_string(len));
    if (len == 0)
        throw SemanticError("tape length p(n) must be at least 1");
    TapeState t;
    t.cells.reserve(len);
    for (const std::string& s : input)
        t.cells.push_back(s);
    for (uint64_t i = n; i < len; ++i)
        t.cells.push_back(m.blank);
    return t;
}

/// All configurations D with c |- D: the next instruction starts in the
/// state c's instruction switches to, the head moves as directed (blocked at
/// the tape ends), exactly cell `head` is rewritten, and the next
/// instruction is coherent with the observed cell. Returns the empty set if
/// the machine is stuck or the move crosses a tape boundary.
inline std::vector<Configuration> successors(const Machine& m, uint64_t p_n,
                                             const Configuration& c) {
    std::vector<Configuration> out;
    int next_head;
    switch (c.instr.d) {
        case Direction::Left:
            if (c.head == 0)
                return out;
            next_head = c.head - 1;
            break;
        case Direction::Right:
            if (c.head == static_cast<int>(p_n) - 1)
                return out;
            next_head = c.head + 1;
            break;
        case Direction::Stay:
        default:
            next_head = c.head;
            break;
    }
    TapeState next_tape = c.tape;
    next_tape.cells[c.head] = c.instr.a1;
    const std::string& observed = next_tape.cells[next_head];
    for (const Instruction& j : m.instructions_from(c.instr.q1, observed))
        out.push_back(Configuration{j, next_tape, next_head});
    return out;
}

/// True iff `run` is a valid run of m on `input`: correct length, the
/// required start configuration, coherent one-step transitions throughout,
/// and the padding instruction of the final state at the last step.
inline bool is_valid_run(const Machine& m, const RuntimePolynomial& p,
                         const std::vector<std::string>& input, const Run& run) {
    uint64_t horizon = p(input.size());
    if (run.configs.size() != horizon + 1)
        return false;
    const Configuration& first = run.configs.front();
    if (first.head != 0 || first.instr.q != m.start)
        return false;
    if (first.tape != initial_configuration_tape(m, p, input))
        return false;
    if (!m.has_instruction(first.instr))
        return false;
    for (const Configuration& c : run.configs)
        if (!c.coherent())
            return false;
    for (std::size_t k = 0; k + 1 < run.configs.size(); ++k) {
        std::vector<Configuration> next = successors(m, horizon, run.configs[k]);
        if (std::find(next.begin(), next.end(), run.configs[k + 1]) == next.end())
            return false;
    }
    const Instruction& last = run.configs.back().instr;
    return last.q == m.final_state && last.q1 == m.final_state && last.a1 == last.a &&
           last.d == Direction::Stay;
}

/// Exhaustive depth-first enumeration of the valid runs of a normalized
/// machine, in the instruction order fixed by instructions_from. The horizon
/// p(n) is capped (default 12) to keep the search at desk scale.
inline std::vector<Run> enumerate_valid_runs(const Machine& m, const RuntimePolynomial& p,
                                             const std::vector<std::string>& input,
                                             uint64_t max_horizon = 12) {
    if (!m.is_normalized())
        throw SemanticError("machine must be normalized before run enumeration");
    uint64_t horizon = p(input.size());
    if (horizon > max_horizon)
        throw BoundExceededError("horizon p(n) = " + std::to_string(horizon) +
                                 " exceeds the bound " + std::to_string(max_horizon));
    TapeState tape0 = initial_configuration_tape(m, p, input);
    std::vector<Run> out;
    std::vector<Configuration> stack;
    auto dfs = [&](auto&& self, const Configuration& c) -> void {
        stack.push_back(c);
        if (stack.size() == horizon + 1) {
            const Instruction& last = c.instr;
            if (last.q == m.final_state && last.q1 == m.final_state && last.a1 == last.a &&
                last.d == Direction::Stay)
                out.push_back(Run{stack});
        } else {
            for (const Configuration& d : successors(m, horizon, c))
                self(self, d);
        }
        stack.pop_back();
    };
    for (const Instruction& i : m.instructions_from(m.start, tape0.cells[0]))
        dfs(dfs, Configuration{i, tape0, 0});
    return out;
}

}  // namespace stablerun
