#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stablerun/grounder.hpp"
#include "stablerun/parser.hpp"
#include "stablerun/printer.hpp"
#include "stablerun/program.hpp"
#include "stablerun/semantics.hpp"
#include "stablerun/solver.hpp"
#include "stablerun/turing.hpp"

namespace stablerun {

namespace detail {

// The fixed run-search program. It is machine-independent: every mention of
// a concrete machine goes through the parameter predicates zero, initState,
// finalState, lastCell and lastTime, which are supplied as facts next to the
// machine description. Direction names are universal across machines and
// appear literally. Group by group:
//   1. head position,
//   2. tape contents,
//   3. machine state,
//   4. instruction selection (one candidate per delta tuple, vetoed by
//      otherInstr),
//   5. otherInstr covers every typed quintuple that differs somewhere from a
//      selected instruction; instr_def/A force a selection at every step,
//   6. completion must hold, and only a padding step at the last time
//      derives it.
inline const char* fixed_program_source() {
    return R"(position(P,T) :- time(T), cell(P), zero(T), i_position(P).
position(P1,T1) :- time(T;T1), cell(P;P1), state(S;S1), symb(Q;Q1), succ(T,T1), succ(P1,P), position(P,T), state(S,T), tape(P,Q,T), instr(S,Q,S1,Q1,l,T), zero(Z), neq(P,Z).
position(P1,T1) :- time(T;T1), cell(P;P1), state(S;S1), symb(Q;Q1), succ(T,T1), succ(P,P1), position(P,T), state(S,T), tape(P,Q,T), instr(S,Q,S1,Q1,r,T), lastCell(L), neq(P,L).
position(P1,T1) :- time(T;T1), cell(P;P1), state(S;S1), symb(Q;Q1), succ(T,T1), eq(P,P1), position(P,T), state(S,T), tape(P,Q,T), instr(S,Q,S1,Q1,lambda,T).
tape(P,Q,T) :- time(T), cell(P), symb(Q), zero(T), data(P,Q).
tape(P,Q1,T1) :- time(T;T1), cell(P), state(S;S1), symb(Q;Q1), dir(D), succ(T,T1), position(P,T), state(S,T), tape(P,Q,T), instr(S,Q,S1,Q1,D,T).
tape(P,Q,T1) :- time(T;T1), cell(P;P1), symb(Q), succ(T,T1), tape(P,Q,T), position(P1,T), neq(P,P1).
state(S,T) :- time(T), state(S), zero(T), initState(S).
state(S1,T1) :- time(T;T1), cell(P), symb(Q;Q1), state(S;S1), dir(D), succ(T,T1), position(P,T), state(S,T), tape(P,Q,T), instr(S,Q,S1,Q1,D,T).
instr(S,Q,S1,Q1,D,T) :- state(S;S1), symb(Q;Q1), dir(D), time(T), zero(T), initState(S), i_position(P), tape(P,Q,T), delta(S,Q,S1,Q1,D), not otherInstr(S,Q,S1,Q1,D,T).
instr(S,Q,S1,Q1,D,T) :- state(S;S1), symb(Q;Q1), dir(D), time(T), cell(P), zero(Z), neq(T,Z), position(P,T), state(S,T), tape(P,Q,T), delta(S,Q,S1,Q1,D), not otherInstr(S,Q,S1,Q1,D,T).
otherInstr(S,Q,S1,Q1,D1,T) :- state(S;SP;S1;S2), symb(Q;QP;Q1;Q2), time(T), dir(D1;D2), instr(SP,QP,S2,Q2,D2,T), neq(S2,S1).
otherInstr(S,Q,S1,Q1,D1,T) :- state(S;SP;S1;S2), symb(Q;QP;Q1;Q2), time(T), dir(D1;D2), instr(SP,QP,S2,Q2,D2,T), neq(Q2,Q1).
otherInstr(S,Q,S1,Q1,D1,T) :- state(S;SP;S1;S2), symb(Q;QP;Q1;Q2), time(T), dir(D1;D2), instr(SP,QP,S2,Q2,D2,T), neq(D2,D1).
otherInstr(S,Q,S1,Q1,D1,T) :- state(S;SP;S1;S2), symb(Q;QP;Q1;Q2), time(T), dir(D1;D2), instr(SP,QP,S2,Q2,D2,T), neq(SP,S).
otherInstr(S,Q,S1,Q1,D1,T) :- state(S;SP;S1;S2), symb(Q;QP;Q1;Q2), time(T), dir(D1;D2), instr(SP,QP,S2,Q2,D2,T), neq(QP,Q).
instr_def(T) :- state(S;S1), symb(Q;Q1), dir(D), time(T), instr(S,Q,S1,Q1,D,T).
A :- time(T), not instr_def(T), not A.
completion :- symb(Q), finalState(F), lastTime(T), instr(F,Q,F,Q,lambda,T).
A :- not completion, not A.
)";
}

}  // namespace detail

/// The machine-independent program coupled with every encoded instance.
/// Parsed once from its canonical source; 20 clauses in groups of
/// 4 + 3 + 2 + 2 + 7 + 2.
inline const Program& turing_program() {
    static const Program p = parse_program(detail::fixed_program_source());
    return p;
}

/// Canonical serialization of the fixed program, used by the uniformity
/// checks: it must be byte-identical across all instances.
inline std::string turing_program_text() {
    std::ostringstream os;
    print_program(turing_program(), os);
    return os.str();
}

/// An encoded machine instance: the fact base describing machine, tape
/// horizon and input, paired with everything needed to decode models back
/// into runs. Machine symbols map to program constants by name, integers by
/// their decimal spelling; the map is not injective across sorts (an
/// alphabet {0,1} shares its names with tape indices), which is harmless
/// because every clause compares constants within one sort only and the
/// predicates are typed positionally.
struct EncodingInstance {
    Machine machine;  // normalized
    RuntimePolynomial poly;
    std::vector<std::string> input;
    uint64_t n = 0;
    uint64_t horizon = 0;
    std::vector<Clause> edb;  // ground facts, canonically sorted

    Program edb_program() const { return Program(edb); }
    Program full_program() const { return edb_program() + turing_program(); }

    // The constant dictionary: machine names map to themselves, integers to
    // their decimal spelling, directions to l/r/lambda.
    static std::string int_const(uint64_t i) { return std::to_string(i); }
    static const std::string& state_const(const std::string& s) { return s; }
    static const std::string& symbol_const(const std::string& s) { return s; }
    static const std::string& direction_const(Direction d) { return direction_name(d); }
};

/// Builds edb_{M,p,sigma}: the facts describing the machine (states,
/// symbols, delta), the integer segment 0..p(n) with its successor relation,
/// the initial tape contents, the equality and inequality tables over all
/// constants of the instance, and the parameter facts binding the fixed
/// program to this instance.
inline EncodingInstance build_edb(const Machine& machine, const RuntimePolynomial& poly,
                                  const std::vector<std::string>& input) {
    machine.validate();
    if (!machine.is_normalized())
        throw SemanticError("build_edb requires a normalized machine");
    for (const std::string& s : input)
        if (std::find(machine.input_alphabet.begin(), machine.input_alphabet.end(), s) ==
            machine.input_alphabet.end())
            throw SemanticError("input symbol " + s + " is not in the input alphabet");
    for (const std::string& s : machine.states)
        if (!detail::valid_constant_name(s))
            throw SemanticError("state name " + s + " is not a valid constant");
    for (const std::string& s : machine.tape_alphabet())
        if (!detail::valid_constant_name(s))
            throw SemanticError("symbol name " + s + " is not a valid constant");

    EncodingInstance inst;
    inst.machine = machine;
    inst.poly = poly;
    inst.input = input;
    inst.n = input.size();
    inst.horizon = poly(inst.n);
    if (inst.horizon == 0)
        throw SemanticError("tape length p(n) must be at least 1");
    if (inst.n > inst.horizon)
        throw InputTooLongError("input of length " + std::to_string(inst.n) +
                                " does not fit on a tape of length " +
                                std::to_string(inst.horizon));

    std::vector<Clause>& edb = inst.edb;
    auto fact = [&](const std::string& pred, std::vector<std::string> args) {
        std::vector<Term> terms;
        terms.reserve(args.size());
        for (std::string& a : args)
            terms.push_back(Term::constant(std::move(a)));
        edb.push_back(Clause(Atom{pred, std::move(terms)}));
    };
    auto num = [](uint64_t i) { return EncodingInstance::int_const(i); };

    for (const std::string& s : machine.states)
        fact("state", {s});
    for (const std::string& x : machine.tape_alphabet())
        fact("symb", {x});
    for (const Instruction& i : machine.delta)
        fact("delta", {i.q, i.a, i.q1, i.a1, direction_name(i.d)});
    for (uint64_t i = 0; i < inst.horizon; ++i)
        fact("succ", {num(i), num(i + 1)});
    for (uint64_t i = 0; i <= inst.horizon; ++i)
        fact("time", {num(i)});
    for (uint64_t i = 0; i < inst.horizon; ++i)
        fact("cell", {num(i)});
    for (uint64_t m = 0; m < inst.n; ++m)
        fact("data", {num(m), input[m]});
    for (uint64_t m = inst.n; m < inst.horizon; ++m)
        fact("data", {num(m), machine.blank});
    fact("dir", {"l"});
    fact("dir", {"r"});
    fact("dir", {"lambda"});
    fact("i_position", {num(0)});

    // eq/neq range over the distinct constants of states, tape symbols, the
    // integer segment and the directions. The clauses only ever compare
    // within one sort, so a name shared across sorts contributes one
    // constant. Directions are included because the clause rejecting
    // alternative instructions compares them.
    std::vector<std::string> universe;
    std::set<std::string> seen;
    auto add_const = [&](const std::string& s) {
        if (seen.insert(s).second)
            universe.push_back(s);
    };
    for (const std::string& s : machine.states)
        add_const(s);
    for (const std::string& x : machine.tape_alphabet())
        add_const(x);
    for (uint64_t i = 0; i <= inst.horizon; ++i)
        add_const(num(i));
    add_const("l");
    add_const("r");
    add_const("lambda");
    for (const std::string& a : universe)
        for (const std::string& b : universe)
            if (a != b)
                fact("neq", {a, b});
    for (const std::string& a : universe)
        fact("eq", {a, a});

    fact("zero", {num(0)});
    fact("initState", {machine.start});
    fact("finalState", {machine.final_state});
    fact("lastCell", {num(inst.horizon - 1)});
    fact("lastTime", {num(inst.horizon)});

    std::sort(edb.begin(), edb.end());
    edb.erase(std::unique(edb.begin(), edb.end()), edb.end());
    return inst;
}

namespace detail {

/// The model determined by a coherent instruction sequence: the edb, the
/// simulated position/tape/state trajectory, the selected instructions, the
/// rejected alternatives at every step, instr_def for every step, and
/// completion iff the last instruction is the padding step of the final
/// state. For a valid run this is exactly the stable model the run maps to.
inline Interpretation model_from_sequence(const EncodingInstance& inst,
                                          const std::vector<Instruction>& seq) {
    const Machine& m = inst.machine;
    if (seq.size() != inst.horizon + 1)
        throw InvalidRunError("instruction sequence has the wrong length");
    std::vector<Atom> atoms;
    for (const Clause& cl : inst.edb)
        atoms.push_back(cl.head);

    auto num = [](uint64_t i) { return Term::constant(EncodingInstance::int_const(i)); };
    auto cst = [](const std::string& s) { return Term::constant(s); };

    std::vector<std::string> tape = initial_configuration_tape(m, inst.poly, inst.input).cells;
    uint64_t head = 0;
    std::string state = m.start;
    const std::vector<std::string> symbols = m.tape_alphabet();
    static const Direction kDirs[3] = {Direction::Left, Direction::Right, Direction::Stay};

    for (uint64_t t = 0; t <= inst.horizon; ++t) {
        const Instruction& i = seq[t];
        if (i.q != state || i.a != tape[head] || !m.has_instruction(i))
            throw InvalidRunError("instruction sequence is incoherent at step " +
                                  std::to_string(t));
        atoms.push_back(Atom{"position", {num(head), num(t)}});
        atoms.push_back(Atom{"state", {cst(state), num(t)}});
        for (uint64_t r = 0; r < inst.horizon; ++r)
            atoms.push_back(Atom{"tape", {num(r), cst(tape[r]), num(t)}});
        atoms.push_back(Atom{"instr", {cst(i.q), cst(i.a), cst(i.q1), cst(i.a1),
                                       cst(direction_name(i.d)), num(t)}});
        atoms.push_back(Atom{"instr_def", {num(t)}});
        for (const std::string& s : m.states)
            for (const std::string& q : symbols)
                for (const std::string& s1 : m.states)
                    for (const std::string& q1 : symbols)
                        for (Direction d : kDirs) {
                            if (s == i.q && q == i.a && s1 == i.q1 && q1 == i.a1 && d == i.d)
                                continue;
                            atoms.push_back(Atom{"otherInstr",
                                                 {cst(s), cst(q), cst(s1), cst(q1),
                                                  cst(direction_name(d)), num(t)}});
                        }
        if (t == inst.horizon)
            break;
        // Execute the step: write, then move.
        tape[head] = i.a1;
        switch (i.d) {
            case Direction::Left:
                if (head == 0)
                    throw InvalidRunError("move left past cell 0 at step " + std::to_string(t));
                --head;
                break;
            case Direction::Right:
                if (head + 1 >= inst.horizon)
                    throw InvalidRunError("move right past the last cell at step " +
                                          std::to_string(t));
                ++head;
                break;
            case Direction::Stay:
                break;
        }
        state = i.q1;
    }
    const Instruction& last = seq[inst.horizon];
    if (last.q == m.final_state && last.q1 == m.final_state && last.a1 == last.a &&
        last.d == Direction::Stay)
        atoms.push_back(Atom{"completion", {}});
    return Interpretation(std::move(atoms));
}

inline std::optional<uint64_t> parse_index(const std::string& s, uint64_t max) {
    if (s.empty() || s.size() > 19)
        return std::nullopt;
    uint64_t value = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            return std::nullopt;
        value = value * 10 + static_cast<uint64_t>(ch - '0');
    }
    if (value > max)
        return std::nullopt;
    return value;
}

}  // namespace detail

/// Maps a valid run to the interpretation it corresponds to; the result is
/// a stable model of the fact base joined with the fixed program.
inline Interpretation run_to_model(const EncodingInstance& inst, const Run& run) {
    if (!is_valid_run(inst.machine, inst.poly, inst.input, run))
        throw InvalidRunError("run_to_model requires a valid run");
    std::vector<Instruction> seq;
    seq.reserve(run.configs.size());
    for (const Configuration& c : run.configs)
        seq.push_back(c.instr);
    return detail::model_from_sequence(inst, seq);
}

/// Extracts the run encoded by a stable model: the unique instr atom per
/// step, the unique position atom per step and the tape atoms per step.
/// Runs in time linear in the model size. Throws MalformedModelError when
/// the expected uniqueness fails, which cannot happen on stable models.
inline Run model_to_run(const EncodingInstance& inst, const Interpretation& model) {
    uint64_t horizon = inst.horizon;
    std::vector<std::optional<Instruction>> instr_at(horizon + 1);
    std::vector<std::optional<uint64_t>> pos_at(horizon + 1);
    std::vector<std::vector<std::optional<std::string>>> tape_at(
        horizon + 1, std::vector<std::optional<std::string>>(horizon));
    bool completion = false;

    auto arg = [](const Atom& a, std::size_t i) -> const std::string& {
        return a.args[i].name;
    };
    for (const Atom& a : model) {
        if (a.pred == "instr" && a.args.size() == 6) {
            auto t = detail::parse_index(arg(a, 5), horizon);
            if (!t)
                throw MalformedModelError("instr atom with invalid time: " + to_string(a));
            static const std::map<std::string, Direction> dirs = {
                {"l", Direction::Left}, {"r", Direction::Right}, {"lambda", Direction::Stay}};
            auto dit = dirs.find(arg(a, 4));
            if (dit == dirs.end())
                throw MalformedModelError("instr atom with invalid direction: " + to_string(a));
            Instruction i{arg(a, 0), arg(a, 1), arg(a, 2), arg(a, 3), dit->second};
            if (!inst.machine.has_instruction(i))
                throw MalformedModelError("instr atom outside delta: " + to_string(a));
            if (instr_at[*t])
                throw MalformedModelError("two instr atoms at time " + arg(a, 5));
            instr_at[*t] = i;
        } else if (a.pred == "position" && a.args.size() == 2) {
            auto p = detail::parse_index(arg(a, 0), horizon - 1);
            auto t = detail::parse_index(arg(a, 1), horizon);
            if (!p || !t)
                throw MalformedModelError("position atom out of range: " + to_string(a));
            if (pos_at[*t])
                throw MalformedModelError("two position atoms at time " + arg(a, 1));
            pos_at[*t] = p;
        } else if (a.pred == "tape" && a.args.size() == 3) {
            auto p = detail::parse_index(arg(a, 0), horizon - 1);
            auto t = detail::parse_index(arg(a, 2), horizon);
            if (!p || !t)
                throw MalformedModelError("tape atom out of range: " + to_string(a));
            if (tape_at[*t][*p])
                throw MalformedModelError("two tape atoms for cell " + arg(a, 0) +
                                          " at time " + arg(a, 2));
            tape_at[*t][*p] = arg(a, 1);
        } else if (a.pred == "completion" && a.args.empty()) {
            completion = true;
        }
    }
    if (!completion)
        throw MalformedModelError("model lacks the completion atom");

    Run run;
    run.configs.reserve(horizon + 1);
    for (uint64_t t = 0; t <= horizon; ++t) {
        if (!instr_at[t])
            throw MalformedModelError("no instr atom at time " + std::to_string(t));
        if (!pos_at[t])
            throw MalformedModelError("no position atom at time " + std::to_string(t));
        Configuration c;
        c.instr = *instr_at[t];
        c.head = static_cast<int>(*pos_at[t]);
        c.tape.cells.reserve(horizon);
        for (uint64_t r = 0; r < horizon; ++r) {
            if (!tape_at[t][r])
                throw MalformedModelError("no tape atom for cell " + std::to_string(r) +
                                          " at time " + std::to_string(t));
            c.tape.cells.push_back(*tape_at[t][r]);
        }
        run.configs.push_back(std::move(c));
    }
    return run;
}

struct BijectionOptions {
    uint64_t max_horizon = 12;
    SolveLimits limits{std::optional<uint64_t>(100000), std::optional<uint64_t>(10000000)};
};

/// Outcome of checking the run/model correspondence on one instance.
struct BijectionReport {
    uint64_t run_count = 0;
    uint64_t model_count = 0;
    bool bijection = false;
    std::string counterexample;  // empty when the correspondence holds

    bool ok() const { return bijection; }
};

/// The intermediate objects of a bijection check, exposed so callers running
/// further analyses on the same instance do not ground and solve twice.
struct BijectionArtifacts {
    EncodingInstance instance;
    GroundProgram ground;
    ModelSet models;
};

/// Checks, for one machine/polynomial/input triple, that decoding the stable
/// models of edb + fixed program yields exactly the valid runs of the
/// machine, that encoding is injective, and that both round trips are the
/// identity. The machine is normalized on entry.
inline BijectionReport verify_bijection(const Machine& machine, const RuntimePolynomial& poly,
                                        const std::vector<std::string>& input,
                                        const BijectionOptions& opts = {},
                                        BijectionArtifacts* artifacts = nullptr) {
    BijectionReport report;
    Machine m = normalize_machine(machine);
    EncodingInstance inst = build_edb(m, poly, input);
    std::vector<Run> runs = enumerate_valid_runs(m, poly, input, opts.max_horizon);
    report.run_count = runs.size();

    GroundProgram gp = relational_ground(inst.full_program());
    ModelSet ms = enumerate_stable_models(gp, opts.limits);
    if (artifacts) {
        artifacts->instance = inst;
        artifacts->ground = gp;
        artifacts->models = ms;
    }
    report.model_count = ms.models.size();
    if (!ms.complete) {
        report.counterexample = "model enumeration hit its limits before completing";
        return report;
    }

    std::vector<Run> decoded;
    for (const Interpretation& model : ms.models) {
        try {
            decoded.push_back(model_to_run(inst, model));
        } catch (const MalformedModelError& e) {
            report.counterexample = std::string("undecodable stable model: ") + e.what();
            return report;
        }
    }
    std::sort(decoded.begin(), decoded.end());
    for (std::size_t i = 0; i + 1 < decoded.size(); ++i)
        if (decoded[i] == decoded[i + 1]) {
            report.counterexample = "two stable models decode to the same run";
            return report;
        }
    std::vector<Run> expected = runs;
    std::sort(expected.begin(), expected.end());
    if (decoded != expected) {
        report.counterexample =
            "decoded stable models and valid runs differ as sets (" +
            std::to_string(decoded.size()) + " models vs " +
            std::to_string(expected.size()) + " runs)";
        return report;
    }

    // Round trip on the model side and on the run side; encoding injectivity
    // follows from the sides being equal and decode being single-valued.
    for (const Interpretation& model : ms.models) {
        if (run_to_model(inst, model_to_run(inst, model)) != model) {
            report.counterexample = "model -> run -> model is not the identity";
            return report;
        }
    }
    std::set<Interpretation> encoded;
    for (const Run& r : runs) {
        Interpretation n = run_to_model(inst, r);
        if (!encoded.insert(n).second) {
            report.counterexample = "two valid runs encode to the same model";
            return report;
        }
        if (model_to_run(inst, n) != r) {
            report.counterexample = "run -> model -> run is not the identity";
            return report;
        }
    }
    report.bijection = true;
    return report;
}

/// Targeted supported-model search for an encoded instance, following the
/// forced structure of T_P fixed points: the extensional part of a fixed
/// point is exactly the fact base, a selected instruction must exist at
/// every step and be coherent with the simulated trajectory, and everything
/// else is determined. Each candidate is confirmed or rejected by evaluating
/// T_P once. Exhaustive over coherent instruction sequences.
inline std::vector<Interpretation> enumerate_supported_encoded(const EncodingInstance& inst,
                                                               const GroundProgram& gp) {
    std::vector<Interpretation> found;
    const Machine& m = inst.machine;
    std::vector<Instruction> seq;
    std::vector<std::string> tape =
        initial_configuration_tape(m, inst.poly, inst.input).cells;
    uint64_t head = 0;
    std::string state = m.start;

    auto dfs = [&](auto&& self) -> void {
        uint64_t t = seq.size();
        if (t == inst.horizon + 1) {
            Interpretation candidate = detail::model_from_sequence(inst, seq);
            if (tp_step(gp, candidate) == candidate)
                found.push_back(candidate);
            return;
        }
        for (const Instruction& i : m.instructions_from(state, tape[head])) {
            if (t == inst.horizon) {
                seq.push_back(i);
                self(self);
                seq.pop_back();
                continue;
            }
            // Execute the step; skip instructions whose move is blocked at a
            // tape end, they cannot be extended to a full sequence.
            uint64_t new_head = head;
            if (i.d == Direction::Left) {
                if (head == 0)
                    continue;
                new_head = head - 1;
            } else if (i.d == Direction::Right) {
                if (head + 1 >= inst.horizon)
                    continue;
                new_head = head + 1;
            }
            std::string old_sym = tape[head];
            std::string old_state = state;
            uint64_t old_head = head;
            tape[head] = i.a1;
            head = new_head;
            state = i.q1;
            seq.push_back(i);
            self(self);
            seq.pop_back();
            state = old_state;
            head = old_head;
            tape[old_head] = old_sym;
        }
    };
    dfs(dfs);
    return found;
}

}  // namespace stablerun
