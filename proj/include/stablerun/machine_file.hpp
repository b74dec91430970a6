#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "stablerun/turing.hpp"

namespace stablerun {

struct MachineSpec {
    Machine machine;
    RuntimePolynomial poly;
    std::vector<std::string> input;
};

/// Parses the line-oriented machine format:
///
///   states: s0 q1 f
///   start: s0
///   final: f
///   alphabet: 0 1
///   blank: B                     (optional, defaults to B)
///   delta: s0 0 -> q1 1 r        (one line per transition, d in {l,r,lambda})
///   poly: 1 1                    (coefficients, constant term first)
///   input: 0 1                   (optional, defaults to the empty word)
///
/// '%' starts a comment. Unknown keys and repeated scalar keys are rejected.
inline MachineSpec parse_machine(const std::string& text) {
    MachineSpec spec;
    bool saw_states = false, saw_start = false, saw_final = false, saw_alphabet = false,
         saw_blank = false, saw_poly = false, saw_input = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto check_name = [&](const std::string& s, const char* what) {
        if (!detail::valid_constant_name(s))
            throw SemanticError(std::string(what) + " name '" + s +
                                "' is not a valid constant (lowercase identifier, numeral, "
                                "or B)");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto cut = line.find('%'); cut != std::string::npos)
            line.erase(cut);
        std::istringstream probe(line);
        std::string first;
        if (!(probe >> first))
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw SyntaxError("expected 'key: values'", lineno, 1);
        std::string key = line.substr(0, colon);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
            key.pop_back();
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.front())))
            key.erase(key.begin());
        std::vector<std::string> toks;
        std::istringstream rest(line.substr(colon + 1));
        std::string tok;
        while (rest >> tok)
            toks.push_back(tok);

        auto once = [&](bool& seen) {
            if (seen)
                throw SemanticError("duplicate key '" + key + "'");
            seen = true;
        };
        if (key == "states") {
            once(saw_states);
            for (const std::string& s : toks)
                check_name(s, "state");
            spec.machine.states = toks;
        } else if (key == "start") {
            once(saw_start);
            if (toks.size() != 1)
                throw SyntaxError("start expects exactly one state", lineno, 1);
            spec.machine.start = toks[0];
        } else if (key == "final") {
            once(saw_final);
            if (toks.size() != 1)
                throw SyntaxError("final expects exactly one state", lineno, 1);
            spec.machine.final_state = toks[0];
        } else if (key == "alphabet") {
            once(saw_alphabet);
            for (const std::string& s : toks)
                check_name(s, "symbol");
            spec.machine.input_alphabet = toks;
        } else if (key == "blank") {
            once(saw_blank);
            if (toks.size() != 1)
                throw SyntaxError("blank expects exactly one symbol", lineno, 1);
            check_name(toks[0], "blank");
            spec.machine.blank = toks[0];
        } else if (key == "delta") {
            if (toks.size() != 6 || toks[2] != "->")
                throw SyntaxError("delta expects 'q a -> q1 a1 d'", lineno, 1);
            Direction d;
            if (toks[5] == "l")
                d = Direction::Left;
            else if (toks[5] == "r")
                d = Direction::Right;
            else if (toks[5] == "lambda")
                d = Direction::Stay;
            else
                throw SemanticError("direction must be l, r or lambda, got '" + toks[5] + "'");
            Instruction instr{toks[0], toks[1], toks[3], toks[4], d};
            if (!spec.machine.has_instruction(instr))  // delta is a set
                spec.machine.delta.push_back(instr);
        } else if (key == "poly") {
            once(saw_poly);
            if (toks.empty())
                throw SyntaxError("poly expects at least one coefficient", lineno, 1);
            std::vector<uint64_t> coeffs;
            for (const std::string& s : toks) {
                for (char ch : s)
                    if (!std::isdigit(static_cast<unsigned char>(ch)))
                        throw SemanticError("polynomial coefficient '" + s +
                                            "' is not a nonnegative integer");
                coeffs.push_back(std::stoull(s));
            }
            spec.poly = RuntimePolynomial(std::move(coeffs));
        } else if (key == "input") {
            once(saw_input);
            spec.input = toks;
        } else {
            throw SyntaxError("unknown key '" + key + "'", lineno, 1);
        }
    }
    if (!saw_states)
        throw SemanticError("missing 'states:' line");
    if (!saw_start)
        throw SemanticError("missing 'start:' line");
    if (!saw_final)
        throw SemanticError("missing 'final:' line");
    if (!saw_alphabet)
        throw SemanticError("missing 'alphabet:' line");
    if (!saw_poly)
        throw SemanticError("missing 'poly:' line");
    spec.machine.validate();
    for (const std::string& s : spec.input)
        if (std::find(spec.machine.input_alphabet.begin(), spec.machine.input_alphabet.end(),
                      s) == spec.machine.input_alphabet.end())
            throw SemanticError("input symbol '" + s + "' is not in the alphabet");
    return spec;
}

}  // namespace stablerun
