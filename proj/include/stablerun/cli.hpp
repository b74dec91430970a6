#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablerun/encoding.hpp"
#include "stablerun/grounder.hpp"
#include "stablerun/machine_file.hpp"
#include "stablerun/parser.hpp"
#include "stablerun/printer.hpp"
#include "stablerun/solver.hpp"

namespace stablerun::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Program load_program(const std::string& path) {
    return parse_program(read_file(path));
}

inline MachineSpec load_machine(const std::string& path) {
    return parse_machine(read_file(path));
}

inline int usage(std::ostream& err) {
    err << "usage: stablerun <command> [options]\n"
           "\n"
           "  ground <program> [--naive]     print the ground program\n"
           "  solve <program> [--max-models N]\n"
           "                                 enumerate stable models\n"
           "  encode <machine>               print the fact base plus the fixed program\n"
           "  run <machine>                  solve the encoding and print decoded runs\n"
           "  oracle <machine>               print runs found by direct enumeration\n"
           "  check <machine> [--json]       compare solver runs against the oracle\n";
    return 2;
}

inline std::vector<Run> solve_and_decode(const MachineSpec& spec) {
    Machine m = normalize_machine(spec.machine);
    EncodingInstance inst = build_edb(m, spec.poly, spec.input);
    GroundProgram gp = relational_ground(inst.full_program());
    ModelSet ms = enumerate_stable_models(gp);
    std::vector<Run> runs;
    runs.reserve(ms.models.size());
    for (const Interpretation& model : ms.models)
        runs.push_back(model_to_run(inst, model));
    return runs;
}

}  // namespace detail

inline int cmd_ground(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    std::string path;
    bool naive = false;
    for (const std::string& a : args) {
        if (a == "--naive")
            naive = true;
        else if (path.empty())
            path = a;
        else
            return detail::usage(err);
    }
    if (path.empty())
        return detail::usage(err);
    Program p = detail::load_program(path);
    GroundProgram gp = naive ? ground_program(p) : relational_ground(p);
    print_ground_program(gp, out);
    return 0;
}

inline int cmd_solve(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
    std::string path;
    SolveLimits limits;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--max-models") {
            if (i + 1 >= args.size())
                return detail::usage(err);
            const std::string& n = args[++i];
            if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
                throw Error("--max-models expects a nonnegative integer, got '" + n + "'");
            limits.max_models = std::stoull(n);
        } else if (path.empty()) {
            path = args[i];
        } else {
            return detail::usage(err);
        }
    }
    if (path.empty())
        return detail::usage(err);
    Program p = detail::load_program(path);
    GroundProgram gp = relational_ground(p);
    ModelSet ms = enumerate_stable_models(gp, limits);
    if (ms.models.empty()) {
        out << "UNSATISFIABLE\n";
        return 0;
    }
    for (const Interpretation& m : ms.models)
        out << to_string(m) << "\n";
    return 0;
}

inline int cmd_encode(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    if (args.size() != 1)
        return detail::usage(err);
    MachineSpec spec = detail::load_machine(args[0]);
    EncodingInstance inst = build_edb(normalize_machine(spec.machine), spec.poly, spec.input);
    print_program(inst.edb_program(), out);
    print_program(turing_program(), out);
    return 0;
}

inline int cmd_run(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    if (args.size() != 1)
        return detail::usage(err);
    MachineSpec spec = detail::load_machine(args[0]);
    print_run_table(detail::solve_and_decode(spec), out);
    return 0;
}

inline int cmd_oracle(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    if (args.size() != 1)
        return detail::usage(err);
    MachineSpec spec = detail::load_machine(args[0]);
    Machine m = normalize_machine(spec.machine);
    print_run_table(enumerate_valid_runs(m, spec.poly, spec.input), out);
    return 0;
}

inline int cmd_check(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
    std::string path;
    bool json = false;
    for (const std::string& a : args) {
        if (a == "--json")
            json = true;
        else if (path.empty())
            path = a;
        else
            return detail::usage(err);
    }
    if (path.empty())
        return detail::usage(err);
    MachineSpec spec = detail::load_machine(path);
    BijectionReport report = verify_bijection(spec.machine, spec.poly, spec.input);
    if (json) {
        nlohmann::json j;
        j["runs"] = report.run_count;
        j["models"] = report.model_count;
        j["bijection"] = report.bijection;
        if (report.counterexample.empty())
            j["counterexample"] = nullptr;
        else
            j["counterexample"] = report.counterexample;
        out << j.dump() << "\n";
    } else {
        out << "runs: " << report.run_count << "\n";
        out << "models: " << report.model_count << "\n";
        out << "bijection: " << (report.bijection ? "yes" : "no") << "\n";
        if (!report.counterexample.empty())
            out << "counterexample: " << report.counterexample << "\n";
    }
    return report.bijection ? 0 : 1;
}

/// Dispatches one command line; returns the process exit status. Status 2
/// covers usage, parse and semantic errors.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    if (args.empty())
        return detail::usage(err);
    const std::string& cmd = args[0];
    std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        if (cmd == "ground")
            return cmd_ground(rest, out, err);
        if (cmd == "solve")
            return cmd_solve(rest, out, err);
        if (cmd == "encode")
            return cmd_encode(rest, out, err);
        if (cmd == "run")
            return cmd_run(rest, out, err);
        if (cmd == "oracle")
            return cmd_oracle(rest, out, err);
        if (cmd == "check")
            return cmd_check(rest, out, err);
        err << "unknown command: " << cmd << "\n";
        return detail::usage(err);
    } catch (const SyntaxError& e) {
        err << "syntax error at " << e.line << ":" << e.column << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace stablerun::cli
