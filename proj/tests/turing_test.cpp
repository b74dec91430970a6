#include <doctest.h>

#include "testsupport.hpp"

using namespace stablerun;
using testsupport::Rng;

namespace {

Machine two_state(std::vector<Instruction> delta, std::vector<std::string> alphabet = {"1"}) {
    Machine m;
    m.states = {"s0", "f"};
    m.input_alphabet = std::move(alphabet);
    m.start = "s0";
    m.final_state = "f";
    m.delta = std::move(delta);
    return m;
}

}  // namespace

TEST_CASE("normalize_machine forces the padding loop on the final state") {
    Machine m = two_state({Instruction{"s0", "1", "f", "1", Direction::Stay}});
    Machine n = normalize_machine(m);
    CHECK(n.is_normalized());
    CHECK(n.has_instruction(Instruction{"f", "1", "f", "1", Direction::Stay}));
    CHECK(n.has_instruction(Instruction{"f", "B", "f", "B", Direction::Stay}));
    CHECK(n.delta.size() == 3);

    // Idempotence.
    Machine nn = normalize_machine(n);
    CHECK(nn.delta == n.delta);

    // A spurious tuple leaving the final state is removed.
    Machine spurious = two_state({Instruction{"f", "B", "s0", "B", Direction::Right}});
    Machine fixed = normalize_machine(spurious);
    CHECK_FALSE(fixed.has_instruction(Instruction{"f", "B", "s0", "B", Direction::Right}));
    CHECK(fixed.is_normalized());
}

TEST_CASE("initial_configuration_tape pads with blanks") {
    Machine m = two_state({});
    TapeState t = initial_configuration_tape(m, RuntimePolynomial({3}), {"1"});
    CHECK(t.cells == std::vector<std::string>{"1", "B", "B"});

    TapeState empty = initial_configuration_tape(m, RuntimePolynomial({2}), {});
    CHECK(empty.cells == std::vector<std::string>{"B", "B"});

    Machine m01 = two_state({}, {"0", "1"});
    TapeState snug = initial_configuration_tape(m01, RuntimePolynomial({2}), {"0", "1"});
    CHECK(snug.cells == std::vector<std::string>{"0", "1"});

    CHECK_THROWS_AS(initial_configuration_tape(m, RuntimePolynomial({1}), {"1", "1"}),
                    InputTooLongError);
}

TEST_CASE("successors respect the boundary guards") {
    Machine m;
    m.states = {"s0", "q", "f"};
    m.input_alphabet = {"1"};
    m.start = "s0";
    m.final_state = "f";
    m.delta = {
        Instruction{"s0", "1", "s0", "1", Direction::Left},
        Instruction{"s0", "1", "q", "1", Direction::Stay},
        Instruction{"q", "1", "f", "1", Direction::Stay},
        Instruction{"q", "1", "f", "B", Direction::Stay},
    };
    m = normalize_machine(m);
    TapeState t0 = initial_configuration_tape(m, RuntimePolynomial({2}), {"1"});

    // Moving left at cell 0 is blocked: no successors.
    Configuration blocked{Instruction{"s0", "1", "s0", "1", Direction::Left}, t0, 0};
    CHECK(successors(m, 2, blocked).empty());

    // The padding instruction of a normalized machine has exactly one
    // successor, identical except for the step index.
    Configuration pad{Instruction{"f", "1", "f", "1", Direction::Stay}, t0, 0};
    std::vector<Configuration> next = successors(m, 2, pad);
    REQUIRE(next.size() == 1);
    CHECK(next[0] == pad);

    // Two applicable instructions at the observed next cell, two successors.
    Configuration branch{Instruction{"s0", "1", "q", "1", Direction::Stay}, t0, 0};
    std::vector<Configuration> succ = successors(m, 2, branch);
    CHECK(succ.size() == 2);
    for (const Configuration& c : succ)
        CHECK(c.coherent());
}

TEST_CASE("enumerate_valid_runs on the single-run machine") {
    // The only tuple from the start state is (s0,B,f,B,lambda); two steps of
    // padding follow. Hand simulation gives exactly one valid run.
    Machine m = normalize_machine(
        two_state({Instruction{"s0", "B", "f", "B", Direction::Stay}}, {}));
    std::vector<Run> runs = enumerate_valid_runs(m, RuntimePolynomial({2}), {});
    REQUIRE(runs.size() == 1);
    const Run& r = runs[0];
    REQUIRE(r.configs.size() == 3);
    CHECK(r.configs[0].instr == Instruction{"s0", "B", "f", "B", Direction::Stay});
    CHECK(r.configs[1].instr == Instruction{"f", "B", "f", "B", Direction::Stay});
    CHECK(r.configs[2].instr == Instruction{"f", "B", "f", "B", Direction::Stay});
    CHECK(is_valid_run(m, RuntimePolynomial({2}), {}, r));
}

TEST_CASE("a machine that never reaches the final state has no valid runs") {
    Machine m = normalize_machine(
        two_state({Instruction{"s0", "1", "s0", "1", Direction::Stay}}));
    CHECK(enumerate_valid_runs(m, RuntimePolynomial({3}), {"1"}).empty());
}

TEST_CASE("two independent binary choices give four valid runs") {
    Machine m;
    m.states = {"s0", "q", "f"};
    m.input_alphabet = {"1"};
    m.start = "s0";
    m.final_state = "f";
    m.delta = {
        Instruction{"s0", "1", "q", "1", Direction::Stay},
        Instruction{"s0", "1", "q", "B", Direction::Stay},
        Instruction{"q", "1", "f", "1", Direction::Stay},
        Instruction{"q", "1", "f", "B", Direction::Stay},
        Instruction{"q", "B", "f", "1", Direction::Stay},
        Instruction{"q", "B", "f", "B", Direction::Stay},
    };
    m = normalize_machine(m);
    std::vector<Run> runs = enumerate_valid_runs(m, RuntimePolynomial({3}), {"1"});
    CHECK(runs.size() == 4);
    for (const Run& r : runs)
        CHECK(is_valid_run(m, RuntimePolynomial({3}), {"1"}, r));
}

TEST_CASE("duplicate transition tuples collapse") {
    Machine m = two_state({Instruction{"s0", "1", "f", "1", Direction::Stay},
                           Instruction{"s0", "1", "f", "1", Direction::Stay}});
    Machine n = normalize_machine(m);
    CHECK(n.delta.size() == 3);  // one kept tuple plus two padding tuples
    CHECK(enumerate_valid_runs(n, RuntimePolynomial({2}), {"1"}).size() == 1);
}

TEST_CASE("the horizon bound guards the enumeration") {
    Machine m = normalize_machine(two_state({}));
    CHECK_THROWS_AS(enumerate_valid_runs(m, RuntimePolynomial({13}), {"1"}),
                    BoundExceededError);
    CHECK_NOTHROW(enumerate_valid_runs(m, RuntimePolynomial({13}), {"1"}, 13));
}

TEST_CASE("is_valid_run rejects tampered runs") {
    Machine m = normalize_machine(
        two_state({Instruction{"s0", "B", "f", "B", Direction::Stay}}, {}));
    RuntimePolynomial p({2});
    Run r = enumerate_valid_runs(m, p, {}).at(0);

    Run not_final = r;
    not_final.configs.back().instr = Instruction{"s0", "B", "f", "B", Direction::Stay};
    CHECK_FALSE(is_valid_run(m, p, {}, not_final));

    // Two cells changed in one step violate the frame condition.
    Run smudged = r;
    smudged.configs[1].tape.cells[1] = "x";
    CHECK_FALSE(is_valid_run(m, p, {}, smudged));

    Run short_run = r;
    short_run.configs.pop_back();
    CHECK_FALSE(is_valid_run(m, p, {}, short_run));
}

TEST_CASE("property: runs have length p(n)+1, stay coherent, and change one cell") {
    Rng rng(8899);
    int machines_with_runs = 0;
    for (int iter = 0; iter < 40; ++iter) {
        Machine m = normalize_machine(testsupport::random_machine(rng, 3, 2));
        int p_n = testsupport::pick(rng, 1, 4);
        RuntimePolynomial p({static_cast<uint64_t>(p_n)});
        std::vector<std::string> input;
        int len = testsupport::pick(rng, 0, std::min(p_n, 2));
        for (int i = 0; i < len; ++i)
            input.push_back(m.input_alphabet[testsupport::pick(
                rng, 0, static_cast<int>(m.input_alphabet.size()) - 1)]);
        std::vector<Run> runs = enumerate_valid_runs(m, p, input);
        if (!runs.empty())
            ++machines_with_runs;
        for (const Run& r : runs) {
            CHECK(r.configs.size() == static_cast<std::size_t>(p_n) + 1);
            CHECK(is_valid_run(m, p, input, r));
            bool in_final = false;
            for (std::size_t k = 0; k < r.configs.size(); ++k) {
                const Configuration& c = r.configs[k];
                CHECK(c.coherent());
                // Padding stability: once in the final state, the
                // configuration freezes.
                if (c.instr.q == m.final_state)
                    in_final = true;
                if (in_final && k + 1 < r.configs.size())
                    CHECK(r.configs[k + 1] == c);
                // Frame condition: consecutive tapes differ at most at the
                // earlier head position.
                if (k + 1 < r.configs.size()) {
                    const Configuration& d = r.configs[k + 1];
                    for (std::size_t i = 0; i < c.tape.cells.size(); ++i)
                        if (static_cast<int>(i) != c.head)
                            CHECK(c.tape.cells[i] == d.tape.cells[i]);
                }
            }
        }
    }
    CHECK(machines_with_runs > 5);  // the generator produces accepting machines
}
