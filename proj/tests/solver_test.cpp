#include <doctest.h>

#include "testsupport.hpp"

using namespace stablerun;
using testsupport::Rng;

namespace {

GroundProgram ground(const std::string& text) {
    return ground_program(parse_program(text));
}

Interpretation atoms(std::initializer_list<const char*> names) {
    std::vector<Atom> out;
    for (const char* n : names)
        out.push_back(Atom{n, {}});
    return Interpretation(std::move(out));
}

}  // namespace

TEST_CASE("enumerate_stable_models on the classic programs") {
    ModelSet even = enumerate_stable_models(ground("a :- not b. b :- not a."));
    CHECK(even.complete);
    REQUIRE(even.models.size() == 2);
    // Deterministic order: the first pending clause derives a, so the branch
    // with b absent is explored first.
    CHECK(even.models[0] == atoms({"a"}));
    CHECK(even.models[1] == atoms({"b"}));

    ModelSet none = enumerate_stable_models(ground("a :- not a."));
    CHECK(none.complete);
    CHECK(none.models.empty());

    ModelSet loop = enumerate_stable_models(ground("a :- a."));
    CHECK(loop.complete);
    REQUIRE(loop.models.size() == 1);
    CHECK(loop.models[0] == Interpretation{});
}

TEST_CASE("an encoded machine with three valid runs yields three models") {
    Machine m;
    m.states = {"s0", "q1", "f"};
    m.input_alphabet = {"1"};
    m.start = "s0";
    m.final_state = "f";
    m.delta = {Instruction{"s0", "1", "f", "1", Direction::Stay},
               Instruction{"s0", "1", "f", "B", Direction::Stay},
               Instruction{"s0", "1", "f", "1", Direction::Right}};
    m = normalize_machine(m);
    RuntimePolynomial p({2});
    std::vector<std::string> input = {"1"};
    std::vector<Run> runs = enumerate_valid_runs(m, p, input);
    REQUIRE(runs.size() == 3);  // oracle count, cross-checked by hand

    EncodingInstance inst = build_edb(m, p, input);
    ModelSet ms = enumerate_stable_models(relational_ground(inst.full_program()));
    CHECK(ms.complete);
    CHECK(ms.models.size() == 3);
}

TEST_CASE("enumerate_supported_models_bruteforce") {
    ModelSet loop = enumerate_supported_models_bruteforce(ground("a :- a."));
    CHECK(loop.complete);
    REQUIRE(loop.models.size() == 2);
    CHECK(loop.models[0] == Interpretation{});
    CHECK(loop.models[1] == atoms({"a"}));

    ModelSet even = enumerate_supported_models_bruteforce(ground("a :- not b. b :- not a."));
    REQUIRE(even.models.size() == 2);
    CHECK(even.contains(atoms({"a"})));
    CHECK(even.contains(atoms({"b"})));

    ModelSet fact = enumerate_supported_models_bruteforce(ground("a."));
    REQUIRE(fact.models.size() == 1);
    CHECK(fact.models[0] == atoms({"a"}));
}

TEST_CASE("brute force guards against large bases") {
    std::ostringstream big;
    for (int i = 0; i < 23; ++i)
        big << "a" << i << ".\n";
    CHECK_THROWS_AS(enumerate_supported_models_bruteforce(ground(big.str())),
                    BaseTooLargeError);
}

TEST_CASE("is_antichain") {
    ModelSet ab;
    ab.models = {atoms({"a"}), atoms({"b"})};
    CHECK(is_antichain(ab));
    ModelSet nested;
    nested.models = {atoms({"a"}), atoms({"a", "b"})};
    CHECK_FALSE(is_antichain(nested));
    CHECK(is_antichain(ModelSet{}));
}

TEST_CASE("limits truncate the enumeration without losing soundness") {
    GroundProgram gp = ground(
        "a :- not b. b :- not a. c :- not d. d :- not c. e :- not f. f :- not e.");
    ModelSet all = enumerate_stable_models(gp);
    CHECK(all.complete);
    CHECK(all.models.size() == 8);

    SolveLimits two;
    two.max_models = 2;
    ModelSet truncated = enumerate_stable_models(gp, two);
    CHECK_FALSE(truncated.complete);
    CHECK(truncated.models.size() == 2);
    for (const Interpretation& m : truncated.models)
        CHECK(is_stable(gp, m));

    SolveLimits shallow;
    shallow.max_decisions = 1;
    ModelSet cut = enumerate_stable_models(gp, shallow);
    CHECK_FALSE(cut.complete);
    for (const Interpretation& m : cut.models)
        CHECK(is_stable(gp, m));
}

TEST_CASE("property: solver equals the brute-force filter on small programs") {
    Rng rng(5150);
    for (int iter = 0; iter < 250; ++iter) {
        Program p = testsupport::random_ground_program(rng, 8, 14);
        GroundProgram gp = ground_program(p);
        ModelSet ms = enumerate_stable_models(gp);
        REQUIRE(ms.complete);
        for (const Interpretation& m : ms.models)
            CHECK(is_stable(gp, m));
        std::vector<Interpretation> brute = testsupport::brute_force_stable(gp);
        CHECK(testsupport::same_model_sets(ms.models, brute));
        CHECK(is_antichain(ms));
        // No duplicates.
        std::vector<Interpretation> sorted = ms.models;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
}

TEST_CASE("property: stable models are a subset of the supported models") {
    Rng rng(616);
    for (int iter = 0; iter < 150; ++iter) {
        Program p = testsupport::random_ground_program(rng, 6, 12);
        GroundProgram gp = ground_program(p);
        ModelSet stable = enumerate_stable_models(gp);
        ModelSet supported = enumerate_supported_models_bruteforce(gp);
        REQUIRE(stable.complete);
        for (const Interpretation& m : stable.models)
            CHECK(supported.contains(m));
    }
}

TEST_CASE("enumeration order is deterministic across calls") {
    Rng rng(99887);
    for (int iter = 0; iter < 40; ++iter) {
        Program p = testsupport::random_ground_program(rng, 8, 14);
        GroundProgram gp = ground_program(p);
        ModelSet first = enumerate_stable_models(gp);
        ModelSet second = enumerate_stable_models(gp);
        CHECK(first.models == second.models);  // elementwise, order included
    }
}

TEST_CASE("the empty program has exactly the empty stable model") {
    ModelSet ms = enumerate_stable_models(GroundProgram::Builder().build());
    CHECK(ms.complete);
    REQUIRE(ms.models.size() == 1);
    CHECK(ms.models[0] == Interpretation{});
}
