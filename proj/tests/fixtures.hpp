// shared hand-built fixtures for the unit and acceptance suites
#pragma once

#include <random>

#include "poolcheck/automata.hpp"

namespace poolcheck::fixtures {

// PDA for { a^n b^n : n >= 0 }: p -a|push:X-> p, p -eps-> q, q -b|pop:X-> q,
// plus a bottom check popping the sentinel so unmatched a's do not accept
inline Pda anbn() {
    Pda p;
    p.initial = "p";
    p.stack_init = "Z0";
    p.stack_alphabet = {"Z0", "X"};
    p.finals = {"f"};
    p.add_edge("p", "a", StackOp::push("X"), "p");
    p.add_edge("p", "", StackOp::none(), "q");
    p.add_edge("q", "b", StackOp::pop("X"), "q");
    p.add_edge("q", "", StackOp::pop("Z0"), "f");
    p.states = {"p", "q", "f"};
    return p;
}

// PDA for even-length palindromes { w w^R : w in {a,b}* }
inline Pda palindrome() {
    Pda p;
    p.initial = "p";
    p.stack_init = "Z0";
    p.stack_alphabet = {"Z0", "A", "B"};
    p.finals = {"f"};
    p.add_edge("p", "a", StackOp::push("A"), "p");
    p.add_edge("p", "b", StackOp::push("B"), "p");
    p.add_edge("p", "", StackOp::none(), "q");
    p.add_edge("q", "a", StackOp::pop("A"), "q");
    p.add_edge("q", "b", StackOp::pop("B"), "q");
    p.add_edge("q", "", StackOp::pop("Z0"), "f");
    p.states = {"p", "q", "f"};
    return p;
}

// PDA with the empty language
inline Pda empty_lang() {
    Pda p;
    p.initial = "p";
    p.stack_init = "Z0";
    p.stack_alphabet = {"Z0"};
    p.input_alphabet = {"a", "b"};
    p.states = {"p", "dead"};
    p.finals = {"dead"};
    return p;
}

// PDA accepting exactly {"ab"}
inline Pda single_ab() {
    Pda p;
    p.initial = "0";
    p.stack_init = "Z0";
    p.stack_alphabet = {"Z0"};
    p.finals = {"2"};
    p.add_edge("0", "a", StackOp::none(), "1");
    p.add_edge("1", "b", StackOp::none(), "2");
    return p;
}

// random small PDA: <= max_states states, <= 2 stack symbols, alphabet {a,b}
inline Pda random_pda(std::mt19937& rng, int max_states = 4, int n_edges = 8) {
    std::uniform_int_distribution<int> st(0, max_states - 1);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> sym(0, 1);
    std::uniform_int_distribution<int> letter(0, 2);
    Pda p;
    p.stack_init = "Z0";
    p.stack_alphabet = {"Z0", "X", "Y"};
    p.input_alphabet = {"a", "b"};
    for (int i = 0; i < max_states; ++i) p.states.insert("s" + std::to_string(i));
    p.initial = "s0";
    p.finals = {"s" + std::to_string(st(rng))};
    for (int i = 0; i < n_edges; ++i) {
        std::string from = "s" + std::to_string(st(rng));
        std::string to = "s" + std::to_string(st(rng));
        Symbol a = letter(rng) == 2 ? "" : (letter(rng) % 2 ? "a" : "b");
        StackOp op = StackOp::none();
        int k = kind(rng);
        if (k == 1) op = StackOp::push(sym(rng) ? "X" : "Y");
        if (k == 2) op = StackOp::pop(sym(rng) ? "X" : "Y");
        p.add_edge(from, a, op, to);
    }
    return p;
}

// a* b* NFA
inline Nfa astar_bstar() {
    Nfa m;
    m.initial = "0";
    m.finals = {"0", "1"};
    m.add_edge("0", "a", "0");
    m.add_edge("0", "", "1");
    m.add_edge("1", "b", "1");
    return m;
}

inline Transducer identity01() {
    return transducer_identity({"0", "1"});
}

// binary decrement-by-1 on equal-length words, most significant bit first
inline Transducer decrement_binary() {
    Transducer t;
    t.arity = 2;
    t.initial = "s";
    t.finals = {"t"};
    t.add_edge("s", {"0", "0"}, "s");
    t.add_edge("s", {"1", "1"}, "s");
    t.add_edge("s", {"1", "0"}, "t");
    t.add_edge("t", {"0", "1"}, "t");
    return t;
}

}  // namespace poolcheck::fixtures

#include "poolcheck/dcbp.hpp"

namespace poolcheck::fixtures {

// random small DCPS: |G| <= 3, |Γ| <= 2, <= `n_rules` rules across families
inline Dcps random_dcps(std::mt19937& rng, int n_rules = 8) {
    Dcps d;
    d.globals = {"g0", "g1", "g2"};
    d.stack_alphabet = {"y", "b"};
    d.initial_global = "g0";
    d.initial_symbol = "y";
    auto g = [&]() { return "g" + std::to_string(rng() % 3); };
    auto s = [&]() { return rng() % 2 ? "y" : "b"; };
    // always keep at least one way to start the initial task
    d.resume.push_back({"g0", g(), "y"});
    std::uniform_int_distribution<int> family(0, 3);
    for (int i = 0; i < n_rules; ++i) {
        switch (family(rng)) {
            case 0: {
                std::vector<Symbol> push;
                int np = static_cast<int>(rng() % 3);
                for (int j = 0; j < np; ++j) push.push_back(s());
                std::optional<Symbol> spawn;
                if (rng() % 2) spawn = s();
                d.creation.push_back({g(), s(), g(), push, spawn});
                break;
            }
            case 1: {
                std::vector<Symbol> push{s()};
                if (rng() % 2) push.push_back(s());
                d.interrupt.push_back({g(), s(), g(), push});
                break;
            }
            case 2:
                d.resume.push_back({g(), g(), s()});
                break;
            default:
                d.terminate.push_back({g(), g()});
        }
    }
    d.validate();
    return d;
}

}  // namespace poolcheck::fixtures
