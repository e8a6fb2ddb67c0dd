#include <deque>
#include <set>
#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "poolcheck/automata.hpp"

using namespace poolcheck;

TEST_CASE("transducer_contains identity") {
    auto t = fixtures::identity01();
    CHECK(transducer_contains2(t, "01", "01"));
    CHECK_FALSE(transducer_contains2(t, "01", "10"));
    CHECK(transducer_contains2(t, "", ""));
    CHECK_FALSE(transducer_contains2(t, "0", "00"));  // length preservation
}

TEST_CASE("transducer_contains arity error") {
    auto t = fixtures::identity01();
    CHECK_THROWS_AS(transducer_contains(t, {"0", "0", "0"}), ArityError);
}

TEST_CASE("binary decrementer") {
    auto t = fixtures::decrement_binary();
    CHECK(transducer_contains2(t, "100", "011"));
    // oracle: every accepting run of length <= 3, enumerated independently
    auto pairs = transducer_enumerate2(t, 3);
    std::set<std::pair<std::string, std::string>> got;
    for (auto& [u, v] : pairs) {
        std::string su, sv;
        for (auto& s : u) su += s;
        for (auto& s : v) sv += s;
        got.insert({su, sv});
    }
    std::set<std::pair<std::string, std::string>> expect = {
        {"1", "0"},     {"01", "00"},   {"10", "01"},   {"11", "10"},
        {"001", "000"}, {"010", "001"}, {"011", "010"}, {"100", "011"},
        {"101", "100"}, {"110", "101"}, {"111", "110"}};
    CHECK(got == expect);
}

TEST_CASE("pda_step cases") {
    auto p = fixtures::anbn();
    // pop edges on an empty stack are excluded
    auto succ0 = pda_step(p, {"q", {}});
    CHECK(succ0.empty());
    // push edge at (p, [Z0]) produces the pushed configuration
    auto succ1 = pda_step(p, {"p", {"Z0"}});
    bool found_push = false;
    for (auto& [a, c] : succ1)
        if (a == "a" && c.state == "p" && c.stack == std::vector<Symbol>{"Z0", "X"})
            found_push = true;
    CHECK(found_push);
    // hand enumeration at (p, [X]): the push edge and the eps edge apply
    auto succ2 = pda_step(p, {"p", {"X"}});
    CHECK(succ2.size() == 2);
}

TEST_CASE("pda_accepts") {
    auto p = fixtures::anbn();
    CHECK(pda_accepts(p, "aabb"));
    CHECK_FALSE(pda_accepts(p, "aab"));
    CHECK_FALSE(pda_accepts(p, "ba"));
    CHECK(pda_accepts(p, ""));  // q reachable by eps, wait: initial p is not final
    // ^ "" is accepted because p -eps-> q reaches the final state on the empty word
    Pda init_final = fixtures::anbn();
    init_final.finals = {"p"};
    CHECK(pda_accepts(init_final, ""));  // empty run, initial state final
    CHECK_THROWS_AS(pda_accepts(p, "ax"), AlphabetError);
}

TEST_CASE("pda_accepts agrees with depth-bounded search on the fixture") {
    auto p = fixtures::anbn();
    // exhaustive depth-bounded run search (independent oracle)
    auto search_accepts = [&](const std::string& w, size_t depth) {
        struct Node { PdaConfig c; size_t pos; size_t steps; };
        std::deque<Node> work;
        work.push_back({{p.initial, {p.stack_init}}, 0, 0});
        while (!work.empty()) {
            auto [c, pos, steps] = work.front();
            work.pop_front();
            if (pos == w.size() && p.finals.count(c.state)) return true;
            if (steps == depth) continue;
            for (auto& [a, next] : pda_step(p, c)) {
                if (a.empty()) work.push_back({next, pos, steps + 1});
                else if (pos < w.size() && a == std::string(1, w[pos]))
                    work.push_back({next, pos + 1, steps + 1});
            }
        }
        return false;
    };
    for (const char* w : {"", "ab", "aabb", "aaabbb", "aab", "abb", "ba", "aa"}) {
        bool exact = pda_accepts(p, std::string(w));
        bool search = search_accepts(w, 8);
        if (search) CHECK(exact);       // search acceptance implies exact acceptance
        if (!exact) CHECK_FALSE(search);  // exact rejection: search never accepts
    }
}

TEST_CASE("pda_bounded_stack_nfa") {
    auto p = fixtures::anbn();
    auto n2 = pda_bounded_stack_nfa(p, 2);
    CHECK(nfa_accepts(n2, "aabb"));
    CHECK_FALSE(nfa_accepts(n2, "aaabbb"));
    // h = 0: no push is ever enabled
    auto n0 = pda_bounded_stack_nfa(p, 0);
    CHECK(nfa_accepts(n0, ""));
    CHECK_FALSE(nfa_accepts(n0, "ab"));
    // monotonicity in h up to word length 6
    auto n3 = pda_bounded_stack_nfa(p, 3);
    for (auto& w : nfa_enumerate_strings(n2, 6)) CHECK(nfa_accepts(n3, w));
}

TEST_CASE("bounded stack nfa matches exhaustive height-bounded exploration") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        auto p = fixtures::random_pda(rng);
        size_t h = 3;
        auto nfa = pda_bounded_stack_nfa(p, h);
        // oracle: exhaustive run exploration with |stack| <= h+1, word length <= 5
        std::set<std::string> oracle;
        struct Node { PdaConfig c; std::string w; };
        std::set<std::pair<PdaConfig, std::string>> seen;
        std::deque<Node> work;
        PdaConfig init{p.initial, {p.stack_init}};
        work.push_back({init, ""});
        seen.insert({init, ""});
        while (!work.empty()) {
            auto [c, w] = work.front();
            work.pop_front();
            if (p.finals.count(c.state)) oracle.insert(w);
            for (auto& [a, next] : pda_step(p, c)) {
                if (next.stack.size() > h + 1) continue;
                std::string w2 = w + a;
                if (w2.size() > 5) continue;
                if (seen.insert({next, w2}).second) work.push_back({next, w2});
            }
        }
        auto got = nfa_enumerate_strings(nfa, 5);
        CHECK(got == oracle);
    }
}

TEST_CASE("pda_dual") {
    auto p = fixtures::anbn();
    auto d = pda_dual(p);
    CHECK(pda_accepts(d, "bbaa"));
    CHECK_FALSE(pda_accepts(d, "aabb"));
    // involution on edges
    auto dd = pda_dual(d);
    auto sort_edges = [](Pda x) {
        std::sort(x.edges.begin(), x.edges.end());
        return x.edges;
    };
    CHECK(sort_edges(dd) == sort_edges(p));
    // single-edge eps case
    Pda s;
    s.initial = "p";
    s.stack_init = "Z";
    s.stack_alphabet = {"Z"};
    s.finals = {"q"};
    s.add_edge("p", "a", StackOp::none(), "q");
    auto sd = pda_dual(s);
    REQUIRE(sd.edges.size() == 1);
    CHECK(sd.edges[0] == PdaEdge{"q", "a", StackOp::none(), "p"});
}

TEST_CASE("nfa product and enumeration") {
    auto m = fixtures::astar_bstar();
    auto u = nfa_universal({"a", "b"});
    auto prod = nfa_product(m, u);
    for (size_t len = 0; len <= 5; ++len) {
        CHECK(nfa_enumerate(prod, len) == nfa_enumerate(m, len));
    }
    auto words = nfa_enumerate_strings(m, 2);
    CHECK(words == std::set<std::string>{"", "a", "b", "aa", "ab", "bb"});
    Nfa x;
    x.initial = "0";
    x.finals = {"0"};
    x.add_edge("0", "c", "0");
    CHECK_THROWS_AS(nfa_product(m, x), AlphabetError);
}

TEST_CASE("nfa rename letter") {
    // language: interleavings of "ab" with '#'s; rename '#' to eps
    Nfa m;
    m.initial = "0";
    m.finals = {"2"};
    m.add_edge("0", "#", "0");
    m.add_edge("0", "a", "1");
    m.add_edge("1", "#", "1");
    m.add_edge("1", "b", "2");
    m.add_edge("2", "#", "2");
    auto r = nfa_rename_letter(m, "#", "");
    CHECK(nfa_accepts(r, "ab"));
    CHECK_FALSE(nfa_accepts(r, "a"));
    // oracle: r accepts w iff m accepts some padding of w with #s (<= length 6)
    auto pads = [&](const std::string& w) {
        std::deque<std::string> work{w};
        std::set<std::string> seen{w};
        while (!work.empty()) {
            auto cur = work.front();
            work.pop_front();
            if (nfa_accepts(m, cur)) return true;
            if (cur.size() >= 6) continue;
            for (size_t i = 0; i <= cur.size(); ++i) {
                auto padded = cur.substr(0, i) + "#" + cur.substr(i);
                if (seen.insert(padded).second) work.push_back(padded);
            }
        }
        return false;
    };
    for (const char* w : {"", "a", "b", "ab", "ba", "aab"})
        CHECK(nfa_accepts(r, std::string(w)) == pads(w));
}

TEST_CASE("serialization round trips") {
    auto p = fixtures::anbn();
    auto p2 = pda_from_text(pda_to_text(p));
    CHECK(p2.edges.size() == p.edges.size());
    CHECK(pda_to_text(p2) == pda_to_text(p));
    auto m = fixtures::astar_bstar();
    auto m2 = nfa_from_text(nfa_to_text(m));
    CHECK(nfa_to_text(m2) == nfa_to_text(m));
    auto t = fixtures::decrement_binary();
    auto t2 = transducer_from_text(transducer_to_text(t));
    CHECK(transducer_to_text(t2) == transducer_to_text(t));
}

TEST_CASE("transducer product, compose, union") {
    auto dec = fixtures::decrement_binary();
    auto id = fixtures::identity01();
    auto prod = transducer_product2(dec, id);
    // L(dec) ∩ L(id) = ∅ (decrement never maps u to itself)
    CHECK(transducer_enumerate2(prod, 3).empty());
    auto comp = transducer_compose2(dec, dec);  // subtract 2
    CHECK(transducer_contains2(comp, "101", "011"));
    CHECK_FALSE(transducer_contains2(comp, "101", "100"));
    auto uni = transducer_union(dec, id);
    CHECK(transducer_contains2(uni, "11", "11"));
    CHECK(transducer_contains2(uni, "11", "10"));
    CHECK_FALSE(transducer_contains2(uni, "11", "01"));
}
