// automata.hpp -- explicit NFA / PDA / k-ary transducer types and operations.
//
// Conventions:
//  * the empty string "" is the epsilon letter (written `eps` in text files);
//  * stack words are stored top-at-right, a push appends;
//  * machines start at (initial, [stack_init]) and accept by final state with
//    arbitrary stack content.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poolcheck/error.hpp"

namespace poolcheck {

using Symbol = std::string;  // "" is epsilon

struct StackOp {
    enum Kind { None, Push, Pop } kind = None;
    Symbol sym;  // meaningful for Push/Pop

    static StackOp none() { return {None, ""}; }
    static StackOp push(Symbol s) { return {Push, std::move(s)}; }
    static StackOp pop(Symbol s) { return {Pop, std::move(s)}; }

    bool operator==(const StackOp&) const = default;
    auto operator<=>(const StackOp&) const = default;
};

struct PdaEdge {
    std::string from;
    Symbol letter;  // "" = epsilon
    StackOp op;
    std::string to;

    bool operator==(const PdaEdge&) const = default;
    auto operator<=>(const PdaEdge&) const = default;
};

struct Pda {
    std::set<std::string> states;
    std::set<Symbol> input_alphabet;
    std::set<Symbol> stack_alphabet;
    std::vector<PdaEdge> edges;
    std::string initial;
    Symbol stack_init;  // dedicated sentinel unless an edge explicitly pops it
    std::set<std::string> finals;

    void add_edge(const std::string& from, const Symbol& letter, StackOp op,
                  const std::string& to);
    void validate() const;  // invariants: memberships, pop symbols in stack alphabet
};

struct NfaEdge {
    std::string from;
    Symbol letter;  // "" = epsilon
    std::string to;

    bool operator==(const NfaEdge&) const = default;
    auto operator<=>(const NfaEdge&) const = default;
};

struct Nfa {
    std::set<std::string> states;
    std::set<Symbol> alphabet;
    std::vector<NfaEdge> edges;
    std::string initial;
    std::set<std::string> finals;

    void add_edge(const std::string& from, const Symbol& letter, const std::string& to);
    void validate() const;
};

// length-preserving k-ary transducer; every edge label tuple is all-epsilon or
// entirely drawn from the alphabet
struct TransducerEdge {
    std::string from;
    std::vector<Symbol> labels;  // size k
    std::string to;

    bool operator==(const TransducerEdge&) const = default;
    auto operator<=>(const TransducerEdge&) const = default;
};

struct Transducer {
    size_t arity = 2;
    std::set<Symbol> alphabet;
    std::set<std::string> states;
    std::vector<TransducerEdge> edges;
    std::string initial;
    std::set<std::string> finals;

    void add_edge(const std::string& from, std::vector<Symbol> labels, const std::string& to);
    void validate() const;
};

// ---- transducer operations ----

bool transducer_contains(const Transducer& t, const std::vector<std::string>& words,
                         char sep = '\0');
// convenience for arity 2 over single-character symbol alphabets: words are
// strings of single-char symbols
bool transducer_contains2(const Transducer& t, const std::string& u, const std::string& v);

// synchronous product of 2-ary transducers: L(product) = L(a) ∩ L(b)
Transducer transducer_product2(const Transducer& a, const Transducer& b);
// relational composition of 2-ary transducers: (u,w) iff ∃v (u,v)∈a ∧ (v,w)∈b
Transducer transducer_compose2(const Transducer& a, const Transducer& b);
Transducer transducer_union(const Transducer& a, const Transducer& b);
// identity transducer over an alphabet (arity 2)
Transducer transducer_identity(const std::set<Symbol>& alphabet);

// enumerate pairs (u,v) in L(t) with |u| = |v| <= max_len (arity 2)
std::vector<std::pair<std::vector<Symbol>, std::vector<Symbol>>> transducer_enumerate2(
    const Transducer& t, size_t max_len);

// ---- PDA operations ----

struct PdaConfig {
    std::string state;
    std::vector<Symbol> stack;  // top at back

    bool operator==(const PdaConfig&) const = default;
    auto operator<=>(const PdaConfig&) const = default;
};

// exact one-step successors (letter read, successor config)
std::vector<std::pair<Symbol, PdaConfig>> pda_step(const Pda& p, const PdaConfig& c);

// exact emptiness: is some final state reachable from (initial, [stack_init])?
bool pda_nonempty(const Pda& p);

// exact acceptance via product with the word automaton plus emptiness
bool pda_accepts(const Pda& p, const std::vector<Symbol>& word);
bool pda_accepts(const Pda& p, const std::string& word);  // single-char symbols

// explicit bounded-stack NFA over states (q, w) with |w| <= h; fails with
// SizeGuardError when more than `max_states` configurations are reachable
Nfa pda_bounded_stack_nfa(const Pda& p, size_t h, size_t max_states = 1000000);

// dual automaton: each edge p -a|v-> q becomes q -a|v̄-> p, initial/final roles
// swapped (single final state picked canonically when |finals| == 1; otherwise a
// fresh initial state with eps-edges)
Pda pda_dual(const Pda& p);

// balanced-pair relation: SL(x,y) iff (x, w) can reach (y, w) without ever
// popping below w, for every w. Returned as a set of (x, y) pairs.
std::set<std::pair<std::string, std::string>> pda_balanced_pairs(const Pda& p);

// ---- NFA operations ----

bool nfa_accepts(const Nfa& a, const std::vector<Symbol>& word);
bool nfa_accepts(const Nfa& a, const std::string& word);

// synchronous product on the shared alphabet (intersection); AlphabetError when
// the alphabets are disjoint
Nfa nfa_product(const Nfa& a, const Nfa& b);

// exactly L(a) restricted to length <= max_len (as vectors of symbols)
std::set<std::vector<Symbol>> nfa_enumerate(const Nfa& a, size_t max_len);
// single-character convenience: each symbol must be one char
std::set<std::string> nfa_enumerate_strings(const Nfa& a, size_t max_len);

// substitute a letter on every edge ("" target = make those edges epsilon)
Nfa nfa_rename_letter(const Nfa& a, const Symbol& from, const Symbol& to);

// NFA accepting all words over the alphabet
Nfa nfa_universal(const std::set<Symbol>& alphabet);
// NFA accepting exactly the given words
Nfa nfa_from_words(const std::set<Symbol>& alphabet,
                   const std::set<std::vector<Symbol>>& words);

Nfa nfa_trim(const Nfa& a);  // drop states not reachable or not co-reachable

// lift an NFA to a PDA with only stack-eps edges (stack sentinel "_Z")
Pda nfa_to_pda(const Nfa& a);

// ---- text formats (one edge per line, `p -a|push:X-> q` style) ----

std::string pda_to_text(const Pda& p);
Pda pda_from_text(const std::string& text);
std::string nfa_to_text(const Nfa& a);
Nfa nfa_from_text(const std::string& text);
std::string transducer_to_text(const Transducer& t);
Transducer transducer_from_text(const std::string& text);

}  // namespace poolcheck
