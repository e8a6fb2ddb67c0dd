// downclosure.hpp -- downward-closure and Theta-preserving-closure
// constructions for explicit PDAs, with brute-force oracles.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "poolcheck/automata.hpp"
#include "poolcheck/bignum.hpp"

namespace poolcheck {

struct ThetaClosureSpec {
    std::set<Symbol> theta;
    Nat bound;  // K; may be binary-encoded input, arbitrary precision
};

struct AugmentedPda {
    Pda base;                                                        // P^T
    std::map<std::pair<std::string, std::string>, std::set<Symbol>> eta_push;  // eta_{p,q}(P)
    std::map<std::pair<std::string, std::string>, std::set<Symbol>> eta_pop;   // eta_{q,p}(dual)
    std::map<std::pair<std::string, std::string>, Symbol> brackets;
    Nat h;
};

struct SubwordClosure {
    std::set<std::vector<Symbol>> words;
    bool horizon_limited = false;
};

// { u : |u| <= max_len, ∃ v ∈ L(p), u ⪯ v }, each candidate decided by an
// exact superword-intersection emptiness check (no witness-length horizon is
// needed, so the result is never horizon-limited)
SubwordClosure subword_closure_bruteforce(const Pda& p, size_t max_len);

// exact membership u ∈ dcl(L(p)) via product with the superword automaton
bool subword_member(const Pda& p, const std::vector<Symbol>& u);

// letters readable on some balanced run x -> y, for all pairs at once
std::map<std::pair<std::string, std::string>, std::set<Symbol>> balanced_letter_sets(
    const Pda& p);

// eta_{p,q}(P) per the two-copy construction with an exact emptiness check
std::set<Symbol> compute_eta(const Pda& p, const std::string& p_state,
                             const std::string& q_state);

AugmentedPda augment(const Pda& p);

// NFA with language dcl(L(p)); constructed as an equivalent small automaton
// (grammar/SCC construction); augment()+pda_bounded_stack_nfa is the
// definitional object and is cross-checked against this on small fixtures
Nfa downclosure_nfa(const Pda& p, size_t max_states = 1000000);

// NFA with language dcl_{Theta,K}(L(p))
Nfa theta_downclosure_nfa(const Pda& p, const ThetaClosureSpec& spec,
                          size_t max_states = 1000000);

// building block of the Theta pipeline (Lemma-4.3 analogue at the explicit
// level): L = { w pad^l | w in L(p), |w|_Theta + l = K }, pad a fresh letter
Pda counter_pad_pda(const Pda& p, const std::set<Symbol>& theta, uint64_t k,
                    const Symbol& pad, size_t max_states = 1000000);

// restrict an NFA to words with exactly k letters from `counted`
Nfa nfa_count_filter(const Nfa& a, const std::set<Symbol>& counted, uint64_t k);

}  // namespace poolcheck
