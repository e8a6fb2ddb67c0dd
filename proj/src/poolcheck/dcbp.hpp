// dcbp.hpp -- concurrent program models: succinct DCBP and explicit DCPS,
// their operational semantics as a bounded simulator (the ground-truth
// oracle), and explicit task-PDA extraction.
#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "poolcheck/automata.hpp"
#include "poolcheck/multiset.hpp"

namespace poolcheck {

// ------------------------------------------------------------ explicit DCPS

// E_c: g|γ ↪ g'|w' [▷ γ'], |w'| <= 2 (w' top-first)
struct DcpsCreationRule {
    std::string g, gamma, g2;
    std::vector<Symbol> push;
    std::optional<Symbol> spawn;
};
// E_i: g|γ ↦ g'|w', 1 <= |w'| <= 2
struct DcpsInterruptRule {
    std::string g, gamma, g2;
    std::vector<Symbol> push;
};
// E_r: g ↦ g' ◁ γ
struct DcpsResumeRule {
    std::string g, g2, gamma;
};
// E_t: g ↦ g'
struct DcpsTermRule {
    std::string g, g2;
};

struct Dcps {
    std::set<std::string> globals;
    std::set<Symbol> stack_alphabet;
    std::vector<DcpsCreationRule> creation;
    std::vector<DcpsInterruptRule> interrupt;
    std::vector<DcpsResumeRule> resume;
    std::vector<DcpsTermRule> terminate;
    std::string initial_global;
    Symbol initial_symbol;

    void validate() const;
};

std::string dcps_to_text(const Dcps& d);
Dcps dcps_from_text(const std::string& text);

// ------------------------------------------------------------ succinct DCBP

struct Dcbp {
    std::vector<std::string> globals;  // ordered, |globals| = m
    std::vector<std::string> locals;   // ordered, |locals| = n
    std::set<Symbol> stack_alphabet;
    // T_c indexed by (spawned symbol or "" and stack op); transducers relate
    // (m+n)-bit strings
    std::map<std::pair<Symbol, StackOp>, Transducer> creation;
    // T_s indexed by the pushed symbol ("" allowed); (m+n)-bit strings
    std::map<Symbol, Transducer> swap;
    // T_r indexed by the top-of-stack symbol; m-bit strings
    std::map<Symbol, Transducer> resume;
    // T_t; m-bit strings
    Transducer terminate;
    std::string initial_assignment;  // m bits
    Symbol initial_symbol;

    size_t m() const { return globals.size(); }
    size_t n() const { return locals.size(); }
    void validate() const;
};

std::string dcbp_to_text(const Dcbp& d);
Dcbp dcbp_from_text(const std::string& text);

// -------------------------------------------------------------- simulator

// a system is either explicit or succinct; the simulator treats both uniformly
using ConcSystem = std::variant<Dcps, Dcbp>;

struct ThreadState {
    std::string locals;         // "" for DCPS threads
    std::vector<Symbol> stack;  // top at back
    uint32_t switches = 0;

    bool operator==(const ThreadState&) const = default;
    auto operator<=>(const ThreadState&) const = default;
};

struct Configuration {
    std::string global;
    std::optional<ThreadState> active;  // nullopt = schedule point
    std::vector<ThreadState> pool;      // kept sorted (multiset canonical form)
    Multiset<Symbol> buffer;

    void canonicalize();
    bool operator==(const Configuration& o) const;
    bool operator<(const Configuration& o) const;
};

Configuration initial_configuration(const ConcSystem& sys);

// N = nullopt is the infinite-pool sentinel
using PoolBound = std::optional<uint64_t>;

struct Step {
    enum Kind { Thread, Swap, Resume, Terminate, Pick } kind;
    size_t rule = 0;        // rule index within its family (unused for Pick)
    size_t pool_index = 0;  // Resume: index into the sorted pool
    Symbol symbol;          // Pick: which buffer symbol
};

struct Witness {
    std::vector<Step> steps;
};

std::string witness_to_text(const Witness& w);
Witness witness_from_text(const std::string& text);

// exact one-step successors of the active thread (empty when stuck)
std::vector<std::pair<Step, Configuration>> thread_step(const ConcSystem& sys,
                                                        const Configuration& c);
// exact scheduler successors under the bounds; Resume requires switches <= K
std::vector<std::pair<Step, Configuration>> scheduler_step(const ConcSystem& sys,
                                                           const Configuration& c,
                                                           PoolBound N, uint64_t K);

struct SimVerdict {
    bool reachable = false;
    bool exhausted = false;  // the bounded exploration closed the state space
    std::optional<Witness> witness;
    size_t explored = 0;
};

using TargetPredicate = std::function<bool(const std::string& global)>;

// breadth-first exploration of the union step relation up to depth_bound steps
SimVerdict simulate(const ConcSystem& sys, const TargetPredicate& target, PoolBound N,
                    uint64_t K, size_t depth_bound, size_t max_configs = 2000000);

bool replay(const ConcSystem& sys, const Witness& w, PoolBound N, uint64_t K);

// size |c| per the configuration-size formula
uint64_t configuration_size(const ConcSystem& sys, const Configuration& c);

// ------------------------------------------------------- task-PDA extraction

// structured letters of a task-PDA word
struct TaskLetter {
    enum Kind { Spawn, Jump, TermProper, TermSwap } kind;
    Symbol spawned;      // Spawn
    std::string g1, g2;  // Jump: swapped out to g1, resumed at g2
    Symbol top;          // Jump: top of stack at resumption
    std::string g;       // Term*: global state after the final step
};

Symbol task_letter_encode(const TaskLetter& l);
std::optional<TaskLetter> task_letter_decode(const Symbol& s);

// PDA over Γ ∪ jump letters ∪ termination letters whose language is the set of
// spawn/jump/termination sequences realizable by one task started at (g, γ)
Pda task_pda_explicit(const Dcps& sys, const std::string& g, const Symbol& gamma);

// --------------------------------------------------------------- expansion

struct ExpansionBudget {
    size_t max_states = 1000000;
    size_t max_word_length = 64;
};

// explicit DCPS equivalent to the DCBP w.r.t. global reachability: globals are
// (assignment, active-locals-or-none) pairs, stack symbols carry stowed locals
Dcps dcbp_expand_to_dcps(const Dcbp& d, const ExpansionBudget& budget);

// name helpers for the expansion (documented encoding)
std::string expanded_global_name(const std::string& abits, const std::string& lbits,
                                 bool active);
Symbol expanded_symbol_name(const Symbol& gamma, const std::string& lbits);

// set of outputs of a 2-ary bit transducer for a fixed input
std::set<std::string> transducer_outputs(const Transducer& t, const std::string& input);

}  // namespace poolcheck
