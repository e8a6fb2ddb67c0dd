// vass.hpp -- VASS and TCVASS, an exact backward-coverability decision
// procedure, and the explicit counting-VASS reduction from DCPS.
#pragma once

#include <map>

#include "poolcheck/bignum.hpp"
#include "poolcheck/dcbp.hpp"

namespace poolcheck {

struct VassEdge {
    std::string from;
    std::map<std::string, int> delta;  // sparse, entries in {-1, 0, 1}
    std::string to;
};

struct Vass {
    std::set<std::string> states;
    std::set<std::string> counters;
    std::vector<VassEdge> edges;
    std::string initial;
    std::string final;

    void add_edge(const std::string& from, std::map<std::string, int> delta,
                  const std::string& to);
    void validate() const;
};

std::string vass_to_text(const Vass& v);
Vass vass_from_text(const std::string& text);

struct Marking {
    std::string state;
    std::map<std::string, uint64_t> counters;  // sparse

    bool leq(const Marking& o) const;  // same state and componentwise <=
    bool operator==(const Marking&) const = default;
};

// finite antichain of minimal elements of an upward-closed set of markings
class UcSet {
public:
    // returns true when m was a new minimal element (dominated elements are
    // pruned from the active antichain)
    bool add_minimal(const Marking& m);
    bool covers_from_below(const Marking& m) const;  // exists b in basis, b <= m
    const std::vector<Marking>& basis() const { return basis_; }
    bool is_antichain() const;

private:
    std::vector<Marking> basis_;
};

struct CoverVerdict {
    bool coverable = false;
    std::vector<size_t> edge_sequence;   // replayable forward from (q0, 0)
    std::vector<Marking> final_basis;    // on the uncoverable side: the fixpoint
};

// exact backward coverability with minimal-basis antichains
CoverVerdict cover(const Vass& v, size_t max_basis = 2000000);

// run-validity of an edge sequence from (q0, 0); `accepting` additionally
// requires the run to end in the final state
bool vass_replay(const Vass& v, const std::vector<size_t>& edges, bool accepting);

// ------------------------------------------------------------- counting VASS

struct CountingVassOptions {
    size_t max_states = 1000000;
};

// VASS whose final state is coverable iff some global in `targets` is
// K-context-bounded, N-pool reachable in sys
Vass counting_vass(const Dcps& sys, uint64_t K, PoolBound N,
                   const std::set<std::string>& targets,
                   const CountingVassOptions& opts = {});

// preprocessing: swap- and terminate-self-rules at the targets so that target
// reachability always manifests at a schedule point
Dcps counting_vass_preprocess(const Dcps& sys, const std::set<std::string>& targets);

// --------------------------------------------------------------- TCVASS

struct Tcvass {
    size_t num_counters = 0;      // I = {1, ..., d}
    std::set<Symbol> delta;       // transducer alphabet, contains 0 and 1
    Nat tape_len;                 // M, binary
    std::vector<Transducer> inc;  // T_i, one per counter
    std::vector<Transducer> dec;  // T_i-bar
    Transducer eps;               // T_eps
};

// explicit VASS over reachable tape states; q0 = 0^M, qf = 1^M
Vass tcvass_expand(const Tcvass& t, const ExpansionBudget& budget);

std::string tcvass_to_text(const Tcvass& t);
Tcvass tcvass_from_text(const std::string& text);

}  // namespace poolcheck
