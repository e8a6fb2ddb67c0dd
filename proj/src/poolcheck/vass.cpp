#include "poolcheck/vass.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "poolcheck/downclosure.hpp"

namespace poolcheck {

// ------------------------------------------------------------------- basics

void Vass::add_edge(const std::string& from, std::map<std::string, int> delta,
                    const std::string& to) {
    states.insert(from);
    states.insert(to);
    for (auto& [c, d] : delta) {
        if (d < -1 || d > 1) throw FormatError("vass: delta entries must be in {-1,0,1}");
        counters.insert(c);
    }
    edges.push_back({from, std::move(delta), to});
}

void Vass::validate() const {
    if (!states.count(initial)) throw FormatError("vass: initial state unknown");
    if (!states.count(final)) throw FormatError("vass: final state unknown");
    for (auto& e : edges) {
        if (!states.count(e.from) || !states.count(e.to))
            throw FormatError("vass: edge endpoint unknown");
        for (auto& [c, d] : e.delta) {
            if (!counters.count(c)) throw FormatError("vass: unknown counter " + c);
            if (d < -1 || d > 1) throw FormatError("vass: delta out of range");
        }
    }
}

std::string vass_to_text(const Vass& v) {
    std::ostringstream os;
    os << "vass\ncounter";
    for (auto& c : v.counters) os << " " << c;
    os << "\nstate";
    for (auto& s : v.states) os << " " << s;
    os << "\ninit " << v.initial << "\nfinal " << v.final << "\n";
    for (auto& e : v.edges) {
        os << e.from << " -> " << e.to << " [";
        bool first = true;
        for (auto& [c, d] : e.delta) {
            if (d == 0) continue;
            if (!first) os << " ";
            first = false;
            os << c << (d > 0 ? "+1" : "-1");
        }
        os << "]\n";
    }
    return os.str();
}

Vass vass_from_text(const std::string& text) {
    Vass v;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header) {
            if (toks[0] != "vass") throw FormatError("vass_from_text: missing header");
            header = true;
            continue;
        }
        if (toks[0] == "counter") {
            for (size_t i = 1; i < toks.size(); ++i) v.counters.insert(toks[i]);
        } else if (toks[0] == "state") {
            for (size_t i = 1; i < toks.size(); ++i) v.states.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 2) {
            v.initial = toks[1];
            v.states.insert(toks[1]);
        } else if (toks[0] == "final" && toks.size() == 2) {
            v.final = toks[1];
            v.states.insert(toks[1]);
        } else if (toks.size() >= 3 && toks[1] == "->") {
            std::map<std::string, int> delta;
            for (size_t i = 3; i < toks.size(); ++i) {
                std::string tok = toks[i];
                if (tok.front() == '[') tok = tok.substr(1);
                if (!tok.empty() && tok.back() == ']') tok.pop_back();
                if (tok.empty()) continue;
                if (tok.size() < 3) throw FormatError("vass edge delta token: " + tok);
                std::string sign = tok.substr(tok.size() - 2);
                std::string c = tok.substr(0, tok.size() - 2);
                if (sign == "+1") delta[c] = 1;
                else if (sign == "-1") delta[c] = -1;
                else throw FormatError("vass edge delta token: " + tok);
            }
            std::string to = toks[2];
            v.add_edge(toks[0], std::move(delta), to);
        } else {
            throw FormatError("vass_from_text: cannot parse line: " + line);
        }
    }
    v.validate();
    return v;
}

// ------------------------------------------------------------------ UcSet

bool Marking::leq(const Marking& o) const {
    if (state != o.state) return false;
    for (auto& [c, n] : counters) {
        if (n == 0) continue;
        auto it = o.counters.find(c);
        if (it == o.counters.end() || it->second < n) return false;
    }
    return true;
}

bool UcSet::covers_from_below(const Marking& m) const {
    for (auto& b : basis_)
        if (b.leq(m)) return true;
    return false;
}

bool UcSet::add_minimal(const Marking& m) {
    if (covers_from_below(m)) return false;
    basis_.erase(std::remove_if(basis_.begin(), basis_.end(),
                                [&](const Marking& b) { return m.leq(b); }),
                 basis_.end());
    basis_.push_back(m);
    return true;
}

bool UcSet::is_antichain() const {
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = 0; j < basis_.size(); ++j)
            if (i != j && basis_[i].leq(basis_[j])) return false;
    return true;
}

// ------------------------------------------------------------------- cover

namespace {

Marking pred_marking(const Marking& target, const VassEdge& e) {
    // least u with u + delta >= target and u >= 0 and u + delta >= 0
    Marking m;
    m.state = e.from;
    m.counters = target.counters;
    for (auto& [c, d] : e.delta) {
        int64_t t = 0;
        if (auto it = target.counters.find(c); it != target.counters.end())
            t = static_cast<int64_t>(it->second);
        int64_t need = std::max<int64_t>({t - d, -static_cast<int64_t>(d), 0});
        if (need == 0) m.counters.erase(c);
        else m.counters[c] = static_cast<uint64_t>(need);
    }
    return m;
}

}  // namespace

CoverVerdict cover(const Vass& v, size_t max_basis) {
    v.validate();
    // backward reachability over upward-closed sets; each stored element keeps
    // the edge and successor it was derived from so a witness can be replayed
    struct Elem {
        Marking m;
        long parent;     // index into store, -1 for the target seed
        size_t edge;     // edge applied to get from m to store[parent].m
    };
    std::vector<Elem> store;
    UcSet antichain;
    std::deque<size_t> work;

    Marking seed{v.final, {}};
    store.push_back({seed, -1, 0});
    antichain.add_minimal(seed);
    work.push_back(0);

    auto initial_covered = [&](const Marking& m) {
        return m.state == v.initial && m.counters.empty();
    };
    if (initial_covered(seed)) return {true, {}, {}};

    // index edges by target state
    std::map<std::string, std::vector<size_t>> by_to;
    for (size_t i = 0; i < v.edges.size(); ++i) by_to[v.edges[i].to].push_back(i);

    while (!work.empty()) {
        size_t idx = work.front();
        work.pop_front();
        Marking cur = store[idx].m;
        // a dominated element may still linger on the worklist; skip it
        if (!antichain.covers_from_below(cur)) continue;
        for (size_t ei : by_to[cur.state]) {
            Marking p = pred_marking(cur, v.edges[ei]);
            if (!antichain.add_minimal(p)) continue;
            store.push_back({p, static_cast<long>(idx), ei});
            if (store.size() > max_basis)
                throw SizeGuardError("cover: basis store exceeds ceiling");
            if (initial_covered(p)) {
                // forward witness: follow parents from p to the seed
                std::vector<size_t> seq;
                long i = static_cast<long>(store.size()) - 1;
                while (store[i].parent >= 0) {
                    seq.push_back(store[i].edge);
                    i = store[i].parent;
                }
                return {true, seq, {}};
            }
            work.push_back(store.size() - 1);
        }
    }
    CoverVerdict out;
    out.coverable = false;
    out.final_basis = antichain.basis();
    return out;
}

bool vass_replay(const Vass& v, const std::vector<size_t>& edges, bool accepting) {
    std::string q = v.initial;
    std::map<std::string, int64_t> u;
    for (size_t ei : edges) {
        if (ei >= v.edges.size()) return false;
        const VassEdge& e = v.edges[ei];
        if (e.from != q) return false;
        for (auto& [c, d] : e.delta) {
            u[c] += d;
            if (u[c] < 0) return false;
        }
        q = e.to;
    }
    return accepting ? q == v.final : true;
}

// ------------------------------------------------------------ counting VASS

Dcps counting_vass_preprocess(const Dcps& sys, const std::set<std::string>& targets) {
    Dcps out = sys;
    for (auto& g : targets) {
        if (!out.globals.count(g)) throw FormatError("counting_vass: unknown target " + g);
        for (auto& gamma : out.stack_alphabet)
            out.interrupt.push_back({g, gamma, g, {gamma}});
        out.terminate.push_back({g, g});
    }
    return out;
}

Vass counting_vass(const Dcps& sys0, uint64_t K, PoolBound N,
                   const std::set<std::string>& targets, const CountingVassOptions& opts) {
    sys0.validate();
    if (N && *N == 0) throw FormatError("counting_vass: the pool bound must be positive");
    Dcps sys = counting_vass_preprocess(sys0, targets);

    // spawnable symbols: the initial symbol plus everything spawned by E_c
    std::set<Symbol> spawnable{sys.initial_symbol};
    for (auto& r : sys.creation)
        if (r.spawn) spawnable.insert(*r.spawn);

    // task types: (post-resume global, fresh-task symbol)
    std::set<std::pair<std::string, Symbol>> types;
    for (auto& r : sys.resume)
        if (spawnable.count(r.gamma)) types.insert({r.g2, r.gamma});

    auto type_tag = [](const std::pair<std::string, Symbol>& t) {
        return t.first + "," + t.second;
    };

    Vass v;
    v.initial = "Init";
    v.states.insert("Init");
    v.final = "Final";
    v.states.insert("Final");
    auto sch = [](const std::string& g) { return "Sch:" + g; };
    auto run = [&](const std::pair<std::string, Symbol>& t, const std::string& q) {
        return "Run:" + type_tag(t) + "|" + q;
    };
    const std::string slot = "slot";
    auto pend = [](const Symbol& g) { return "pend:" + g; };
    const std::string fresh0 = "fresh0";

    // init: pump N-1 free slots (the initial task holds one), park the initial
    // task, land at the initial schedule point
    if (N) {
        if (*N > opts.max_states)
            throw SizeGuardError("counting_vass: explicit pool bound exceeds budget");
        std::string cur = "Init";
        for (uint64_t i = 0; i + 1 < *N; ++i) {
            std::string nxt = "Init" + std::to_string(i + 1);
            v.add_edge(cur, {{slot, 1}}, nxt);
            cur = nxt;
        }
        v.add_edge(cur, {{fresh0, 1}}, sch(sys.initial_global));
    } else {
        v.add_edge("Init", {{fresh0, 1}}, sch(sys.initial_global));
    }

    // per-type NFAs for the Theta-preserving downclosures
    std::map<std::pair<std::string, Symbol>, Nfa> nfas;
    for (auto& t : types) {
        Pda task = task_pda_explicit(sys, t.first, t.second);
        std::set<Symbol> theta;
        for (auto& a : task.input_alphabet)
            if (task_letter_decode(a)) theta.insert(a);
        ThetaClosureSpec spec{theta, Nat(K + 1)};
        Nfa a = theta_downclosure_nfa(task, spec, opts.max_states);
        nfas[t] = nfa_trim(a);
    }

    size_t total_states = 0;
    for (auto& [t, a] : nfas) total_states += a.states.size();
    if (total_states > opts.max_states)
        throw SizeGuardError("counting_vass: task automata exceed budget");

    // start edges: E_r rules on spawnable symbols
    for (auto& r : sys.resume) {
        if (!spawnable.count(r.gamma)) continue;
        std::pair<std::string, Symbol> t{r.g2, r.gamma};
        const Nfa& a = nfas.at(t);
        if (!a.states.count(a.initial)) continue;
        // from the buffer: consume a pending task and a pool slot
        std::map<std::string, int> d{{pend(r.gamma), -1}};
        if (N) d[slot] = -1;
        v.add_edge(sch(r.g), d, run(t, a.initial));
        // the initial task, already holding its slot
        if (r.gamma == sys.initial_symbol)
            v.add_edge(sch(r.g), {{fresh0, -1}}, run(t, a.initial));
    }

    // NFA edges
    std::set<std::tuple<std::string, std::string, std::string, std::string>> park_counters;
    for (auto& [t, a] : nfas) {
        for (auto& e : a.edges) {
            if (e.letter.empty()) {
                v.add_edge(run(t, e.from), {}, run(t, e.to));
                continue;
            }
            auto l = task_letter_decode(e.letter);
            if (!l) {
                // spawn letter
                v.add_edge(run(t, e.from), {{pend(e.letter), 1}}, run(t, e.to));
            } else if (l->kind == TaskLetter::Jump) {
                std::string park = "park:" + type_tag(t) + "|" + e.to + "|" + l->top + "|" + l->g2;
                park_counters.insert({type_tag(t), e.to, l->top, l->g2});
                v.add_edge(run(t, e.from), {{park, 1}}, sch(l->g1));
            } else if (l->kind == TaskLetter::TermProper) {
                std::map<std::string, int> d;
                if (N) d[slot] = 1;
                v.add_edge(run(t, e.from), d, sch(l->g));
            } else {  // TermSwap: the thread keeps its pool slot forever
                v.add_edge(run(t, e.from), {}, sch(l->g));
            }
        }
    }

    // unpark edges: E_r rules matched against parked interfaces
    for (auto& r : sys.resume) {
        for (auto& [tag, q2, top, g2] : park_counters) {
            if (r.gamma != top || r.g2 != g2) continue;
            std::string park = "park:" + tag + "|" + q2 + "|" + top + "|" + g2;
            v.add_edge(sch(r.g), {{park, -1}}, "Run:" + tag + "|" + q2);
        }
    }

    // accept from target schedule points
    for (auto& g : targets) v.add_edge(sch(g), {}, "Final");

    if (v.states.size() > opts.max_states || v.counters.size() > opts.max_states)
        throw SizeGuardError("counting_vass: VASS exceeds budget");
    v.validate();
    return v;
}

// ------------------------------------------------------------------ TCVASS

Vass tcvass_expand(const Tcvass& t, const ExpansionBudget& budget) {
    if (!t.tape_len.fits_u64())
        throw SizeGuardError("tcvass_expand: tape length too large");
    uint64_t M = t.tape_len.to_u64();
    // |delta|^M <= max_states
    double est = 1;
    for (uint64_t i = 0; i < M; ++i) {
        est *= static_cast<double>(t.delta.size());
        if (est > static_cast<double>(budget.max_states))
            throw SizeGuardError("tcvass_expand: |delta|^M exceeds budget");
    }
    std::string q0(M, '0'), qf(M, '1');
    Vass v;
    v.initial = "s" + q0;
    v.final = "s" + qf;
    v.states.insert(v.initial);
    v.states.insert(v.final);
    for (size_t i = 0; i < t.num_counters; ++i) v.counters.insert("c" + std::to_string(i + 1));

    // reachable-state BFS over transducer images
    std::set<std::string> seen{q0};
    std::deque<std::string> work{q0};
    while (!work.empty()) {
        std::string w = work.front();
        work.pop_front();
        auto expand_with = [&](const Transducer& tr, std::map<std::string, int> delta) {
            for (auto& o : transducer_outputs(tr, w)) {
                if (o.size() != w.size()) continue;
                v.add_edge("s" + w, delta, "s" + o);
                if (seen.insert(o).second) {
                    if (seen.size() > budget.max_states)
                        throw SizeGuardError("tcvass_expand: reachable states exceed budget");
                    work.push_back(o);
                }
            }
        };
        expand_with(t.eps, {});
        for (size_t i = 0; i < t.num_counters; ++i) {
            expand_with(t.inc[i], {{"c" + std::to_string(i + 1), 1}});
            expand_with(t.dec[i], {{"c" + std::to_string(i + 1), -1}});
        }
    }
    return v;
}

std::string tcvass_to_text(const Tcvass& t) {
    std::ostringstream os;
    os << "tcvass\ncounters " << t.num_counters << "\nalphabet";
    for (auto& s : t.delta) os << " " << s;
    os << "\ntape " << t.tape_len.to_decimal() << "\n";
    for (size_t i = 0; i < t.num_counters; ++i) {
        os << "begin inc " << (i + 1) << "\n" << transducer_to_text(t.inc[i]) << "end\n";
        os << "begin dec " << (i + 1) << "\n" << transducer_to_text(t.dec[i]) << "end\n";
    }
    os << "begin eps\n" << transducer_to_text(t.eps) << "end\n";
    return os.str();
}

Tcvass tcvass_from_text(const std::string& text) {
    Tcvass t;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header) {
            if (toks[0] != "tcvass") throw FormatError("tcvass_from_text: missing header");
            header = true;
            continue;
        }
        if (toks[0] == "counters" && toks.size() == 2) {
            t.num_counters = std::stoul(toks[1]);
            t.inc.resize(t.num_counters);
            t.dec.resize(t.num_counters);
        } else if (toks[0] == "alphabet") {
            for (size_t i = 1; i < toks.size(); ++i) t.delta.insert(toks[i]);
        } else if (toks[0] == "tape" && toks.size() == 2) {
            t.tape_len = Nat::from_decimal(toks[1]);
        } else if (toks[0] == "begin") {
            std::ostringstream body;
            while (std::getline(is, line)) {
                std::istringstream l2(line);
                std::string first;
                l2 >> first;
                if (first == "end") break;
                body << line << "\n";
            }
            Transducer tr = transducer_from_text(body.str());
            if (toks[1] == "inc") t.inc.at(std::stoul(toks[2]) - 1) = std::move(tr);
            else if (toks[1] == "dec") t.dec.at(std::stoul(toks[2]) - 1) = std::move(tr);
            else if (toks[1] == "eps") t.eps = std::move(tr);
            else throw FormatError("tcvass_from_text: unknown block " + toks[1]);
        } else {
            throw FormatError("tcvass_from_text: cannot parse line: " + line);
        }
    }
    return t;
}

}  // namespace poolcheck
