#include "poolcheck/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace poolcheck {

// ---------------------------------------------------------------- validation

void Pda::add_edge(const std::string& from, const Symbol& letter, StackOp op,
                   const std::string& to) {
    states.insert(from);
    states.insert(to);
    if (!letter.empty()) input_alphabet.insert(letter);
    if (op.kind != StackOp::None) stack_alphabet.insert(op.sym);
    edges.push_back({from, letter, std::move(op), to});
}

void Pda::validate() const {
    if (!states.count(initial)) throw FormatError("pda: initial state not in states");
    for (auto& f : finals)
        if (!states.count(f)) throw FormatError("pda: final state not in states");
    if (!stack_init.empty() && !stack_alphabet.count(stack_init))
        throw FormatError("pda: initial stack symbol not in stack alphabet");
    for (auto& e : edges) {
        if (!states.count(e.from) || !states.count(e.to))
            throw FormatError("pda: edge endpoint not in states");
        if (!e.letter.empty() && !input_alphabet.count(e.letter))
            throw FormatError("pda: edge letter not in input alphabet");
        if (e.op.kind != StackOp::None && !stack_alphabet.count(e.op.sym))
            throw FormatError("pda: stack symbol not in stack alphabet");
    }
}

void Nfa::add_edge(const std::string& from, const Symbol& letter, const std::string& to) {
    states.insert(from);
    states.insert(to);
    if (!letter.empty()) alphabet.insert(letter);
    edges.push_back({from, letter, to});
}

void Nfa::validate() const {
    if (!states.count(initial)) throw FormatError("nfa: initial state not in states");
    for (auto& f : finals)
        if (!states.count(f)) throw FormatError("nfa: final state not in states");
    for (auto& e : edges)
        if (!states.count(e.from) || !states.count(e.to))
            throw FormatError("nfa: edge endpoint not in states");
}

void Transducer::add_edge(const std::string& from, std::vector<Symbol> labels,
                          const std::string& to) {
    if (labels.size() != arity) throw ArityError("transducer edge arity mismatch");
    states.insert(from);
    states.insert(to);
    for (auto& s : labels)
        if (!s.empty()) alphabet.insert(s);
    edges.push_back({from, std::move(labels), to});
}

void Transducer::validate() const {
    if (!states.count(initial)) throw FormatError("transducer: initial not in states");
    for (auto& e : edges) {
        if (e.labels.size() != arity) throw ArityError("transducer edge arity mismatch");
        bool all_eps = true, all_sym = true;
        for (auto& s : e.labels) (s.empty() ? all_sym : all_eps) = false;
        if (!all_eps && !all_sym)
            throw FormatError("transducer: edge tuple must be all-eps or all-symbols");
    }
}

// ---------------------------------------------------------------- transducers

bool transducer_contains(const Transducer& t, const std::vector<std::string>& words, char sep) {
    // words are sequences of symbols; with sep == '\0' each char is one symbol
    std::vector<std::vector<Symbol>> tracks;
    for (auto& w : words) {
        std::vector<Symbol> track;
        if (sep == '\0') {
            for (char c : w) track.push_back(std::string(1, c));
        } else {
            std::string cur;
            for (char c : w) {
                if (c == sep) {
                    track.push_back(cur);
                    cur.clear();
                } else
                    cur.push_back(c);
            }
            if (!cur.empty()) track.push_back(cur);
        }
        tracks.push_back(std::move(track));
    }
    if (tracks.size() != t.arity) throw ArityError("transducer_contains: tuple arity mismatch");
    size_t len = tracks.empty() ? 0 : tracks[0].size();
    for (auto& tr : tracks)
        if (tr.size() != len) return false;  // length preservation

    // BFS over (state, position)
    std::set<std::pair<std::string, size_t>> seen;
    std::deque<std::pair<std::string, size_t>> work;
    work.push_back({t.initial, 0});
    seen.insert(work.front());
    while (!work.empty()) {
        auto [q, i] = work.front();
        work.pop_front();
        if (i == len && t.finals.count(q)) return true;
        for (auto& e : t.edges) {
            if (e.from != q) continue;
            bool eps = e.labels[0].empty();
            std::pair<std::string, size_t> next;
            if (eps) {
                next = {e.to, i};
            } else {
                if (i >= len) continue;
                bool ok = true;
                for (size_t k = 0; k < t.arity; ++k)
                    if (tracks[k][i] != e.labels[k]) { ok = false; break; }
                if (!ok) continue;
                next = {e.to, i + 1};
            }
            if (seen.insert(next).second) work.push_back(next);
        }
    }
    return false;
}

bool transducer_contains2(const Transducer& t, const std::string& u, const std::string& v) {
    return transducer_contains(t, {u, v});
}

Transducer transducer_identity(const std::set<Symbol>& alphabet) {
    Transducer t;
    t.arity = 2;
    t.alphabet = alphabet;
    t.initial = "q";
    t.states = {"q"};
    t.finals = {"q"};
    for (auto& a : alphabet) t.add_edge("q", {a, a}, "q");
    return t;
}

static std::string pair_name(const std::string& a, const std::string& b) {
    return a + "&" + b;
}

Transducer transducer_product2(const Transducer& a, const Transducer& b) {
    if (a.arity != 2 || b.arity != 2) throw ArityError("transducer_product2: arity must be 2");
    Transducer r;
    r.arity = 2;
    r.initial = pair_name(a.initial, b.initial);
    r.states.insert(r.initial);
    for (auto& ea : a.edges)
        for (auto& eb : b.edges) {
            bool ea_eps = ea.labels[0].empty();
            bool eb_eps = eb.labels[0].empty();
            if (!ea_eps && !eb_eps && ea.labels == eb.labels) {
                for (auto& qb : b.states) (void)qb;
                r.add_edge(pair_name(ea.from, eb.from), ea.labels, pair_name(ea.to, eb.to));
            }
        }
    // eps moves advance one side alone
    for (auto& ea : a.edges)
        if (ea.labels[0].empty())
            for (auto& qb : b.states)
                r.add_edge(pair_name(ea.from, qb), {"", ""}, pair_name(ea.to, qb));
    for (auto& eb : b.edges)
        if (eb.labels[0].empty())
            for (auto& qa : a.states)
                r.add_edge(pair_name(qa, eb.from), {"", ""}, pair_name(qa, eb.to));
    for (auto& fa : a.finals)
        for (auto& fb : b.finals) {
            r.states.insert(pair_name(fa, fb));
            r.finals.insert(pair_name(fa, fb));
        }
    return r;
}

Transducer transducer_compose2(const Transducer& a, const Transducer& b) {
    if (a.arity != 2 || b.arity != 2) throw ArityError("transducer_compose2: arity must be 2");
    Transducer r;
    r.arity = 2;
    r.initial = pair_name(a.initial, b.initial);
    r.states.insert(r.initial);
    for (auto& ea : a.edges) {
        if (ea.labels[0].empty()) {
            for (auto& qb : b.states)
                r.add_edge(pair_name(ea.from, qb), {"", ""}, pair_name(ea.to, qb));
            continue;
        }
        for (auto& eb : b.edges) {
            if (eb.labels[0].empty()) continue;
            if (ea.labels[1] != eb.labels[0]) continue;
            r.add_edge(pair_name(ea.from, eb.from), {ea.labels[0], eb.labels[1]},
                       pair_name(ea.to, eb.to));
        }
    }
    for (auto& eb : b.edges)
        if (eb.labels[0].empty())
            for (auto& qa : a.states)
                r.add_edge(pair_name(qa, eb.from), {"", ""}, pair_name(qa, eb.to));
    for (auto& fa : a.finals)
        for (auto& fb : b.finals) {
            r.states.insert(pair_name(fa, fb));
            r.finals.insert(pair_name(fa, fb));
        }
    return r;
}

Transducer transducer_union(const Transducer& a, const Transducer& b) {
    if (a.arity != b.arity) throw ArityError("transducer_union: arity mismatch");
    Transducer r;
    r.arity = a.arity;
    r.initial = "u0";
    r.states.insert("u0");
    auto import = [&](const Transducer& t, const std::string& tag) {
        for (auto& e : t.edges)
            r.add_edge(tag + e.from, e.labels, tag + e.to);
        for (auto& q : t.states) r.states.insert(tag + q);
        for (auto& f : t.finals) r.finals.insert(tag + f);
        std::vector<Symbol> eps(t.arity, "");
        r.add_edge("u0", eps, tag + t.initial);
    };
    import(a, "A.");
    import(b, "B.");
    return r;
}

std::vector<std::pair<std::vector<Symbol>, std::vector<Symbol>>> transducer_enumerate2(
    const Transducer& t, size_t max_len) {
    if (t.arity != 2) throw ArityError("transducer_enumerate2: arity must be 2");
    std::vector<std::pair<std::vector<Symbol>, std::vector<Symbol>>> out;
    // BFS over (state, u, v); bounded because edges are length-preserving
    struct Node {
        std::string q;
        std::vector<Symbol> u, v;
    };
    std::set<std::tuple<std::string, std::vector<Symbol>, std::vector<Symbol>>> seen;
    std::deque<Node> work;
    work.push_back({t.initial, {}, {}});
    seen.insert({t.initial, {}, {}});
    std::set<std::pair<std::vector<Symbol>, std::vector<Symbol>>> results;
    while (!work.empty()) {
        Node n = work.front();
        work.pop_front();
        if (t.finals.count(n.q)) results.insert({n.u, n.v});
        for (auto& e : t.edges) {
            if (e.from != n.q) continue;
            Node next = n;
            next.q = e.to;
            if (!e.labels[0].empty()) {
                if (n.u.size() >= max_len) continue;
                next.u.push_back(e.labels[0]);
                next.v.push_back(e.labels[1]);
            }
            if (seen.insert({next.q, next.u, next.v}).second) work.push_back(next);
        }
    }
    out.assign(results.begin(), results.end());
    return out;
}

// ---------------------------------------------------------------- PDA

std::vector<std::pair<Symbol, PdaConfig>> pda_step(const Pda& p, const PdaConfig& c) {
    if (!p.states.count(c.state)) throw FormatError("pda_step: unknown state");
    std::vector<std::pair<Symbol, PdaConfig>> out;
    for (auto& e : p.edges) {
        if (e.from != c.state) continue;
        PdaConfig next = c;
        next.state = e.to;
        switch (e.op.kind) {
            case StackOp::None:
                break;
            case StackOp::Push:
                next.stack.push_back(e.op.sym);
                break;
            case StackOp::Pop:
                if (c.stack.empty() || c.stack.back() != e.op.sym) continue;
                next.stack.pop_back();
                break;
        }
        out.push_back({e.letter, std::move(next)});
    }
    return out;
}

std::set<std::pair<std::string, std::string>> pda_balanced_pairs(const Pda& p) {
    // dense ids
    std::vector<std::string> id2q(p.states.begin(), p.states.end());
    std::map<std::string, int> q2id;
    for (size_t i = 0; i < id2q.size(); ++i) q2id[id2q[i]] = static_cast<int>(i);
    int n = static_cast<int>(id2q.size());

    struct IEdge { int from, to; };
    struct SEdge { int from, to; Symbol sym; };
    std::vector<std::vector<int>> internal_from(n);      // z -> list of y
    std::vector<std::vector<SEdge>> push_from(n);        // z -> push edges
    std::vector<std::vector<SEdge>> push_to(n);          // p -> push edges landing at p
    std::vector<std::vector<SEdge>> pop_from(n);         // q -> pop edges
    for (auto& e : p.edges) {
        int f = q2id[e.from], t = q2id[e.to];
        if (e.op.kind == StackOp::None) internal_from[f].push_back(t);
        else if (e.op.kind == StackOp::Push) {
            push_from[f].push_back({f, t, e.op.sym});
            push_to[t].push_back({f, t, e.op.sym});
        } else
            pop_from[f].push_back({f, t, e.op.sym});
    }

    std::vector<std::vector<bool>> sl(n, std::vector<bool>(n, false));
    std::vector<std::vector<int>> by_second(n), by_first(n);  // indexes over SL pairs
    std::deque<std::pair<int, int>> work;
    auto add = [&](int x, int y) {
        if (sl[x][y]) return;
        sl[x][y] = true;
        by_second[y].push_back(x);
        by_first[x].push_back(y);
        work.push_back({x, y});
    };
    for (int i = 0; i < n; ++i) add(i, i);
    while (!work.empty()) {
        auto [x, z] = work.front();
        work.pop_front();
        // extend on the right with an internal edge
        for (int y : internal_from[z]) add(x, y);
        // (x,z) as outer prefix of a wrap: z --push γ--> p, SL(p,q), q --pop γ--> y
        for (auto& pe : push_from[z]) {
            auto inner = by_first[pe.to];  // snapshot: add() appends to these
            for (int q : inner)
                for (auto& qe : pop_from[q])
                    if (qe.sym == pe.sym) add(x, qe.to);
        }
        // (x,z) as the inner part of a wrap: w --push γ--> x ... z --pop γ--> y, prefix SL(v,w)
        for (auto& pe : push_to[x])
            for (auto& qe : pop_from[z])
                if (qe.sym == pe.sym) {
                    auto prefixes = by_second[pe.from];
                    for (int v : prefixes) add(v, qe.to);
                }
    }

    std::set<std::pair<std::string, std::string>> out;
    for (int x = 0; x < n; ++x)
        for (int y : by_first[x]) out.insert({id2q[x], id2q[y]});
    return out;
}

namespace {

// forward reachability of states from the initial configuration, using the
// balanced-pair relation; returns the reachable state set
std::set<std::string> pda_reachable_states(const Pda& p) {
    auto sl = pda_balanced_pairs(p);
    std::map<std::string, std::set<std::string>> sl_from;
    for (auto& [x, y] : sl) sl_from[x].insert(y);

    std::set<std::string> reach;
    std::deque<std::string> work;
    auto add = [&](const std::string& q) {
        if (reach.insert(q).second) work.push_back(q);
    };
    // base level: initial state with [stack_init] on top
    add(p.initial);
    while (!work.empty()) {
        std::string x = work.front();
        work.pop_front();
        for (auto& y : sl_from[x]) add(y);
        for (auto& e : p.edges) {
            if (e.from != x) continue;
            if (e.op.kind == StackOp::Push) add(e.to);
            // pop of the base sentinel: only legal when the base is still the
            // sentinel; over-approximating pops here would be wrong, so pops are
            // handled precisely below.
        }
    }
    // precise handling of runs that pop the initial stack symbol: from any
    // state y with SL(initial, y), a pop of stack_init reaches e.to with empty
    // stack; afterwards only SL-moves and pushes apply (no further base pops).
    std::set<std::string> base;  // states where the sentinel is still the only base
    for (auto& y : sl_from[p.initial]) base.insert(y);
    for (auto& e : p.edges) {
        if (e.op.kind == StackOp::Pop && e.op.sym == p.stack_init && base.count(e.from))
            add(e.to);
    }
    // closure again (cheap: rerun until fixpoint)
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::string> cur(reach.begin(), reach.end());
        for (auto& x : cur) {
            for (auto& y : sl_from[x])
                if (!reach.count(y)) { reach.insert(y); changed = true; }
            for (auto& e : p.edges)
                if (e.from == x && e.op.kind == StackOp::Push && !reach.count(e.to)) {
                    reach.insert(e.to);
                    changed = true;
                }
        }
    }
    return reach;
}

}  // namespace

bool pda_nonempty(const Pda& p) {
    auto reach = pda_reachable_states(p);
    for (auto& f : p.finals)
        if (reach.count(f)) return true;
    return false;
}

bool pda_accepts(const Pda& p, const std::vector<Symbol>& word) {
    for (auto& a : word)
        if (!p.input_alphabet.count(a))
            throw AlphabetError("pda_accepts: letter outside input alphabet: " + a);
    // product with the word automaton, then exact emptiness
    Pda prod;
    size_t n = word.size();
    auto name = [&](const std::string& q, size_t i) { return q + "@" + std::to_string(i); };
    prod.initial = name(p.initial, 0);
    prod.stack_init = p.stack_init;
    prod.stack_alphabet = p.stack_alphabet;
    for (auto& e : p.edges) {
        for (size_t i = 0; i <= n; ++i) {
            if (e.letter.empty())
                prod.add_edge(name(e.from, i), "", e.op, name(e.to, i));
            else if (i < n && word[i] == e.letter)
                prod.add_edge(name(e.from, i), "", e.op, name(e.to, i + 1));
        }
    }
    for (auto& q : p.states)
        for (size_t i = 0; i <= n; ++i) prod.states.insert(name(q, i));
    for (auto& f : p.finals) prod.finals.insert(name(f, n));
    return pda_nonempty(prod);
}

bool pda_accepts(const Pda& p, const std::string& word) {
    std::vector<Symbol> w;
    for (char c : word) w.push_back(std::string(1, c));
    return pda_accepts(p, w);
}

static std::string config_name(const PdaConfig& c) {
    std::string s = c.state + "//";
    for (auto& x : c.stack) s += x + ".";
    return s;
}

Nfa pda_bounded_stack_nfa(const Pda& p, size_t h, size_t max_states) {
    Nfa out;
    PdaConfig init{p.initial, {}};
    if (!p.stack_init.empty()) init.stack.push_back(p.stack_init);
    // h bounds the height gained above the initial stack; with an empty initial
    // stack this is the plain bounded-stack language L_h
    size_t cap = h + init.stack.size();
    out.initial = config_name(init);
    out.states.insert(out.initial);
    out.alphabet = p.input_alphabet;

    std::set<PdaConfig> seen{init};
    std::deque<PdaConfig> work{init};
    while (!work.empty()) {
        PdaConfig c = work.front();
        work.pop_front();
        if (p.finals.count(c.state)) out.finals.insert(config_name(c));
        for (auto& [letter, next] : pda_step(p, c)) {
            if (next.stack.size() > cap) continue;
            if (!seen.count(next)) {
                if (seen.size() >= max_states)
                    throw SizeGuardError(
                        "pda_bounded_stack_nfa: explicit state count exceeds ceiling");
                seen.insert(next);
                work.push_back(next);
            }
            out.add_edge(config_name(c), letter, config_name(next));
        }
    }
    return out;
}

Pda pda_dual(const Pda& p) {
    Pda d;
    d.input_alphabet = p.input_alphabet;
    d.stack_alphabet = p.stack_alphabet;
    d.stack_init = p.stack_init;
    d.states = p.states;
    for (auto& e : p.edges) {
        StackOp op = e.op;
        if (op.kind == StackOp::Push) op.kind = StackOp::Pop;
        else if (op.kind == StackOp::Pop) op.kind = StackOp::Push;
        d.add_edge(e.to, e.letter, op, e.from);
    }
    if (p.finals.size() == 1) {
        d.initial = *p.finals.begin();
    } else {
        d.initial = "dual_init";
        d.states.insert(d.initial);
        for (auto& f : p.finals) d.add_edge(d.initial, "", StackOp::none(), f);
    }
    d.finals = {p.initial};
    return d;
}

// ---------------------------------------------------------------- NFA

namespace {

std::map<std::string, std::vector<const NfaEdge*>> out_index(const Nfa& a) {
    std::map<std::string, std::vector<const NfaEdge*>> idx;
    for (auto& e : a.edges) idx[e.from].push_back(&e);
    return idx;
}

std::set<std::string> eps_closure(const Nfa& a,
                                  const std::map<std::string, std::vector<const NfaEdge*>>& idx,
                                  std::set<std::string> s) {
    std::deque<std::string> work(s.begin(), s.end());
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        auto it = idx.find(q);
        if (it == idx.end()) continue;
        for (auto* e : it->second)
            if (e->letter.empty() && s.insert(e->to).second) work.push_back(e->to);
    }
    return s;
}

}  // namespace

bool nfa_accepts(const Nfa& a, const std::vector<Symbol>& word) {
    auto idx = out_index(a);
    auto cur = eps_closure(a, idx, {a.initial});
    for (auto& letter : word) {
        std::set<std::string> next;
        for (auto& q : cur) {
            auto it = idx.find(q);
            if (it == idx.end()) continue;
            for (auto* e : it->second)
                if (e->letter == letter) next.insert(e->to);
        }
        cur = eps_closure(a, idx, std::move(next));
        if (cur.empty()) return false;
    }
    for (auto& q : cur)
        if (a.finals.count(q)) return true;
    return false;
}

bool nfa_accepts(const Nfa& a, const std::string& word) {
    std::vector<Symbol> w;
    for (char c : word) w.push_back(std::string(1, c));
    return nfa_accepts(a, w);
}

Nfa nfa_product(const Nfa& a, const Nfa& b) {
    std::set<Symbol> shared;
    for (auto& s : a.alphabet)
        if (b.alphabet.count(s)) shared.insert(s);
    if (shared.empty() && !(a.alphabet.empty() && b.alphabet.empty()))
        throw AlphabetError("nfa_product: disjoint alphabets");
    Nfa r;
    r.alphabet = shared;
    r.initial = pair_name(a.initial, b.initial);
    r.states.insert(r.initial);
    for (auto& ea : a.edges) {
        if (ea.letter.empty()) {
            for (auto& qb : b.states) r.add_edge(pair_name(ea.from, qb), "", pair_name(ea.to, qb));
        } else if (shared.count(ea.letter)) {
            for (auto& eb : b.edges)
                if (eb.letter == ea.letter)
                    r.add_edge(pair_name(ea.from, eb.from), ea.letter, pair_name(ea.to, eb.to));
        }
    }
    for (auto& eb : b.edges)
        if (eb.letter.empty())
            for (auto& qa : a.states) r.add_edge(pair_name(qa, eb.from), "", pair_name(qa, eb.to));
    for (auto& fa : a.finals)
        for (auto& fb : b.finals) {
            r.states.insert(pair_name(fa, fb));
            r.finals.insert(pair_name(fa, fb));
        }
    return nfa_trim(r);
}

std::set<std::vector<Symbol>> nfa_enumerate(const Nfa& a, size_t max_len) {
    std::set<std::vector<Symbol>> out;
    auto idx = out_index(a);
    auto accepts_set = [&](const std::set<std::string>& s) {
        for (auto& q : s)
            if (a.finals.count(q)) return true;
        return false;
    };
    struct Node {
        std::set<std::string> subset;
        std::vector<Symbol> word;
    };
    std::deque<Node> work;
    work.push_back({eps_closure(a, idx, {a.initial}), {}});
    std::set<std::pair<std::vector<Symbol>, std::set<std::string>>> seen;
    while (!work.empty()) {
        Node n = work.front();
        work.pop_front();
        if (accepts_set(n.subset)) out.insert(n.word);
        if (n.word.size() == max_len) continue;
        for (auto& letter : a.alphabet) {
            std::set<std::string> next;
            for (auto& q : n.subset) {
                auto it = idx.find(q);
                if (it == idx.end()) continue;
                for (auto* e : it->second)
                    if (e->letter == letter) next.insert(e->to);
            }
            if (next.empty()) continue;
            next = eps_closure(a, idx, std::move(next));
            auto word = n.word;
            word.push_back(letter);
            if (seen.insert({word, next}).second) work.push_back({std::move(next), std::move(word)});
        }
    }
    return out;
}

std::set<std::string> nfa_enumerate_strings(const Nfa& a, size_t max_len) {
    std::set<std::string> out;
    for (auto& w : nfa_enumerate(a, max_len)) {
        std::string s;
        for (auto& sym : w) {
            if (sym.size() != 1)
                throw FormatError("nfa_enumerate_strings: multi-char symbol " + sym);
            s += sym;
        }
        out.insert(s);
    }
    return out;
}

Nfa nfa_rename_letter(const Nfa& a, const Symbol& from, const Symbol& to) {
    Nfa r = a;
    r.edges.clear();
    r.alphabet.erase(from);
    if (!to.empty()) r.alphabet.insert(to);
    for (auto e : a.edges) {
        if (e.letter == from) e.letter = to;
        r.edges.push_back(e);
    }
    return r;
}

Nfa nfa_universal(const std::set<Symbol>& alphabet) {
    Nfa r;
    r.initial = "u";
    r.states = {"u"};
    r.finals = {"u"};
    r.alphabet = alphabet;
    for (auto& s : alphabet) r.add_edge("u", s, "u");
    return r;
}

Nfa nfa_from_words(const std::set<Symbol>& alphabet, const std::set<std::vector<Symbol>>& words) {
    Nfa r;
    r.alphabet = alphabet;
    r.initial = "w";
    r.states = {"w"};
    int id = 0;
    for (auto& w : words) {
        std::string cur = "w";
        for (auto& sym : w) {
            std::string next = "w" + std::to_string(id++);
            r.add_edge(cur, sym, next);
            cur = next;
        }
        r.finals.insert(cur);
        r.states.insert(cur);
    }
    return r;
}

Nfa nfa_trim(const Nfa& a) {
    std::map<std::string, std::vector<const NfaEdge*>> fwd, bwd;
    for (auto& e : a.edges) {
        fwd[e.from].push_back(&e);
        bwd[e.to].push_back(&e);
    }
    std::set<std::string> reach;
    std::deque<std::string> work{a.initial};
    reach.insert(a.initial);
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        for (auto* e : fwd[q])
            if (reach.insert(e->to).second) work.push_back(e->to);
    }
    std::set<std::string> co;
    for (auto& f : a.finals)
        if (reach.count(f)) {
            if (co.insert(f).second) work.push_back(f);
        }
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        for (auto* e : bwd[q])
            if (reach.count(e->from) && co.insert(e->from).second) work.push_back(e->from);
    }
    Nfa r;
    r.alphabet = a.alphabet;
    r.initial = a.initial;
    r.states.insert(a.initial);
    for (auto& e : a.edges)
        if (co.count(e.from) && co.count(e.to)) r.add_edge(e.from, e.letter, e.to);
    for (auto& f : a.finals)
        if (co.count(f)) {
            r.finals.insert(f);
            r.states.insert(f);
        }
    return r;
}

Pda nfa_to_pda(const Nfa& a) {
    Pda p;
    p.initial = a.initial;
    p.states = a.states;
    p.finals = a.finals;
    p.input_alphabet = a.alphabet;
    p.stack_init = "_Z";
    p.stack_alphabet = {"_Z"};
    for (auto& e : a.edges) p.add_edge(e.from, e.letter, StackOp::none(), e.to);
    return p;
}

// ---------------------------------------------------------------- text formats

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

Symbol decode_sym(const std::string& s) { return s == "eps" ? "" : s; }
std::string encode_sym(const Symbol& s) { return s.empty() ? "eps" : s; }

// edge lines look like `from -label-> to`
std::optional<std::tuple<std::string, std::string, std::string>> parse_edge_line(
    const std::vector<std::string>& toks) {
    if (toks.size() != 3) return std::nullopt;
    const std::string& mid = toks[1];
    if (mid.size() < 3 || mid.front() != '-' || mid.substr(mid.size() - 2) != "->")
        return std::nullopt;
    return std::tuple{toks[0], mid.substr(1, mid.size() - 3), toks[2]};
}

}  // namespace

std::string pda_to_text(const Pda& p) {
    std::ostringstream os;
    os << "pda\n";
    os << "alphabet";
    for (auto& s : p.input_alphabet) os << " " << s;
    os << "\nstack";
    for (auto& s : p.stack_alphabet) os << " " << s;
    os << "\ninit " << p.initial << "\nstackinit " << encode_sym(p.stack_init) << "\nfinal";
    for (auto& f : p.finals) os << " " << f;
    os << "\n";
    for (auto& e : p.edges) {
        std::string op = "eps";
        if (e.op.kind == StackOp::Push) op = "push:" + e.op.sym;
        else if (e.op.kind == StackOp::Pop) op = "pop:" + e.op.sym;
        os << e.from << " -" << encode_sym(e.letter) << "|" << op << "-> " << e.to << "\n";
    }
    return os.str();
}

Pda pda_from_text(const std::string& text) {
    Pda p;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header_seen) {
            if (toks[0] != "pda") throw FormatError("pda_from_text: missing `pda` header");
            header_seen = true;
            continue;
        }
        if (toks[0] == "alphabet") {
            for (size_t i = 1; i < toks.size(); ++i) p.input_alphabet.insert(toks[i]);
        } else if (toks[0] == "stack") {
            for (size_t i = 1; i < toks.size(); ++i) p.stack_alphabet.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 2) {
            p.initial = toks[1];
            p.states.insert(toks[1]);
        } else if (toks[0] == "stackinit" && toks.size() == 2) {
            p.stack_init = decode_sym(toks[1]);
        } else if (toks[0] == "final") {
            for (size_t i = 1; i < toks.size(); ++i) {
                p.finals.insert(toks[i]);
                p.states.insert(toks[i]);
            }
        } else if (auto e = parse_edge_line(toks)) {
            auto [from, label, to] = *e;
            auto bar = label.find('|');
            if (bar == std::string::npos) throw FormatError("pda edge label needs `|`: " + label);
            Symbol letter = decode_sym(label.substr(0, bar));
            std::string op_s = label.substr(bar + 1);
            StackOp op = StackOp::none();
            if (op_s.rfind("push:", 0) == 0) op = StackOp::push(op_s.substr(5));
            else if (op_s.rfind("pop:", 0) == 0) op = StackOp::pop(op_s.substr(4));
            else if (op_s != "eps") throw FormatError("pda edge op: " + op_s);
            p.add_edge(from, letter, op, to);
        } else {
            throw FormatError("pda_from_text: cannot parse line: " + line);
        }
    }
    p.validate();
    return p;
}

std::string nfa_to_text(const Nfa& a) {
    std::ostringstream os;
    os << "nfa\nalphabet";
    for (auto& s : a.alphabet) os << " " << s;
    os << "\ninit " << a.initial << "\nfinal";
    for (auto& f : a.finals) os << " " << f;
    os << "\n";
    for (auto& e : a.edges)
        os << e.from << " -" << encode_sym(e.letter) << "-> " << e.to << "\n";
    return os.str();
}

Nfa nfa_from_text(const std::string& text) {
    Nfa a;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header_seen) {
            if (toks[0] != "nfa") throw FormatError("nfa_from_text: missing `nfa` header");
            header_seen = true;
            continue;
        }
        if (toks[0] == "alphabet") {
            for (size_t i = 1; i < toks.size(); ++i) a.alphabet.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 2) {
            a.initial = toks[1];
            a.states.insert(toks[1]);
        } else if (toks[0] == "final") {
            for (size_t i = 1; i < toks.size(); ++i) {
                a.finals.insert(toks[i]);
                a.states.insert(toks[i]);
            }
        } else if (auto e = parse_edge_line(toks)) {
            auto [from, label, to] = *e;
            a.add_edge(from, decode_sym(label), to);
        } else {
            throw FormatError("nfa_from_text: cannot parse line: " + line);
        }
    }
    a.validate();
    return a;
}

std::string transducer_to_text(const Transducer& t) {
    std::ostringstream os;
    os << "transducer\narity " << t.arity << "\nalphabet";
    for (auto& s : t.alphabet) os << " " << s;
    os << "\ninit " << t.initial << "\nfinal";
    for (auto& f : t.finals) os << " " << f;
    os << "\n";
    for (auto& e : t.edges) {
        os << e.from << " -";
        for (size_t i = 0; i < e.labels.size(); ++i) {
            if (i) os << ",";
            os << encode_sym(e.labels[i]);
        }
        os << "-> " << e.to << "\n";
    }
    return os.str();
}

Transducer transducer_from_text(const std::string& text) {
    Transducer t;
    std::istringstream is(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header_seen) {
            if (toks[0] != "transducer")
                throw FormatError("transducer_from_text: missing header");
            header_seen = true;
            continue;
        }
        if (toks[0] == "arity" && toks.size() == 2) {
            t.arity = static_cast<size_t>(std::stoul(toks[1]));
        } else if (toks[0] == "alphabet") {
            for (size_t i = 1; i < toks.size(); ++i) t.alphabet.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 2) {
            t.initial = toks[1];
            t.states.insert(toks[1]);
        } else if (toks[0] == "final") {
            for (size_t i = 1; i < toks.size(); ++i) {
                t.finals.insert(toks[i]);
                t.states.insert(toks[i]);
            }
        } else if (auto e = parse_edge_line(toks)) {
            auto [from, label, to] = *e;
            std::vector<Symbol> labels;
            std::string cur;
            for (char c : label) {
                if (c == ',') {
                    labels.push_back(decode_sym(cur));
                    cur.clear();
                } else
                    cur.push_back(c);
            }
            labels.push_back(decode_sym(cur));
            t.add_edge(from, std::move(labels), to);
        } else {
            throw FormatError("transducer_from_text: cannot parse line: " + line);
        }
    }
    t.validate();
    return t;
}

}  // namespace poolcheck
