#include "poolcheck/downclosure.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace poolcheck {

// ------------------------------------------------------------- brute force

bool subword_member(const Pda& p, const std::vector<Symbol>& u) {
    // product of p with the automaton for Sigma* u1 Sigma* ... un Sigma*
    Pda prod;
    size_t n = u.size();
    auto name = [&](const std::string& q, size_t i) { return q + "@" + std::to_string(i); };
    prod.initial = name(p.initial, 0);
    prod.stack_init = p.stack_init;
    prod.stack_alphabet = p.stack_alphabet;
    for (auto& e : p.edges) {
        for (size_t i = 0; i <= n; ++i) {
            // stay (letter absorbed by Sigma*)
            prod.add_edge(name(e.from, i), e.letter, e.op, name(e.to, i));
            // advance on the next required letter
            if (!e.letter.empty() && i < n && e.letter == u[i])
                prod.add_edge(name(e.from, i), e.letter, e.op, name(e.to, i + 1));
        }
    }
    for (auto& q : p.states)
        for (size_t i = 0; i <= n; ++i) prod.states.insert(name(q, i));
    for (auto& f : p.finals) prod.finals.insert(name(f, n));
    return pda_nonempty(prod);
}

SubwordClosure subword_closure_bruteforce(const Pda& p, size_t max_len) {
    SubwordClosure out;
    std::vector<Symbol> alphabet(p.input_alphabet.begin(), p.input_alphabet.end());
    // enumerate candidates in length-lexicographic order; prune: if u is not a
    // member then no extension of u can be (dcl is subword-closed, and u is a
    // subword of every extension)
    std::deque<std::vector<Symbol>> work;
    work.push_back({});
    while (!work.empty()) {
        auto u = work.front();
        work.pop_front();
        if (!subword_member(p, u)) continue;
        out.words.insert(u);
        if (u.size() == max_len) continue;
        for (auto& a : alphabet) {
            auto v = u;
            v.push_back(a);
            work.push_back(std::move(v));
        }
    }
    out.horizon_limited = false;
    return out;
}

// -------------------------------------------------------- balanced letter sets

std::map<std::pair<std::string, std::string>, std::set<Symbol>> balanced_letter_sets(
    const Pda& p) {
    std::vector<std::string> id2q(p.states.begin(), p.states.end());
    std::map<std::string, int> q2id;
    for (size_t i = 0; i < id2q.size(); ++i) q2id[id2q[i]] = static_cast<int>(i);
    int n = static_cast<int>(id2q.size());
    std::vector<Symbol> letters(p.input_alphabet.begin(), p.input_alphabet.end());
    std::map<Symbol, int> letter_id;
    for (size_t i = 0; i < letters.size(); ++i) letter_id[letters[i]] = static_cast<int>(i);
    size_t words = (letters.size() + 63) / 64;
    if (words == 0) words = 1;

    struct SEdge { int from, to, letter; Symbol sym; };
    std::vector<std::vector<std::pair<int, int>>> internal_from(n);  // (to, letter)
    std::vector<std::vector<SEdge>> push_from(n), push_to(n), pop_from(n);
    for (auto& e : p.edges) {
        int f = q2id[e.from], t = q2id[e.to];
        int li = e.letter.empty() ? -1 : letter_id[e.letter];
        if (e.op.kind == StackOp::None) internal_from[f].push_back({t, li});
        else if (e.op.kind == StackOp::Push) {
            push_from[f].push_back({f, t, li, e.op.sym});
            push_to[t].push_back({f, t, li, e.op.sym});
        } else
            pop_from[f].push_back({f, t, li, e.op.sym});
    }

    auto idx = [&](int x, int y) { return static_cast<size_t>(x) * n + y; };
    std::vector<char> known(static_cast<size_t>(n) * n, 0);
    std::vector<std::vector<uint64_t>> bits(static_cast<size_t>(n) * n);
    std::vector<std::vector<int>> by_second(n), by_first(n);
    std::deque<std::pair<int, int>> work;

    auto merge = [&](int x, int y, const std::vector<uint64_t>* extra, int letter) {
        size_t k = idx(x, y);
        bool changed = false;
        if (!known[k]) {
            known[k] = 1;
            bits[k].assign(words, 0);
            by_second[y].push_back(x);
            by_first[x].push_back(y);
            changed = true;
        }
        if (extra)
            for (size_t i = 0; i < words; ++i) {
                uint64_t nv = bits[k][i] | (*extra)[i];
                if (nv != bits[k][i]) { bits[k][i] = nv; changed = true; }
            }
        if (letter >= 0) {
            uint64_t before = bits[k][letter / 64];
            bits[k][letter / 64] |= (uint64_t(1) << (letter % 64));
            if (bits[k][letter / 64] != before) changed = true;
        }
        if (changed) work.push_back({x, y});
    };

    for (int i = 0; i < n; ++i) merge(i, i, nullptr, -1);
    std::vector<uint64_t> tmp(words);
    while (!work.empty()) {
        auto [x, z] = work.front();
        work.pop_front();
        size_t kxz = idx(x, z);
        // chain with internal edge
        for (auto& [y, li] : internal_from[z]) {
            tmp = bits[kxz];
            merge(x, y, &tmp, li);
        }
        // (x,z) as prefix of a wrap
        for (auto& pe : push_from[z]) {
            auto inner_states = by_first[pe.to];  // snapshot: merge() appends
            for (int q : inner_states) {
                for (auto& qe : pop_from[q]) {
                    if (qe.sym != pe.sym) continue;
                    tmp = bits[kxz];
                    const auto& inner = bits[idx(pe.to, q)];
                    for (size_t i = 0; i < words; ++i) tmp[i] |= inner[i];
                    if (pe.letter >= 0) tmp[pe.letter / 64] |= uint64_t(1) << (pe.letter % 64);
                    if (qe.letter >= 0) tmp[qe.letter / 64] |= uint64_t(1) << (qe.letter % 64);
                    merge(x, qe.to, &tmp, -1);
                }
            }
        }
        // (x,z) as the inner part of a wrap
        for (auto& pe : push_to[x]) {
            for (auto& qe : pop_from[z]) {
                if (qe.sym != pe.sym) continue;
                auto prefixes = by_second[pe.from];
                for (int v : prefixes) {
                    tmp = bits[idx(v, pe.from)];
                    const auto& inner = bits[kxz];
                    for (size_t i = 0; i < words; ++i) tmp[i] |= inner[i];
                    if (pe.letter >= 0) tmp[pe.letter / 64] |= uint64_t(1) << (pe.letter % 64);
                    if (qe.letter >= 0) tmp[qe.letter / 64] |= uint64_t(1) << (qe.letter % 64);
                    merge(v, qe.to, &tmp, -1);
                }
            }
        }
    }

    std::map<std::pair<std::string, std::string>, std::set<Symbol>> out;
    for (int x = 0; x < n; ++x)
        for (int y : by_first[x]) {
            std::set<Symbol> s;
            const auto& b = bits[idx(x, y)];
            for (size_t i = 0; i < letters.size(); ++i)
                if (b[i / 64] >> (i % 64) & 1) s.insert(letters[i]);
            out[{id2q[x], id2q[y]}] = std::move(s);
        }
    return out;
}

// ------------------------------------------------------------------- eta

namespace {

// two-copy PDA for M_{p,q}: copy 0 simulates P and must cycle back to p, a
// single eps-jump leads to (1,q), and copy 1 (input letters dropped) must
// consume the created stack by cycling on q. Eta letters are the letters
// readable on some balanced run (0,p) -> (1,q).
Pda two_copy_pda(const Pda& p, const std::string& p_state, const std::string& q_state) {
    Pda t;
    t.stack_alphabet = p.stack_alphabet;
    t.stack_init = "_M";  // never touched; balanced runs are what we query
    t.stack_alphabet.insert("_M");
    auto c0 = [](const std::string& q) { return "0:" + q; };
    auto c1 = [](const std::string& q) { return "1:" + q; };
    for (auto& q : p.states) {
        t.states.insert(c0(q));
        t.states.insert(c1(q));
    }
    t.add_edge(c0(p_state), "", StackOp::none(), c1(q_state));
    for (auto& e : p.edges) {
        t.add_edge(c0(e.from), e.letter, e.op, c0(e.to));
        t.add_edge(c1(e.from), "", e.op, c1(e.to));
    }
    t.initial = c0(p.initial);
    return t;
}

}  // namespace

std::set<Symbol> compute_eta(const Pda& p, const std::string& p_state,
                             const std::string& q_state) {
    if (!p.states.count(p_state) || !p.states.count(q_state))
        throw FormatError("compute_eta: state not in PDA");
    Pda two = two_copy_pda(p, p_state, q_state);
    auto sets = balanced_letter_sets(two);
    auto it = sets.find({"0:" + p_state, "1:" + q_state});
    if (it == sets.end()) return {};
    return it->second;
}

// ------------------------------------------------------------------ augment

AugmentedPda augment(const Pda& p) {
    AugmentedPda out;
    out.base = p;
    Pda dual = pda_dual(p);

    // input-dropping copies
    for (auto& e : p.edges)
        if (!e.letter.empty()) out.base.add_edge(e.from, "", e.op, e.to);

    size_t pair_id = 0;
    for (auto& ps : p.states) {
        for (auto& qs : p.states) {
            Symbol br = "br" + std::to_string(pair_id++);
            out.brackets[{ps, qs}] = br;
            std::set<Symbol> eta_push = compute_eta(p, ps, qs);
            std::set<Symbol> eta_pop = compute_eta(dual, qs, ps);
            out.eta_push[{ps, qs}] = eta_push;
            out.eta_pop[{ps, qs}] = eta_pop;
            // push side: p --eps|push br--> u, letter self-loops on u, u --eps--> p
            std::string u = "etaU" + std::to_string(pair_id) + "[" + ps + "," + qs + "]";
            out.base.add_edge(ps, "", StackOp::push(br), u);
            for (auto& a : eta_push) out.base.add_edge(u, a, StackOp::none(), u);
            out.base.add_edge(u, "", StackOp::none(), ps);
            // pop side at q
            std::string v = "etaD" + std::to_string(pair_id) + "[" + ps + "," + qs + "]";
            out.base.add_edge(qs, "", StackOp::none(), v);
            for (auto& a : eta_pop) out.base.add_edge(v, a, StackOp::none(), v);
            out.base.add_edge(v, "", StackOp::pop(br), qs);
        }
    }

    // h = |Q^T|^2 * (|Gamma^T| + 1) + 2, validated against the oracles
    Nat q_count(out.base.states.size());
    Nat g_count(out.base.stack_alphabet.size());
    out.h = q_count * q_count * (g_count + Nat(1)) + Nat(2);
    return out;
}

// ------------------------------------------------- grammar-based downclosure

namespace {

struct Item {
    bool terminal;
    Symbol letter;  // terminal
    int nt;         // nonterminal id
};

struct Prod {
    int lhs;
    std::vector<Item> rhs;
};

struct Grammar {
    int n_nts = 0;
    std::vector<Prod> prods;
    int start = -1;
};

// staircase grammar of a PDA: SL(x,y) pair nonterminals plus TOP(x) and S
Grammar staircase_grammar(const Pda& p, std::vector<std::string>* nt_names = nullptr) {
    std::vector<std::string> id2q(p.states.begin(), p.states.end());
    std::map<std::string, int> q2id;
    for (size_t i = 0; i < id2q.size(); ++i) q2id[id2q[i]] = static_cast<int>(i);
    int n = static_cast<int>(id2q.size());

    Grammar g;
    auto sl = [&](int x, int y) { return x * n + y; };
    int top0 = n * n;
    auto top = [&](int x) { return top0 + x; };
    g.start = top0 + n;
    g.n_nts = g.start + 1;
    if (nt_names) {
        nt_names->resize(g.n_nts);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                (*nt_names)[sl(x, y)] = "SL(" + id2q[x] + "," + id2q[y] + ")";
        for (int x = 0; x < n; ++x) (*nt_names)[top(x)] = "TOP(" + id2q[x] + ")";
        (*nt_names)[g.start] = "S";
    }

    auto term = [](const Symbol& a) { return Item{true, a, -1}; };
    auto nt = [](int id) { return Item{false, "", id}; };

    for (int x = 0; x < n; ++x) g.prods.push_back({sl(x, x), {}});

    for (auto& e : p.edges) {
        int f = q2id[e.from], t = q2id[e.to];
        if (e.op.kind == StackOp::None) {
            for (int x = 0; x < n; ++x) {
                Prod pr{sl(x, t), {nt(sl(x, f))}};
                if (!e.letter.empty()) pr.rhs.push_back(term(e.letter));
                g.prods.push_back(std::move(pr));
            }
        }
    }
    // push/pop wraps
    for (auto& pe : p.edges) {
        if (pe.op.kind != StackOp::Push) continue;
        for (auto& qe : p.edges) {
            if (qe.op.kind != StackOp::Pop || qe.op.sym != pe.op.sym) continue;
            int z = q2id[pe.from], pp = q2id[pe.to];
            int q = q2id[qe.from], y = q2id[qe.to];
            for (int x = 0; x < static_cast<int>(id2q.size()); ++x) {
                Prod pr{sl(x, y), {nt(sl(x, z))}};
                if (!pe.letter.empty()) pr.rhs.push_back(term(pe.letter));
                pr.rhs.push_back(nt(sl(pp, q)));
                if (!qe.letter.empty()) pr.rhs.push_back(term(qe.letter));
                g.prods.push_back(std::move(pr));
            }
        }
    }
    // TOP(x) -> SL(x,f) for finals
    for (auto& f : p.finals) {
        int fid = q2id.at(f);
        for (int x = 0; x < n; ++x) g.prods.push_back({top(x), {nt(sl(x, fid))}});
    }
    // TOP(x) -> SL(x,z) a TOP(p') for push edges
    for (auto& pe : p.edges) {
        if (pe.op.kind != StackOp::Push) continue;
        int z = q2id[pe.from], pp = q2id[pe.to];
        for (int x = 0; x < n; ++x) {
            Prod pr{top(x), {nt(sl(x, z))}};
            if (!pe.letter.empty()) pr.rhs.push_back(term(pe.letter));
            pr.rhs.push_back(nt(top(pp)));
            g.prods.push_back(std::move(pr));
        }
    }
    // S -> TOP(q0) ; and for pops of the base sentinel: S -> SL(q0,z) a TOP(z')
    int q0 = q2id.at(p.initial);
    g.prods.push_back({g.start, {nt(top(q0))}});
    if (!p.stack_init.empty()) {
        for (auto& e : p.edges) {
            if (e.op.kind != StackOp::Pop || e.op.sym != p.stack_init) continue;
            Prod pr{g.start, {nt(sl(q0, q2id[e.from]))}};
            if (!e.letter.empty()) pr.rhs.push_back(term(e.letter));
            pr.rhs.push_back(nt(top(q2id[e.to])));
            g.prods.push_back(std::move(pr));
        }
    }
    return g;
}

struct FragmentBuilder {
    size_t budget;
    size_t used = 0;
    int counter = 0;

    std::string fresh() {
        if (++used > budget)
            throw SizeGuardError("downclosure_nfa: NFA assembly exceeds state ceiling");
        return "d" + std::to_string(counter++);
    }

    Nfa empty_word() {
        Nfa f;
        f.initial = fresh();
        f.states = {f.initial};
        f.finals = {f.initial};
        return f;
    }

    Nfa letter_or_eps(const Symbol& a) {
        Nfa f = empty_word();
        std::string t = fresh();
        f.states.insert(t);
        f.finals.insert(t);
        f.add_edge(f.initial, a, t);
        return f;
    }

    Nfa copy(const Nfa& a) {
        Nfa f;
        std::map<std::string, std::string> m;
        auto get = [&](const std::string& q) {
            auto it = m.find(q);
            if (it != m.end()) return it->second;
            auto nn = fresh();
            m[q] = nn;
            f.states.insert(nn);
            return nn;
        };
        f.initial = get(a.initial);
        for (auto& q : a.states) get(q);
        for (auto& e : a.edges) f.add_edge(get(e.from), e.letter, get(e.to));
        for (auto& q : a.finals) f.finals.insert(get(q));
        f.alphabet = a.alphabet;
        return f;
    }

    Nfa concat(Nfa a, const Nfa& b) {
        // both operands accept eps (downclosures always do), so linking finals
        // of a to b's initial keeps acceptance exact
        Nfa bb = copy(b);
        for (auto& q : bb.states) a.states.insert(q);
        for (auto& e : bb.edges) a.edges.push_back(e);
        for (auto& s : bb.alphabet) a.alphabet.insert(s);
        for (auto& f : a.finals) a.edges.push_back({f, "", bb.initial});
        a.finals = bb.finals;
        return a;
    }

    Nfa union_of(const std::vector<Nfa>& parts) {
        Nfa f;
        f.initial = fresh();
        f.states = {f.initial};
        for (auto& p : parts) {
            Nfa c = copy(p);
            for (auto& q : c.states) f.states.insert(q);
            for (auto& e : c.edges) f.edges.push_back(e);
            for (auto& s : c.alphabet) f.alphabet.insert(s);
            f.add_edge(f.initial, "", c.initial);
            for (auto& fin : c.finals) f.finals.insert(fin);
        }
        return f;
    }

    Nfa letter_star(const std::set<Symbol>& letters) {
        Nfa f = empty_word();
        for (auto& a : letters) f.add_edge(f.initial, a, f.initial);
        return f;
    }
};

}  // namespace

Nfa downclosure_nfa(const Pda& p, size_t max_states) {
    Grammar g = staircase_grammar(p);

    // productivity
    std::vector<char> productive(g.n_nts, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& pr : g.prods) {
            if (productive[pr.lhs]) continue;
            bool ok = true;
            for (auto& it : pr.rhs)
                if (!it.terminal && !productive[it.nt]) { ok = false; break; }
            if (ok) { productive[pr.lhs] = 1; changed = true; }
        }
    }
    if (!productive[g.start]) {
        // empty language: downclosure is empty as well
        Nfa f;
        f.initial = "dead";
        f.states = {"dead"};
        f.alphabet = p.input_alphabet;
        return f;
    }
    std::vector<Prod> prods;
    for (auto& pr : g.prods) {
        if (!productive[pr.lhs]) continue;
        bool ok = true;
        for (auto& it : pr.rhs)
            if (!it.terminal && !productive[it.nt]) { ok = false; break; }
        if (ok) prods.push_back(pr);
    }

    // reachability from S
    std::vector<std::vector<const Prod*>> by_lhs(g.n_nts);
    for (auto& pr : prods) by_lhs[pr.lhs].push_back(&pr);
    std::vector<char> reach(g.n_nts, 0);
    std::deque<int> work{g.start};
    reach[g.start] = 1;
    while (!work.empty()) {
        int a = work.front();
        work.pop_front();
        for (auto* pr : by_lhs[a])
            for (auto& it : pr->rhs)
                if (!it.terminal && !reach[it.nt]) {
                    reach[it.nt] = 1;
                    work.push_back(it.nt);
                }
    }

    // letters derivable from each nonterminal
    std::vector<std::set<Symbol>> letters(g.n_nts);
    changed = true;
    while (changed) {
        changed = false;
        for (auto& pr : prods) {
            if (!reach[pr.lhs]) continue;
            auto& dst = letters[pr.lhs];
            size_t before = dst.size();
            for (auto& it : pr.rhs) {
                if (it.terminal) dst.insert(it.letter);
                else dst.insert(letters[it.nt].begin(), letters[it.nt].end());
            }
            if (dst.size() != before) changed = true;
        }
    }

    // SCCs of the dependency graph (Tarjan, iterative)
    std::vector<std::vector<int>> dep(g.n_nts);
    for (auto& pr : prods) {
        if (!reach[pr.lhs]) continue;
        for (auto& it : pr.rhs)
            if (!it.terminal) dep[pr.lhs].push_back(it.nt);
    }
    std::vector<int> comp(g.n_nts, -1), low(g.n_nts), disc(g.n_nts, -1), stk;
    std::vector<char> on_stack(g.n_nts, 0);
    int time = 0, n_comp = 0;
    std::function<void(int)> tarjan = [&](int v) {
        struct Frame { int v; size_t ei; };
        std::vector<Frame> frames{{v, 0}};
        disc[v] = low[v] = time++;
        stk.push_back(v);
        on_stack[v] = 1;
        while (!frames.empty()) {
            auto& fr = frames.back();
            if (fr.ei < dep[fr.v].size()) {
                int w = dep[fr.v][fr.ei++];
                if (disc[w] == -1) {
                    disc[w] = low[w] = time++;
                    stk.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], disc[w]);
                }
            } else {
                if (low[fr.v] == disc[fr.v]) {
                    while (true) {
                        int w = stk.back();
                        stk.pop_back();
                        on_stack[w] = 0;
                        comp[w] = n_comp;
                        if (w == fr.v) break;
                    }
                    ++n_comp;
                }
                int vv = fr.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[vv]);
            }
        }
    };
    for (int v = 0; v < g.n_nts; ++v)
        if (reach[v] && disc[v] == -1) tarjan(v);

    // group members and productions per SCC
    std::vector<std::vector<int>> members(n_comp);
    for (int v = 0; v < g.n_nts; ++v)
        if (reach[v] && comp[v] >= 0) members[comp[v]].push_back(v);
    std::vector<std::vector<const Prod*>> comp_prods(n_comp);
    for (auto& pr : prods)
        if (reach[pr.lhs]) comp_prods[comp[pr.lhs]].push_back(&pr);

    FragmentBuilder fb{max_states};
    std::vector<Nfa> frag(g.n_nts);
    std::vector<char> built(g.n_nts, 0);

    // Tarjan numbers components in reverse topological order: dependencies of a
    // component get smaller numbers, so process components in index order
    for (int c = 0; c < n_comp; ++c) {
        // recursive if some member depends on a member of the same component
        bool recursive = false;
        for (auto* pr : comp_prods[c])
            for (auto& it : pr->rhs)
                if (!it.terminal && comp[it.nt] == c) recursive = true;
        if (!recursive) {
            for (int m : members[c]) {
                std::vector<Nfa> parts;
                for (auto* pr : comp_prods[c]) {
                    if (pr->lhs != m) continue;
                    Nfa acc = fb.empty_word();
                    for (auto& it : pr->rhs) {
                        if (it.terminal) acc = fb.concat(std::move(acc), fb.letter_or_eps(it.letter));
                        else acc = fb.concat(std::move(acc), frag[it.nt]);
                    }
                    parts.push_back(std::move(acc));
                }
                frag[m] = parts.empty() ? fb.empty_word() : fb.union_of(parts);
                built[m] = 1;
            }
            continue;
        }
        // recursive component: branching => letter-star; linear => sandwich
        bool branching = false;
        for (auto* pr : comp_prods[c]) {
            int cnt = 0;
            for (auto& it : pr->rhs)
                if (!it.terminal && comp[it.nt] == c) ++cnt;
            if (cnt >= 2) branching = true;
        }
        std::set<Symbol> comp_letters;
        for (int m : members[c]) comp_letters.insert(letters[m].begin(), letters[m].end());
        Nfa shared;
        if (branching) {
            shared = fb.letter_star(comp_letters);
        } else {
            std::set<Symbol> lam, rho;
            std::vector<Nfa> exits;
            for (auto* pr : comp_prods[c]) {
                int pos = -1;
                for (size_t i = 0; i < pr->rhs.size(); ++i)
                    if (!pr->rhs[i].terminal && comp[pr->rhs[i].nt] == c) pos = static_cast<int>(i);
                if (pos < 0) {
                    Nfa acc = fb.empty_word();
                    for (auto& it : pr->rhs) {
                        if (it.terminal) acc = fb.concat(std::move(acc), fb.letter_or_eps(it.letter));
                        else acc = fb.concat(std::move(acc), frag[it.nt]);
                    }
                    exits.push_back(std::move(acc));
                } else {
                    for (size_t i = 0; i < pr->rhs.size(); ++i) {
                        auto& it = pr->rhs[i];
                        auto& dst = (static_cast<int>(i) < pos) ? lam : rho;
                        if (static_cast<int>(i) == pos) continue;
                        if (it.terminal) dst.insert(it.letter);
                        else dst.insert(letters[it.nt].begin(), letters[it.nt].end());
                    }
                }
            }
            Nfa mid = exits.empty() ? fb.empty_word() : fb.union_of(exits);
            if (exits.empty()) {
                // no exit: the component generates nothing on its own; its
                // members were productive only through eps-producing cycles
                mid = fb.empty_word();
            }
            shared = fb.concat(fb.concat(fb.letter_star(lam), mid), fb.letter_star(rho));
        }
        for (int m : members[c]) {
            frag[m] = shared;
            built[m] = 1;
        }
    }

    Nfa result = nfa_trim(frag[g.start]);
    for (auto& a : p.input_alphabet) result.alphabet.insert(a);
    return result;
}

// --------------------------------------------------------- Theta machinery

Pda counter_pad_pda(const Pda& p, const std::set<Symbol>& theta, uint64_t k,
                    const Symbol& pad, size_t max_states) {
    if (p.input_alphabet.count(pad))
        throw AlphabetError("counter_pad_pda: pad letter already in alphabet");
    if ((k + 1) * p.states.size() > max_states)
        throw SizeGuardError("counter_pad_pda: (K+1)*|Q| exceeds ceiling");
    Pda out;
    auto name = [&](const std::string& q, uint64_t c) { return q + "%" + std::to_string(c); };
    out.initial = name(p.initial, 0);
    out.stack_init = p.stack_init;
    out.stack_alphabet = p.stack_alphabet;
    for (auto& q : p.states)
        for (uint64_t c = 0; c <= k; ++c) out.states.insert(name(q, c));
    for (auto& e : p.edges) {
        bool counted = !e.letter.empty() && theta.count(e.letter);
        for (uint64_t c = 0; c <= k; ++c) {
            if (counted) {
                if (c + 1 <= k) out.add_edge(name(e.from, c), e.letter, e.op, name(e.to, c + 1));
            } else {
                out.add_edge(name(e.from, c), e.letter, e.op, name(e.to, c));
            }
        }
    }
    for (auto& f : p.finals) {
        for (uint64_t c = 0; c + 1 <= k; ++c)
            out.add_edge(name(f, c), pad, StackOp::none(), name(f, c + 1));
        out.finals.insert(name(f, k));
    }
    return out;
}

Nfa nfa_count_filter(const Nfa& a, const std::set<Symbol>& counted, uint64_t k) {
    Nfa out;
    auto name = [&](const std::string& q, uint64_t c) { return q + "%" + std::to_string(c); };
    out.initial = name(a.initial, 0);
    out.alphabet = a.alphabet;
    for (auto& q : a.states)
        for (uint64_t c = 0; c <= k; ++c) out.states.insert(name(q, c));
    for (auto& e : a.edges) {
        bool cnt = !e.letter.empty() && counted.count(e.letter);
        for (uint64_t c = 0; c <= k; ++c) {
            if (cnt) {
                if (c + 1 <= k) out.add_edge(name(e.from, c), e.letter, name(e.to, c + 1));
            } else {
                out.add_edge(name(e.from, c), e.letter, name(e.to, c));
            }
        }
    }
    for (auto& f : a.finals) out.finals.insert(name(f, k));
    return nfa_trim(out);
}

Nfa theta_downclosure_nfa(const Pda& p, const ThetaClosureSpec& spec, size_t max_states) {
    for (auto& a : spec.theta)
        if (!p.input_alphabet.count(a))
            throw AlphabetError("theta_downclosure_nfa: theta letter outside alphabet: " + a);
    if (!spec.bound.fits_u64())
        throw SizeGuardError("theta_downclosure_nfa: K too large for explicit counters");
    uint64_t k = spec.bound.to_u64();
    const Symbol pad = "__pad";
    Pda padded = counter_pad_pda(p, spec.theta, k, pad, max_states);
    Nfa closed = downclosure_nfa(padded, max_states);
    if ((k + 1) * std::max<size_t>(closed.states.size(), 1) > max_states)
        throw SizeGuardError("theta_downclosure_nfa: (K+1)*|downclosure states| exceeds ceiling");
    std::set<Symbol> counted = spec.theta;
    counted.insert(pad);
    Nfa filtered = nfa_count_filter(closed, counted, k);
    Nfa renamed = nfa_rename_letter(filtered, pad, "");
    renamed.alphabet = p.input_alphabet;
    return nfa_trim(renamed);
}

}  // namespace poolcheck
