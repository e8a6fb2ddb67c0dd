#include "poolcheck/dcbp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace poolcheck {

// ---------------------------------------------------------------- validation

void Dcps::validate() const {
    auto chk_g = [&](const std::string& g) {
        if (!globals.count(g)) throw FormatError("dcps: unknown global " + g);
    };
    auto chk_s = [&](const Symbol& s) {
        if (!stack_alphabet.count(s)) throw FormatError("dcps: unknown stack symbol " + s);
    };
    chk_g(initial_global);
    chk_s(initial_symbol);
    for (auto& r : creation) {
        chk_g(r.g);
        chk_g(r.g2);
        chk_s(r.gamma);
        if (r.push.size() > 2) throw FormatError("dcps: |w'| > 2 in creation rule");
        for (auto& s : r.push) chk_s(s);
        if (r.spawn) chk_s(*r.spawn);
    }
    for (auto& r : interrupt) {
        chk_g(r.g);
        chk_g(r.g2);
        chk_s(r.gamma);
        if (r.push.empty() || r.push.size() > 2)
            throw FormatError("dcps: interrupt rule needs 1 <= |w'| <= 2");
        for (auto& s : r.push) chk_s(s);
    }
    for (auto& r : resume) {
        chk_g(r.g);
        chk_g(r.g2);
        chk_s(r.gamma);
    }
    for (auto& r : terminate) {
        chk_g(r.g);
        chk_g(r.g2);
    }
}

void Dcbp::validate() const {
    size_t mn = m() + n();
    auto chk_bits = [&](const Transducer& t, size_t len, const char* what) {
        // transducers over {0,1} relating length-`len` strings; length is
        // enforced behaviorally, here we check the alphabet
        for (auto& a : t.alphabet)
            if (a != "0" && a != "1")
                throw FormatError(std::string("dcbp: ") + what + " transducer alphabet must be {0,1}");
        (void)len;
    };
    if (initial_assignment.size() != m()) throw FormatError("dcbp: initial assignment length");
    if (!stack_alphabet.count(initial_symbol)) throw FormatError("dcbp: unknown initial symbol");
    for (auto& [key, t] : creation) {
        auto& [sp, op] = key;
        if (!sp.empty() && !stack_alphabet.count(sp))
            throw FormatError("dcbp: unknown spawn symbol " + sp);
        if (op.kind != StackOp::None && !stack_alphabet.count(op.sym))
            throw FormatError("dcbp: unknown stack symbol in op");
        chk_bits(t, mn, "creation");
    }
    for (auto& [g, t] : swap) {
        if (!g.empty() && !stack_alphabet.count(g)) throw FormatError("dcbp: unknown swap symbol");
        chk_bits(t, mn, "swap");
    }
    for (auto& [g, t] : resume) {
        if (!stack_alphabet.count(g)) throw FormatError("dcbp: unknown resume symbol");
        chk_bits(t, m(), "resume");
    }
    chk_bits(terminate, m(), "terminate");
}

// ---------------------------------------------------------------- formats

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string join_word(const std::vector<Symbol>& w) {
    if (w.empty()) return "eps";
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ".";
        s += w[i];
    }
    return s;
}

std::vector<Symbol> split_word(const std::string& s) {
    if (s == "eps") return {};
    std::vector<Symbol> out;
    std::string cur;
    for (char c : s) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else
            cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string dcps_to_text(const Dcps& d) {
    std::ostringstream os;
    os << "dcps\nglobal";
    for (auto& g : d.globals) os << " " << g;
    os << "\nstack";
    for (auto& s : d.stack_alphabet) os << " " << s;
    os << "\ninit " << d.initial_global << " " << d.initial_symbol << "\n";
    for (auto& r : d.creation) {
        os << "c " << r.g << " " << r.gamma << " " << r.g2 << " " << join_word(r.push);
        if (r.spawn) os << " spawn:" << *r.spawn;
        os << "\n";
    }
    for (auto& r : d.interrupt)
        os << "i " << r.g << " " << r.gamma << " " << r.g2 << " " << join_word(r.push) << "\n";
    for (auto& r : d.resume) os << "r " << r.g << " " << r.g2 << " " << r.gamma << "\n";
    for (auto& r : d.terminate) os << "t " << r.g << " " << r.g2 << "\n";
    return os.str();
}

Dcps dcps_from_text(const std::string& text) {
    Dcps d;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header) {
            if (toks[0] != "dcps") throw FormatError("dcps_from_text: missing header");
            header = true;
            continue;
        }
        if (toks[0] == "global") {
            for (size_t i = 1; i < toks.size(); ++i) d.globals.insert(toks[i]);
        } else if (toks[0] == "stack") {
            for (size_t i = 1; i < toks.size(); ++i) d.stack_alphabet.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 3) {
            d.initial_global = toks[1];
            d.initial_symbol = toks[2];
        } else if (toks[0] == "c" && (toks.size() == 5 || toks.size() == 6)) {
            DcpsCreationRule r{toks[1], toks[2], toks[3], split_word(toks[4]), std::nullopt};
            if (toks.size() == 6) {
                if (toks[5].rfind("spawn:", 0) != 0)
                    throw FormatError("dcps: expected spawn: suffix");
                r.spawn = toks[5].substr(6);
            }
            d.creation.push_back(std::move(r));
        } else if (toks[0] == "i" && toks.size() == 5) {
            d.interrupt.push_back({toks[1], toks[2], toks[3], split_word(toks[4])});
        } else if (toks[0] == "r" && toks.size() == 4) {
            d.resume.push_back({toks[1], toks[2], toks[3]});
        } else if (toks[0] == "t" && toks.size() == 3) {
            d.terminate.push_back({toks[1], toks[2]});
        } else {
            throw FormatError("dcps_from_text: cannot parse line: " + line);
        }
    }
    d.validate();
    return d;
}

namespace {

std::string stack_op_token(const StackOp& op) {
    if (op.kind == StackOp::Push) return "push:" + op.sym;
    if (op.kind == StackOp::Pop) return "pop:" + op.sym;
    return "eps";
}

StackOp parse_stack_op(const std::string& s) {
    if (s.rfind("push:", 0) == 0) return StackOp::push(s.substr(5));
    if (s.rfind("pop:", 0) == 0) return StackOp::pop(s.substr(4));
    if (s == "eps") return StackOp::none();
    throw FormatError("bad stack op token: " + s);
}

}  // namespace

std::string dcbp_to_text(const Dcbp& d) {
    std::ostringstream os;
    os << "dcbp\nglobals";
    for (auto& g : d.globals) os << " " << g;
    os << "\nlocals";
    for (auto& l : d.locals) os << " " << l;
    os << "\nstack";
    for (auto& s : d.stack_alphabet) os << " " << s;
    os << "\ninit " << d.initial_assignment << " " << d.initial_symbol << "\n";
    auto block = [&](const std::string& head, const Transducer& t) {
        os << "begin " << head << "\n" << transducer_to_text(t) << "end\n";
    };
    for (auto& [key, t] : d.creation) {
        auto& [sp, op] = key;
        block("creation spawn=" + (sp.empty() ? std::string("eps") : sp) +
                  " op=" + stack_op_token(op),
              t);
    }
    for (auto& [g, t] : d.swap)
        block("swap push=" + (g.empty() ? std::string("eps") : g), t);
    for (auto& [g, t] : d.resume) block("resume top=" + g, t);
    block("terminate", d.terminate);
    return os.str();
}

Dcbp dcbp_from_text(const std::string& text) {
    Dcbp d;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header) {
            if (toks[0] != "dcbp") throw FormatError("dcbp_from_text: missing header");
            header = true;
            continue;
        }
        if (toks[0] == "globals") {
            for (size_t i = 1; i < toks.size(); ++i) d.globals.push_back(toks[i]);
        } else if (toks[0] == "locals") {
            for (size_t i = 1; i < toks.size(); ++i) d.locals.push_back(toks[i]);
        } else if (toks[0] == "stack") {
            for (size_t i = 1; i < toks.size(); ++i) d.stack_alphabet.insert(toks[i]);
        } else if (toks[0] == "init" && toks.size() == 3) {
            d.initial_assignment = toks[1];
            d.initial_symbol = toks[2];
        } else if (toks[0] == "begin") {
            std::string kind = toks.size() > 1 ? toks[1] : "";
            std::ostringstream body;
            while (std::getline(is, line)) {
                auto t2 = split_ws(line);
                if (!t2.empty() && t2[0] == "end") break;
                body << line << "\n";
            }
            Transducer t = transducer_from_text(body.str());
            if (kind == "creation") {
                Symbol sp;
                StackOp op = StackOp::none();
                for (size_t i = 2; i < toks.size(); ++i) {
                    if (toks[i].rfind("spawn=", 0) == 0) {
                        sp = toks[i].substr(6);
                        if (sp == "eps") sp = "";
                    } else if (toks[i].rfind("op=", 0) == 0) {
                        op = parse_stack_op(toks[i].substr(3));
                    }
                }
                d.creation[{sp, op}] = std::move(t);
            } else if (kind == "swap") {
                Symbol g;
                if (toks.size() > 2 && toks[2].rfind("push=", 0) == 0) g = toks[2].substr(5);
                if (g == "eps") g = "";
                d.swap[g] = std::move(t);
            } else if (kind == "resume") {
                Symbol g;
                if (toks.size() > 2 && toks[2].rfind("top=", 0) == 0) g = toks[2].substr(4);
                d.resume[g] = std::move(t);
            } else if (kind == "terminate") {
                d.terminate = std::move(t);
            } else {
                throw FormatError("dcbp_from_text: unknown block kind " + kind);
            }
        } else {
            throw FormatError("dcbp_from_text: cannot parse line: " + line);
        }
    }
    d.validate();
    return d;
}

// ---------------------------------------------------------------- simulator

void Configuration::canonicalize() { std::sort(pool.begin(), pool.end()); }

bool Configuration::operator==(const Configuration& o) const {
    return global == o.global && active == o.active && pool == o.pool && buffer == o.buffer;
}

bool Configuration::operator<(const Configuration& o) const {
    if (global != o.global) return global < o.global;
    if (active != o.active) return active < o.active;
    if (pool != o.pool) return pool < o.pool;
    return buffer < o.buffer;
}

Configuration initial_configuration(const ConcSystem& sys) {
    Configuration c;
    if (auto* d = std::get_if<Dcps>(&sys)) {
        c.global = d->initial_global;
        c.pool.push_back({"", {d->initial_symbol}, 0});
    } else {
        auto& db = std::get<Dcbp>(sys);
        c.global = db.initial_assignment;
        c.pool.push_back({std::string(db.n(), '0'), {db.initial_symbol}, 0});
    }
    return c;
}

std::set<std::string> transducer_outputs(const Transducer& t, const std::string& input) {
    // frontier of (state, output-so-far) at each input position; eps edges move
    // within a position
    std::set<std::pair<std::string, std::string>> frontier{{t.initial, ""}};
    for (size_t pos = 0; pos <= input.size(); ++pos) {
        // eps closure at this position
        std::deque<std::pair<std::string, std::string>> work(frontier.begin(), frontier.end());
        while (!work.empty()) {
            auto [q, outp] = work.front();
            work.pop_front();
            for (auto& e : t.edges) {
                if (e.from != q || !e.labels[0].empty()) continue;
                if (frontier.insert({e.to, outp}).second) work.push_back({e.to, outp});
            }
        }
        if (pos == input.size()) break;
        std::set<std::pair<std::string, std::string>> next;
        std::string in(1, input[pos]);
        for (auto& [q, outp] : frontier) {
            for (auto& e : t.edges) {
                if (e.from != q || e.labels[0] != in) continue;
                next.insert({e.to, outp + e.labels[1]});
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) return {};
    }
    std::set<std::string> out;
    for (auto& [q, outp] : frontier)
        if (t.finals.count(q)) out.insert(outp);
    return out;
}

namespace {

std::vector<Symbol> apply_pop_push(const std::vector<Symbol>& stack,
                                   const std::vector<Symbol>& push_top_first) {
    // caller already checked the top; pop it and push w' (top-first)
    std::vector<Symbol> s(stack.begin(), stack.end() - 1);
    for (size_t i = push_top_first.size(); i-- > 0;) s.push_back(push_top_first[i]);
    return s;
}

}  // namespace

std::vector<std::pair<Step, Configuration>> thread_step(const ConcSystem& sys,
                                                        const Configuration& c) {
    std::vector<std::pair<Step, Configuration>> out;
    if (!c.active) return out;
    const ThreadState& th = *c.active;
    if (auto* d = std::get_if<Dcps>(&sys)) {
        if (th.stack.empty()) return out;
        for (size_t i = 0; i < d->creation.size(); ++i) {
            auto& r = d->creation[i];
            if (r.g != c.global || r.gamma != th.stack.back()) continue;
            Configuration n = c;
            n.global = r.g2;
            n.active->stack = apply_pop_push(th.stack, r.push);
            if (r.spawn) n.buffer.add(*r.spawn);
            out.push_back({Step{Step::Thread, i, 0, ""}, std::move(n)});
        }
    } else {
        auto& db = std::get<Dcbp>(sys);
        std::string in = c.global + th.locals;
        size_t rule_idx = 0;
        for (auto& [key, t] : db.creation) {
            auto& [sp, op] = key;
            bool stack_ok = true;
            std::vector<Symbol> new_stack = th.stack;
            switch (op.kind) {
                case StackOp::None:
                    break;
                case StackOp::Push:
                    new_stack.push_back(op.sym);
                    break;
                case StackOp::Pop:
                    if (th.stack.empty() || th.stack.back() != op.sym) stack_ok = false;
                    else new_stack.pop_back();
                    break;
            }
            if (stack_ok) {
                for (auto& o : transducer_outputs(t, in)) {
                    if (o.size() != in.size()) continue;  // length preservation
                    Configuration n = c;
                    n.global = o.substr(0, db.m());
                    n.active->locals = o.substr(db.m());
                    n.active->stack = new_stack;
                    if (!sp.empty()) n.buffer.add(sp);
                    out.push_back({Step{Step::Thread, rule_idx, 0, ""}, std::move(n)});
                }
            }
            ++rule_idx;
        }
    }
    for (auto& [s, n] : out) n.canonicalize();
    return out;
}

std::vector<std::pair<Step, Configuration>> scheduler_step(const ConcSystem& sys,
                                                           const Configuration& c,
                                                           PoolBound N, uint64_t K) {
    std::vector<std::pair<Step, Configuration>> out;
    if (c.active) {
        const ThreadState& th = *c.active;
        // Swap
        if (auto* d = std::get_if<Dcps>(&sys)) {
            if (!th.stack.empty()) {
                for (size_t i = 0; i < d->interrupt.size(); ++i) {
                    auto& r = d->interrupt[i];
                    if (r.g != c.global || r.gamma != th.stack.back()) continue;
                    Configuration n = c;
                    n.global = r.g2;
                    ThreadState parked = th;
                    parked.stack = apply_pop_push(th.stack, r.push);
                    parked.switches += 1;
                    n.pool.push_back(std::move(parked));
                    n.active.reset();
                    out.push_back({Step{Step::Swap, i, 0, ""}, std::move(n)});
                }
            }
        } else {
            auto& db = std::get<Dcbp>(sys);
            std::string in = c.global + th.locals;
            size_t rule_idx = 0;
            for (auto& [gpush, t] : db.swap) {
                for (auto& o : transducer_outputs(t, in)) {
                    if (o.size() != in.size()) continue;
                    Configuration n = c;
                    n.global = o.substr(0, db.m());
                    ThreadState parked = th;
                    parked.locals = o.substr(db.m());
                    if (!gpush.empty()) parked.stack.push_back(gpush);
                    parked.switches += 1;
                    n.pool.push_back(std::move(parked));
                    n.active.reset();
                    out.push_back({Step{Step::Swap, rule_idx, 0, ""}, std::move(n)});
                }
                ++rule_idx;
            }
        }
        // Terminate: active thread with empty stack
        if (th.stack.empty()) {
            if (auto* d = std::get_if<Dcps>(&sys)) {
                for (size_t i = 0; i < d->terminate.size(); ++i) {
                    auto& r = d->terminate[i];
                    if (r.g != c.global) continue;
                    Configuration n = c;
                    n.global = r.g2;
                    n.active.reset();
                    out.push_back({Step{Step::Terminate, i, 0, ""}, std::move(n)});
                }
            } else {
                auto& db = std::get<Dcbp>(sys);
                for (auto& o : transducer_outputs(db.terminate, c.global)) {
                    if (o.size() != c.global.size()) continue;
                    Configuration n = c;
                    n.global = o;
                    n.active.reset();
                    out.push_back({Step{Step::Terminate, 0, 0, ""}, std::move(n)});
                }
            }
        }
    } else {
        // Resume: never schedules a thread already context switched K+1 times
        for (size_t pi = 0; pi < c.pool.size(); ++pi) {
            const ThreadState& th = c.pool[pi];
            if (th.switches > K) continue;
            if (th.stack.empty()) continue;
            const Symbol& top = th.stack.back();
            if (auto* d = std::get_if<Dcps>(&sys)) {
                for (size_t i = 0; i < d->resume.size(); ++i) {
                    auto& r = d->resume[i];
                    if (r.g != c.global || r.gamma != top) continue;
                    Configuration n = c;
                    n.global = r.g2;
                    n.active = th;
                    n.pool.erase(n.pool.begin() + static_cast<long>(pi));
                    out.push_back({Step{Step::Resume, i, pi, ""}, std::move(n)});
                }
            } else {
                auto& db = std::get<Dcbp>(sys);
                auto it = db.resume.find(top);
                if (it == db.resume.end()) continue;
                for (auto& o : transducer_outputs(it->second, c.global)) {
                    if (o.size() != c.global.size()) continue;
                    Configuration n = c;
                    n.global = o;
                    n.active = th;
                    n.pool.erase(n.pool.begin() + static_cast<long>(pi));
                    out.push_back({Step{Step::Resume, 0, pi, ""}, std::move(n)});
                }
            }
        }
        // Pick: requires |pool| < N
        bool space = !N || c.pool.size() < *N;
        if (space) {
            for (auto& [gamma, cnt] : c.buffer.entries()) {
                Configuration n = c;
                n.buffer.remove(gamma);
                ThreadState fresh;
                if (auto* d = std::get_if<Dcbp>(&sys)) fresh.locals = std::string(d->n(), '0');
                fresh.stack = {gamma};
                fresh.switches = 0;
                n.pool.push_back(std::move(fresh));
                out.push_back({Step{Step::Pick, 0, 0, gamma}, std::move(n)});
            }
        }
    }
    for (auto& [s, n] : out) n.canonicalize();
    return out;
}

SimVerdict simulate(const ConcSystem& sys, const TargetPredicate& target, PoolBound N,
                    uint64_t K, size_t depth_bound, size_t max_configs) {
    SimVerdict v;
    Configuration init = initial_configuration(sys);
    init.canonicalize();
    std::map<Configuration, std::pair<long, Step>> parent;  // index of parent in order
    std::vector<Configuration> order;

    auto emit_witness = [&](const Configuration& c) {
        Witness w;
        Configuration cur = c;
        while (true) {
            auto& [pidx, st] = parent.at(cur);
            if (pidx < 0) break;
            w.steps.push_back(st);
            cur = order[static_cast<size_t>(pidx)];
        }
        std::reverse(w.steps.begin(), w.steps.end());
        return w;
    };

    parent[init] = {-1, Step{}};
    order.push_back(init);
    std::deque<std::pair<size_t, size_t>> queue;  // (index into order, depth)
    queue.push_back({0, 0});
    if (target(init.global)) {
        v.reachable = true;
        v.witness = emit_witness(init);
        v.explored = 1;
        return v;
    }
    bool truncated = false;
    while (!queue.empty()) {
        auto [cidx, depth] = queue.front();
        queue.pop_front();
        if (depth == depth_bound) {
            truncated = true;
            continue;
        }
        Configuration c = order[cidx];
        auto succs = thread_step(sys, c);
        auto sched = scheduler_step(sys, c, N, K);
        succs.insert(succs.end(), sched.begin(), sched.end());
        for (auto& [st, n] : succs) {
            if (parent.count(n)) continue;
            parent[n] = {static_cast<long>(cidx), st};
            order.push_back(n);
            if (target(n.global)) {
                v.reachable = true;
                v.witness = emit_witness(n);
                v.explored = order.size();
                return v;
            }
            if (order.size() >= max_configs) {
                v.explored = order.size();
                v.exhausted = false;
                return v;
            }
            queue.push_back({order.size() - 1, depth + 1});
        }
    }
    v.explored = order.size();
    v.exhausted = !truncated;
    return v;
}

bool replay(const ConcSystem& sys, const Witness& w, PoolBound N, uint64_t K) {
    Configuration c = initial_configuration(sys);
    c.canonicalize();
    for (auto& st : w.steps) {
        std::vector<std::pair<Step, Configuration>> succs;
        if (st.kind == Step::Thread) succs = thread_step(sys, c);
        else succs = scheduler_step(sys, c, N, K);
        bool found = false;
        for (auto& [s2, n] : succs) {
            if (s2.kind != st.kind) continue;
            if (st.kind == Step::Pick ? (s2.symbol == st.symbol)
                                      : (s2.rule == st.rule &&
                                         (st.kind != Step::Resume || s2.pool_index == st.pool_index))) {
                c = n;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

uint64_t configuration_size(const ConcSystem& sys, const Configuration& c) {
    uint64_t m = 0, n = 0;
    if (auto* d = std::get_if<Dcbp>(&sys)) {
        m = d->m();
        n = d->n();
    }
    uint64_t s = m;
    if (c.active) s += n + c.active->stack.size();
    for (auto& th : c.pool) s += n + th.stack.size();
    s += c.buffer.size();
    return s;
}

// ---------------------------------------------------------------- witnesses

std::string witness_to_text(const Witness& w) {
    std::ostringstream os;
    os << "witness\n";
    for (auto& s : w.steps) {
        switch (s.kind) {
            case Step::Thread: os << "thread " << s.rule << "\n"; break;
            case Step::Swap: os << "swap " << s.rule << "\n"; break;
            case Step::Resume: os << "resume " << s.rule << " pool " << s.pool_index << "\n"; break;
            case Step::Terminate: os << "terminate " << s.rule << "\n"; break;
            case Step::Pick: os << "pick " << s.symbol << "\n"; break;
        }
    }
    return os.str();
}

Witness witness_from_text(const std::string& text) {
    Witness w;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!header) {
            if (toks[0] != "witness") throw FormatError("witness_from_text: missing header");
            header = true;
            continue;
        }
        if (toks[0] == "thread" && toks.size() == 2)
            w.steps.push_back({Step::Thread, std::stoul(toks[1]), 0, ""});
        else if (toks[0] == "swap" && toks.size() == 2)
            w.steps.push_back({Step::Swap, std::stoul(toks[1]), 0, ""});
        else if (toks[0] == "resume" && toks.size() == 4 && toks[2] == "pool")
            w.steps.push_back({Step::Resume, std::stoul(toks[1]), std::stoul(toks[3]), ""});
        else if (toks[0] == "terminate" && toks.size() == 2)
            w.steps.push_back({Step::Terminate, std::stoul(toks[1]), 0, ""});
        else if (toks[0] == "pick" && toks.size() == 2)
            w.steps.push_back({Step::Pick, 0, 0, toks[1]});
        else
            throw FormatError("witness_from_text: cannot parse line: " + line);
    }
    return w;
}

// ------------------------------------------------------------- task letters

Symbol task_letter_encode(const TaskLetter& l) {
    switch (l.kind) {
        case TaskLetter::Spawn: return l.spawned;
        case TaskLetter::Jump: return "cs(" + l.g1 + "," + l.top + "," + l.g2 + ")";
        case TaskLetter::TermProper: return "end(" + l.g + ",term)";
        case TaskLetter::TermSwap: return "end(" + l.g + ",swap)";
    }
    return "";
}

std::optional<TaskLetter> task_letter_decode(const Symbol& s) {
    TaskLetter l{};
    if (s.rfind("cs(", 0) == 0 && s.back() == ')') {
        auto body = s.substr(3, s.size() - 4);
        auto c1 = body.find(',');
        auto c2 = body.rfind(',');
        if (c1 == std::string::npos || c2 == c1) return std::nullopt;
        l.kind = TaskLetter::Jump;
        l.g1 = body.substr(0, c1);
        l.top = body.substr(c1 + 1, c2 - c1 - 1);
        l.g2 = body.substr(c2 + 1);
        return l;
    }
    if (s.rfind("end(", 0) == 0 && s.back() == ')') {
        auto body = s.substr(4, s.size() - 5);
        auto c = body.rfind(',');
        if (c == std::string::npos) return std::nullopt;
        l.g = body.substr(0, c);
        auto kind = body.substr(c + 1);
        if (kind == "term") l.kind = TaskLetter::TermProper;
        else if (kind == "swap") l.kind = TaskLetter::TermSwap;
        else return std::nullopt;
        return l;
    }
    return std::nullopt;
}

// ------------------------------------------------------------- task-PDA

Pda task_pda_explicit(const Dcps& sys, const std::string& g, const Symbol& gamma) {
    if (!sys.globals.count(g)) throw FormatError("task_pda_explicit: unknown global");
    if (!sys.stack_alphabet.count(gamma)) throw FormatError("task_pda_explicit: unknown symbol");
    Pda p;
    const Symbol bot = "_bot";
    p.stack_init = bot;
    p.stack_alphabet = sys.stack_alphabet;
    p.stack_alphabet.insert(bot);
    auto st = [](const std::string& gg) { return "st:" + gg; };
    auto rs = [](const std::string& gg, const Symbol& top) { return "rs:" + gg + "," + top; };
    p.initial = "init";
    p.finals = {"init", "end"};
    p.states.insert("init");
    p.states.insert("end");
    for (auto& gg : sys.globals) p.states.insert(st(gg));
    int fresh = 0;
    auto mid = [&]() { return "m" + std::to_string(fresh++); };

    // resumable interfaces: (g3, γ2) such that some E_r rule targets g3 with γ2
    std::set<std::pair<std::string, Symbol>> resumable;
    for (auto& r : sys.resume) resumable.insert({r.g2, r.gamma});

    // rule 1: init --eps|push γ--> st(g)
    p.add_edge("init", "", StackOp::push(gamma), st(g));

    // helper: chain pop γ1 then push w (top-first), reading `letter` first
    auto pop_push_chain = [&](const std::string& from, const Symbol& letter,
                              const Symbol& gamma1, const std::vector<Symbol>& push,
                              const std::string& to) {
        std::string cur = from;
        Symbol lead = letter;
        // pop γ1
        std::string nxt = push.empty() ? to : mid();
        p.add_edge(cur, lead, StackOp::pop(gamma1), nxt);
        cur = nxt;
        for (size_t i = push.size(); i-- > 0;) {
            std::string dst = (i == 0) ? to : mid();
            p.add_edge(cur, "", StackOp::push(push[i]), dst);
            cur = dst;
        }
    };

    // rules 2, 3: E_c
    for (auto& r : sys.creation) {
        Symbol letter = r.spawn ? *r.spawn : Symbol("");
        pop_push_chain(st(r.g), letter, r.gamma, r.push, st(r.g2));
    }
    // rules 4, 5: E_i
    for (auto& r : sys.interrupt) {
        // rule 4: context switch with guessed resumption, restricted to
        // interfaces with an existing resumption rule
        for (auto& [g3, gamma2] : resumable) {
            TaskLetter jl{TaskLetter::Jump, "", r.g2, g3, gamma2, ""};
            Symbol letter = task_letter_encode(jl);
            std::string target = rs(g3, gamma2);
            if (!p.states.count(target)) {
                p.states.insert(target);
                // the top-of-stack check: pop γ2, push it back, continue at g3
                std::string chk = mid();
                p.add_edge(target, "", StackOp::pop(gamma2), chk);
                p.add_edge(chk, "", StackOp::push(gamma2), st(g3));
            }
            pop_push_chain(st(r.g), letter, r.gamma, r.push, target);
        }
        // rule 5: swapped out for the last time, never resumed
        TaskLetter tl{TaskLetter::TermSwap, "", "", "", "", r.g2};
        std::string sw = mid();
        pop_push_chain(st(r.g), "", r.gamma, r.push, sw);
        p.add_edge(sw, task_letter_encode(tl), StackOp::none(), "end");
    }
    // rule 6: E_t, only with the empty stack (bare sentinel)
    for (auto& r : sys.terminate) {
        TaskLetter tl{TaskLetter::TermProper, "", "", "", "", r.g2};
        p.add_edge(st(r.g), task_letter_encode(tl), StackOp::pop(bot), "end");
    }
    for (auto& s : sys.stack_alphabet) p.input_alphabet.insert(s);
    return p;
}

// ------------------------------------------------------------- expansion

std::string expanded_global_name(const std::string& abits, const std::string& lbits,
                                 bool active) {
    // schedule-point globals and active globals are distinct even when there
    // are no local variables
    return "g" + abits + (active ? ":" + lbits : "+sched");
}

Symbol expanded_symbol_name(const Symbol& gamma, const std::string& lbits) {
    return gamma + "+" + lbits;
}

Dcps dcbp_expand_to_dcps(const Dcbp& d, const ExpansionBudget& budget) {
    d.validate();
    Dcps out;
    out.initial_global = expanded_global_name(d.initial_assignment, "", false);
    out.initial_symbol = expanded_symbol_name(d.initial_symbol, std::string(d.n(), '0'));
    out.globals.insert(out.initial_global);
    out.stack_alphabet.insert(out.initial_symbol);

    // reachability-pruned fixpoint over discovered globals and stack symbols;
    // globals are (assignment, active-locals|none), symbols are (γ, stowed)
    struct GKey {
        std::string a, l;
        bool active = false;  // false => schedule point (l is then empty)
        bool operator<(const GKey& o) const {
            return std::tie(a, l, active) < std::tie(o.a, o.l, o.active);
        }
    };
    struct SKey {
        Symbol gamma;
        std::string l;
        bool operator<(const SKey& o) const { return std::tie(gamma, l) < std::tie(o.gamma, o.l); }
    };
    std::set<GKey> globals{{d.initial_assignment, "", false}};
    std::set<SKey> symbols{{d.initial_symbol, std::string(d.n(), '0')}};
    std::set<std::string> rules_seen;

    auto guard = [&]() {
        if (out.globals.size() > budget.max_states || out.stack_alphabet.size() > budget.max_states)
            throw SizeGuardError("dcbp_expand_to_dcps: expansion exceeds budget");
    };
    auto add_global = [&](const GKey& k) {
        auto name = expanded_global_name(k.a, k.l, k.active);
        out.globals.insert(name);
        guard();
        return globals.insert(k).second;
    };
    auto add_symbol = [&](const SKey& k) {
        out.stack_alphabet.insert(expanded_symbol_name(k.gamma, k.l));
        guard();
        return symbols.insert(k).second;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        auto cur_globals = globals;
        auto cur_symbols = symbols;
        // Resume: S(a) with symbol (γ,l): rule per T_r[γ] pair (a, a')
        for (auto& gk : cur_globals) {
            if (gk.active) continue;
            for (auto& sk : cur_symbols) {
                auto it = d.resume.find(sk.gamma);
                if (it == d.resume.end()) continue;
                for (auto& a2 : transducer_outputs(it->second, gk.a)) {
                    if (a2.size() != d.m()) continue;
                    std::string key = "r|" + gk.a + "|" + sk.gamma + "|" + sk.l + "|" + a2;
                    if (!rules_seen.insert(key).second) continue;
                    changed = true;
                    add_global({a2, sk.l, true});
                    out.resume.push_back({expanded_global_name(gk.a, "", false),
                                          expanded_global_name(a2, sk.l, true),
                                          expanded_symbol_name(sk.gamma, sk.l)});
                }
            }
        }
        // Creation / Swap / Terminate act on active globals
        for (auto& gk : cur_globals) {
            if (!gk.active) continue;
            std::string in = gk.a + gk.l;
            // creation
            for (auto& [ckey, t] : d.creation) {
                auto& [sp, op] = ckey;
                for (auto& o : transducer_outputs(t, in)) {
                    if (o.size() != in.size()) continue;
                    std::string a2 = o.substr(0, d.m()), l2 = o.substr(d.m());
                    for (auto& sk : cur_symbols) {
                        // rule is indexed by the current top symbol
                        std::vector<Symbol> push;
                        if (op.kind == StackOp::None) {
                            push = {expanded_symbol_name(sk.gamma, sk.l)};
                        } else if (op.kind == StackOp::Push) {
                            SKey pushed{op.sym, std::string(d.n(), '0')};
                            add_symbol(pushed);
                            push = {expanded_symbol_name(op.sym, pushed.l),
                                    expanded_symbol_name(sk.gamma, sk.l)};
                        } else {  // Pop
                            if (sk.gamma != op.sym) continue;
                            push = {};
                        }
                        std::string key = "c|" + in + "|" + o + "|" + sp + "|" +
                                          stack_op_token(op) + "|" + sk.gamma + "|" + sk.l;
                        if (!rules_seen.insert(key).second) continue;
                        changed = true;
                        add_global({a2, l2, true});
                        std::optional<Symbol> spawn;
                        if (!sp.empty()) {
                            SKey spk{sp, std::string(d.n(), '0')};
                            add_symbol(spk);
                            spawn = expanded_symbol_name(sp, spk.l);
                        }
                        out.creation.push_back({expanded_global_name(gk.a, gk.l, true),
                                                expanded_symbol_name(sk.gamma, sk.l),
                                                expanded_global_name(a2, l2, true), push, spawn});
                    }
                }
            }
            // swap: push variant adds (γ_s, l2) on top; eps variant rewrites the
            // top annotation to stow the locals (empty-stack eps-swaps are not
            // expressible in DCPS and are dropped; see the project notes)
            for (auto& [gpush, t] : d.swap) {
                for (auto& o : transducer_outputs(t, in)) {
                    if (o.size() != in.size()) continue;
                    std::string a2 = o.substr(0, d.m()), l2 = o.substr(d.m());
                    for (auto& sk : cur_symbols) {
                        std::vector<Symbol> push;
                        if (!gpush.empty()) {
                            SKey stow{gpush, l2};
                            add_symbol(stow);
                            push = {expanded_symbol_name(gpush, l2),
                                    expanded_symbol_name(sk.gamma, sk.l)};
                        } else {
                            SKey stow{sk.gamma, l2};
                            add_symbol(stow);
                            push = {expanded_symbol_name(sk.gamma, l2)};
                        }
                        std::string key = "s|" + in + "|" + o + "|" + gpush + "|" + sk.gamma +
                                          "|" + sk.l;
                        if (!rules_seen.insert(key).second) continue;
                        changed = true;
                        add_global({a2, "", false});
                        out.interrupt.push_back({expanded_global_name(gk.a, gk.l, true),
                                                 expanded_symbol_name(sk.gamma, sk.l),
                                                 expanded_global_name(a2, "", false), push});
                    }
                }
            }
            // terminate
            for (auto& a2 : transducer_outputs(d.terminate, gk.a)) {
                if (a2.size() != d.m()) continue;
                std::string key = "t|" + gk.a + "|" + gk.l + "|" + a2;
                if (!rules_seen.insert(key).second) continue;
                changed = true;
                add_global({a2, "", false});
                out.terminate.push_back({expanded_global_name(gk.a, gk.l, true),
                                         expanded_global_name(a2, "", false)});
            }
        }
    }
    out.validate();
    return out;
}

}  // namespace poolcheck
