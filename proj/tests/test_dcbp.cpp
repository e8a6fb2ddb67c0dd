#include <deque>
#include <random>
#include <tuple>

#include "doctest.h"
#include "fixtures.hpp"
#include "poolcheck/dcbp.hpp"
#include "poolcheck/downclosure.hpp"

using namespace poolcheck;

namespace {

// minimal DCPS: g0|y -> g1|y, target g1
Dcps toy_two_state() {
    Dcps d;
    d.globals = {"g0", "g1"};
    d.stack_alphabet = {"y"};
    d.initial_global = "g0";
    d.initial_symbol = "y";
    d.creation.push_back({"g0", "y", "g1", {"y"}, std::nullopt});
    d.resume.push_back({"g0", "g0", "y"});
    return d;
}

// a hand-built mutual-exclusion fixture in the shape of the lock/write
// example: u0 = unlocked, u1 = locked before the write, u2 = lock held and
// writing. A task requests entry (e), acquires the lock only at u0 (blocking
// otherwise), writes (h -> c sets the cs flag), leaves. The violation rule
// fires when a write starts while the cs flag is set.
Dcps fig1_style_dcps() {
    Dcps d;
    d.globals = {"u0", "u1", "u2", "err"};
    d.stack_alphabet = {"y", "e", "h", "c"};
    d.initial_global = "u0";
    d.initial_symbol = "y";
    for (auto& g : {"u0", "u1", "u2"})
        d.creation.push_back({g, "y", g, {"e"}, Symbol("y")});      // spawn + request
    d.creation.push_back({"u0", "e", "u1", {"h"}, std::nullopt});   // acquire lock
    d.creation.push_back({"u1", "h", "u2", {"c"}, std::nullopt});   // write enter
    d.creation.push_back({"u2", "h", "err", {"h"}, std::nullopt});  // write while busy
    d.creation.push_back({"u2", "c", "u0", {}, std::nullopt});      // exit + unlock
    for (auto& g : {"u0", "u1", "u2"}) {
        for (auto& s : {"y", "e", "h", "c"}) {
            d.interrupt.push_back({g, s, g, {s}});
            d.resume.push_back({g, g, s});
        }
        d.terminate.push_back({g, g});
    }
    d.validate();
    return d;
}

Dcbp tiny_dcbp() {
    // one global bit; the only creation rule sets it and spawns y2
    Dcbp d;
    d.globals = {"g"};
    d.initial_assignment = "0";
    d.stack_alphabet = {"y", "y2"};
    d.initial_symbol = "y";
    Transducer set1;
    set1.arity = 2;
    set1.initial = "s";
    set1.finals = {"f"};
    set1.add_edge("s", {"0", "1"}, "f");
    set1.add_edge("s", {"1", "1"}, "f");
    d.creation[{Symbol("y2"), StackOp::pop("y")}] = set1;
    Transducer id1 = transducer_identity({"0", "1"});
    d.resume["y"] = id1;
    d.resume["y2"] = id1;
    d.terminate = id1;
    return d;
}

}  // namespace

TEST_CASE("simulate on the 2-state toy") {
    ConcSystem sys = toy_two_state();
    auto v = simulate(sys, [](const std::string& g) { return g == "g1"; }, PoolBound(1), 0, 50);
    CHECK(v.reachable);
    REQUIRE(v.witness);
    CHECK(replay(sys, *v.witness, PoolBound(1), 0));
    CHECK(v.witness->steps.size() == 2);  // resume, then one thread step
    auto v0 = simulate(sys, [](const std::string& g) { return g == "g0"; }, PoolBound(1), 0, 50);
    CHECK(v0.reachable);
    CHECK(v0.witness->steps.empty());
}

TEST_CASE("thread_step spawn increments buffer by one") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    Configuration c = initial_configuration(sys);
    auto sched = scheduler_step(sys, c, PoolBound(2), 4);
    REQUIRE_FALSE(sched.empty());
    Configuration act = sched[0].second;
    REQUIRE(act.active);
    bool saw_spawn = false;
    for (auto& [st, n] : thread_step(sys, act))
        if (n.buffer.count("y") == act.buffer.count("y") + 1) saw_spawn = true;
    CHECK(saw_spawn);
    Configuration empty_stack = act;
    empty_stack.active->stack.clear();
    CHECK(thread_step(sys, empty_stack).empty());
}

TEST_CASE("scheduler_step guards") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    Configuration c = initial_configuration(sys);
    c.buffer.add("y");
    for (auto& [st, n] : scheduler_step(sys, c, PoolBound(1), 4))
        CHECK(st.kind != Step::Pick);  // |pool| = N
    bool saw_pick = false;
    for (auto& [st, n] : scheduler_step(sys, c, std::nullopt, 4))
        saw_pick |= (st.kind == Step::Pick);
    CHECK(saw_pick);  // N = infinity: always enabled with a nonempty buffer
    auto resumed = scheduler_step(sys, c, PoolBound(2), 4)[0].second;
    REQUIRE(resumed.active);
    for (auto& [st, n] : scheduler_step(sys, resumed, PoolBound(2), 4))
        CHECK(st.kind != Step::Terminate);  // stack nonempty
    Configuration done = resumed;
    done.active->stack.clear();
    bool saw_term = false;
    for (auto& [st, n] : scheduler_step(sys, done, PoolBound(2), 4))
        saw_term |= (st.kind == Step::Terminate);
    CHECK(saw_term);
}

TEST_CASE("mutex fixture: error unreachable at N=2 K=4") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    auto v = simulate(sys, [](const std::string& g) { return g == "err"; }, PoolBound(2), 4, 400);
    CHECK_FALSE(v.reachable);
    auto v2 = simulate(sys, [](const std::string& g) { return g == "u2"; }, PoolBound(2), 4, 400);
    CHECK(v2.reachable);
}

TEST_CASE("replay properties") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    auto v = simulate(sys, [](const std::string& g) { return g == "u2"; }, PoolBound(2), 4, 400);
    REQUIRE(v.witness);
    CHECK(replay(sys, *v.witness, PoolBound(2), 4));
    Witness prefix = *v.witness;
    if (!prefix.steps.empty()) prefix.steps.pop_back();
    CHECK(replay(sys, prefix, PoolBound(2), 4));  // prefix-closed
    auto w2 = witness_from_text(witness_to_text(*v.witness));
    CHECK(replay(sys, w2, PoolBound(2), 4));
}

TEST_CASE("simulate/replay round-trip on random walks") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        // random target: some reachable global from a random bounded walk
        Configuration c = initial_configuration(sys);
        for (int i = 0; i < 12; ++i) {
            auto succs = thread_step(sys, c);
            auto sched = scheduler_step(sys, c, PoolBound(2), 3);
            succs.insert(succs.end(), sched.begin(), sched.end());
            if (succs.empty()) break;
            c = succs[rng() % succs.size()].second;
        }
        std::string tgt = c.global;
        auto v = simulate(sys, [&](const std::string& g) { return g == tgt; }, PoolBound(2), 3, 40);
        CHECK(v.reachable);
        CHECK(replay(sys, *v.witness, PoolBound(2), 3));
    }
}

TEST_CASE("K semantics: no resume above K, swaps increment by one") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    std::mt19937 rng(3);
    Configuration c = initial_configuration(sys);
    uint64_t K = 2;
    int steps_done = 0;
    for (int i = 0; i < 2000; ++i) {
        auto succs = thread_step(sys, c);
        auto sched = scheduler_step(sys, c, PoolBound(2), K);
        succs.insert(succs.end(), sched.begin(), sched.end());
        if (succs.empty()) break;
        auto& [st, n] = succs[rng() % succs.size()];
        if (st.kind == Step::Resume) CHECK(c.pool[st.pool_index].switches <= K);
        if (st.kind == Step::Swap) {
            uint32_t before = c.active->switches;
            bool found = false;
            for (auto& th : n.pool)
                if (th.switches == before + 1) found = true;
            CHECK(found);
        }
        for (auto& th : n.pool) CHECK(th.switches <= K + 1);
        c = n;
        ++steps_done;
    }
    CHECK(steps_done > 0);
}

TEST_CASE("configuration size accounting") {
    Dcps d = fig1_style_dcps();
    ConcSystem sys = d;
    Configuration c = initial_configuration(sys);
    CHECK(configuration_size(sys, c) == 1);
    auto act = scheduler_step(sys, c, PoolBound(2), 4)[0].second;
    for (auto& [st, n] : thread_step(sys, act)) {
        auto& r = d.creation[st.rule];
        int64_t delta = static_cast<int64_t>(r.push.size()) - 1 + (r.spawn ? 1 : 0);
        CHECK(static_cast<int64_t>(configuration_size(sys, n)) ==
              static_cast<int64_t>(configuration_size(sys, act)) + delta);
    }
}

TEST_CASE("dcps and dcbp text formats round trip") {
    Dcps d = fig1_style_dcps();
    CHECK(dcps_to_text(dcps_from_text(dcps_to_text(d))) == dcps_to_text(d));
    Dcbp b = tiny_dcbp();
    CHECK(dcbp_to_text(dcbp_from_text(dcbp_to_text(b))) == dcbp_to_text(b));
}

TEST_CASE("dcbp expansion: direct image of terminate") {
    Dcbp d;
    d.globals = {"g"};
    d.initial_assignment = "0";
    d.stack_alphabet = {"y"};
    d.initial_symbol = "y";
    Transducer t01;
    t01.arity = 2;
    t01.initial = "s";
    t01.finals = {"f"};
    t01.add_edge("s", {"0", "1"}, "f");
    d.terminate = t01;
    d.resume["y"] = transducer_identity({"0", "1"});
    auto e = dcbp_expand_to_dcps(d, {});
    bool found = false;
    for (auto& r : e.terminate)
        if (r.g.rfind("g0", 0) == 0) found |= (r.g2 == expanded_global_name("1", "", false));
    CHECK(found);
}

TEST_CASE("dcbp vs expansion cross-simulation") {
    Dcbp d = tiny_dcbp();
    ConcSystem sys_b = d;
    auto e = dcbp_expand_to_dcps(d, {});
    ConcSystem sys_e = e;
    auto tgt_b = [](const std::string& g) { return g.substr(0, 1) == "1"; };
    auto tgt_e = [](const std::string& g) { return g.rfind("g1", 0) == 0; };
    for (uint64_t K : {0, 1}) {
        for (auto N : {PoolBound(1), PoolBound(2), PoolBound()}) {
            auto vb = simulate(sys_b, tgt_b, N, K, 10);
            auto ve = simulate(sys_e, tgt_e, N, K, 10);
            CHECK(vb.reachable == ve.reachable);
        }
    }
}

TEST_CASE("dcbp with empty transducers only picks") {
    Dcbp d = tiny_dcbp();
    d.creation.clear();
    d.resume.clear();
    Transducer empty;
    empty.arity = 2;
    empty.initial = "s";
    empty.states = {"s"};
    d.terminate = empty;
    ConcSystem sys = d;
    auto v = simulate(sys, [&](const std::string& g) { return g != "0"; }, PoolBound(2), 2, 50);
    CHECK_FALSE(v.reachable);
    CHECK(v.exhausted);
}

TEST_CASE("task letters encode/decode") {
    TaskLetter j{TaskLetter::Jump, "", "g1", "g2", "y", ""};
    auto back = task_letter_decode(task_letter_encode(j));
    REQUIRE(back);
    CHECK(back->kind == TaskLetter::Jump);
    CHECK(back->g1 == "g1");
    CHECK(back->g2 == "g2");
    CHECK(back->top == "y");
    CHECK_FALSE(task_letter_decode("plainsym"));
    auto t = task_letter_decode(task_letter_encode({TaskLetter::TermProper, "", "", "", "", "g9"}));
    REQUIRE(t);
    CHECK(t->kind == TaskLetter::TermProper);
    CHECK(t->g == "g9");
}

namespace {

// independent small-scope oracle: exhaustive 2-thread exploration of a DCPS
// recording the letter sequence of the initial task
struct TraceNode {
    Configuration c;
    int tracked;  // pool index; -1 active; -2 done
    std::vector<Symbol> word;
    bool operator<(const TraceNode& o) const {
        return std::tie(c, tracked, word) < std::tie(o.c, o.tracked, o.word);
    }
};

int locate(const std::vector<ThreadState>& pool, const ThreadState& me) {
    for (size_t i = 0; i < pool.size(); ++i)
        if (pool[i] == me) return static_cast<int>(i);
    return -9;
}

std::set<std::vector<Symbol>> observed_task_words(const Dcps& d, uint64_t K, size_t max_nodes,
                                                  size_t max_len) {
    ConcSystem sys = d;
    std::set<std::vector<Symbol>> words;
    std::set<TraceNode> seen;
    std::deque<TraceNode> work;
    TraceNode root{initial_configuration(sys), 0, {}};
    root.c.canonicalize();
    work.push_back(root);
    seen.insert(root);
    while (!work.empty() && seen.size() < max_nodes) {
        TraceNode n = work.front();
        work.pop_front();
        if (n.word.size() > max_len) continue;
        auto push_node = [&](TraceNode nn) {
            if (seen.insert(nn).second) work.push_back(std::move(nn));
        };
        for (auto& [st, c2] : thread_step(sys, n.c)) {
            TraceNode nn{c2, n.tracked, n.word};
            if (n.tracked == -1) {
                auto& r = d.creation[st.rule];
                if (r.spawn) nn.word.push_back(*r.spawn);
            }
            push_node(std::move(nn));
        }
        for (auto& [st, c2] : scheduler_step(sys, n.c, PoolBound(2), K)) {
            TraceNode nn{c2, n.tracked, n.word};
            switch (st.kind) {
                case Step::Swap: {
                    if (n.tracked == -1) {
                        auto& r = d.interrupt[st.rule];
                        ThreadState parked = *n.c.active;
                        parked.stack.pop_back();
                        for (size_t i = r.push.size(); i-- > 0;)
                            parked.stack.push_back(r.push[i]);
                        parked.switches += 1;
                        nn.tracked = locate(c2.pool, parked);
                        nn.word.push_back("swapped@" + r.g2);
                        // the swap may also be the final one (never resumed)
                        TraceNode done{c2, -2, n.word};
                        done.word.push_back(task_letter_encode(
                            {TaskLetter::TermSwap, "", "", "", "", r.g2}));
                        words.insert(done.word);
                        push_node(std::move(done));
                    } else if (n.tracked >= 0) {
                        nn.tracked = locate(c2.pool, n.c.pool[static_cast<size_t>(n.tracked)]);
                    }
                    push_node(std::move(nn));
                    break;
                }
                case Step::Resume: {
                    if (n.tracked >= 0 && st.pool_index == static_cast<size_t>(n.tracked)) {
                        auto& r = d.resume[st.rule];
                        if (!nn.word.empty() && nn.word.back().rfind("swapped@", 0) == 0) {
                            std::string g1 = nn.word.back().substr(8);
                            nn.word.back() = task_letter_encode(
                                {TaskLetter::Jump, "", g1, r.g2, r.gamma, ""});
                        }
                        nn.tracked = -1;
                    } else if (n.tracked >= 0) {
                        nn.tracked = locate(c2.pool, n.c.pool[static_cast<size_t>(n.tracked)]);
                    }
                    push_node(std::move(nn));
                    break;
                }
                case Step::Terminate: {
                    if (n.tracked == -1) {
                        auto& r = d.terminate[st.rule];
                        nn.tracked = -2;
                        nn.word.push_back(task_letter_encode(
                            {TaskLetter::TermProper, "", "", "", "", r.g2}));
                        words.insert(nn.word);
                    }
                    push_node(std::move(nn));
                    break;
                }
                case Step::Pick: {
                    if (n.tracked >= 0)
                        nn.tracked = locate(c2.pool, n.c.pool[static_cast<size_t>(n.tracked)]);
                    push_node(std::move(nn));
                    break;
                }
                default:
                    push_node(std::move(nn));
            }
        }
    }
    return words;
}

}  // namespace

TEST_CASE("task_pda_explicit small-scope adequacy") {
    Dcps d;
    d.globals = {"g0", "g1"};
    d.stack_alphabet = {"y", "b"};
    d.initial_global = "g0";
    d.initial_symbol = "y";
    d.creation.push_back({"g0", "y", "g0", {"y"}, Symbol("b")});
    d.creation.push_back({"g0", "y", "g1", {}, std::nullopt});
    d.creation.push_back({"g0", "b", "g1", {}, std::nullopt});
    d.creation.push_back({"g1", "b", "g0", {}, std::nullopt});
    d.interrupt.push_back({"g0", "y", "g1", {"y"}});
    d.resume.push_back({"g0", "g0", "y"});
    d.resume.push_back({"g1", "g0", "y"});
    d.resume.push_back({"g0", "g0", "b"});
    d.resume.push_back({"g1", "g1", "b"});
    d.terminate.push_back({"g1", "g1"});
    d.terminate.push_back({"g0", "g0"});
    d.validate();
    auto pda = task_pda_explicit(d, "g0", "y");
    auto words = observed_task_words(d, 2, 80000, 5);
    // every observed single-task trace projects to an accepted word
    int checked = 0;
    for (auto& w : words) {
        if (w.size() > 4) continue;
        CAPTURE(w);
        CHECK(pda_accepts(pda, w));
        ++checked;
    }
    CHECK(checked > 3);
    // and conversely on this fixture: accepted words with <= 2 jump letters and
    // length <= 4 are realized by some 2-thread trace
    auto bounded = pda_bounded_stack_nfa(pda, 6, 2000000);
    int conv = 0;
    for (auto& w : nfa_enumerate(bounded, 4)) {
        int jumps = 0;
        bool complete = false;
        for (auto& s : w) {
            auto l = task_letter_decode(s);
            if (l && l->kind == TaskLetter::Jump) ++jumps;
            if (l && (l->kind == TaskLetter::TermProper || l->kind == TaskLetter::TermSwap))
                complete = true;
        }
        if (!complete || jumps > 2) continue;
        CAPTURE(w);
        CHECK(words.count(w));
        ++conv;
    }
    CHECK(conv > 3);
}

TEST_CASE("task_pda jump letters only for existing resume rules") {
    Dcps d;
    d.globals = {"g0", "g1", "g2"};
    d.stack_alphabet = {"y"};
    d.initial_global = "g0";
    d.initial_symbol = "y";
    d.interrupt.push_back({"g0", "y", "g1", {"y"}});
    d.resume.push_back({"g1", "g2", "y"});
    d.terminate.push_back({"g2", "g2"});
    d.validate();
    auto pda = task_pda_explicit(d, "g0", "y");
    for (auto& e : pda.edges) {
        auto l = task_letter_decode(e.letter);
        if (l && l->kind == TaskLetter::Jump) {
            CHECK(l->g2 == "g2");
            CHECK(l->top == "y");
        }
    }
    // no E_i/E_t at all -> no word can end; only the empty word remains
    Dcps d2 = d;
    d2.interrupt.clear();
    d2.terminate.clear();
    auto pda2 = task_pda_explicit(d2, "g0", "y");
    auto dcl = subword_closure_bruteforce(pda2, 3);
    CHECK(dcl.words == std::set<std::vector<Symbol>>{{}});
}
