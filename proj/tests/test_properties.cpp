#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "random_instances.hpp"
#include "swirl/encode.hpp"
#include "swirl/optimize.hpp"
#include "swirl/parse.hpp"
#include "swirl/semantics.hpp"

using namespace swirl;

namespace {

constexpr uint64_t kSeeds = 60;

std::multiset<std::string> predicate_multiset(const TraceRef& t, bool execs_only) {
    std::multiset<std::string> out;
    std::function<void(const TraceRef&)> go = [&](const TraceRef& u) {
        switch (u->kind) {
            case Trace::Kind::Nil:
                return;
            case Trace::Kind::Act:
                if (!execs_only || std::holds_alternative<Exec>(u->act))
                    out.insert(render_predicate(u->act));
                return;
            default:
                go(u->left);
                go(u->right);
        }
    };
    go(t);
    return out;
}

std::multiset<std::string> system_predicates(const WorkflowSystem& sys, bool execs_only) {
    std::multiset<std::string> out;
    for (const auto& cfg : sys.configs) {
        auto part = predicate_multiset(cfg.trace, execs_only);
        out.insert(part.begin(), part.end());
    }
    return out;
}

}  // namespace

TEST_CASE("parse after render is the identity on random encodings") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        auto text = render_swirl(sys);
        CHECK(render_swirl(parse_swirl(text)) == text);
    }
}

TEST_CASE("normalize is idempotent on random traces") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        for (const auto& cfg : sys.configs) {
            auto once = normalize(cfg.trace);
            CHECK(trace_equal(once, normalize(once)));
        }
    }
}

TEST_CASE("instance JSON round trips for random instances") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto inst = make_random_instance(seed);
        auto json = instance_to_json(inst);
        CHECK(instance_to_json(parse_instance(json)) == json);
    }
}

TEST_CASE("data only grows along any reduction") {
    std::mt19937_64 rng(7);
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto state = encode(make_random_instance(seed));
        for (int steps = 0; steps < 200; ++steps) {
            auto ts = enabled_transitions(state);
            if (ts.empty()) break;
            std::map<Id, IdSet> before;
            for (const auto& cfg : state.configs) before[cfg.loc] = cfg.data;
            state = apply(state, ts[rng() % ts.size()]);
            for (const auto& cfg : state.configs)
                for (const auto& d : before[cfg.loc]) CHECK(cfg.data.count(d) == 1);
        }
    }
}

TEST_CASE("the quiescent state is scheduling independent") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        auto det = run_to_quiescence(sys);
        for (uint64_t s2 = 0; s2 < 3; ++s2) {
            auto rnd = run_to_quiescence(sys, Policy::SeededRandom, seed * 31 + s2);
            CHECK(render_swirl(canonical(rnd.final)) == render_swirl(canonical(det.final)));
        }
    }
}

TEST_CASE("every step body eventually executes exactly once per location") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto inst = make_random_instance(seed);
        auto run = run_to_quiescence(encode(inst), Policy::SeededRandom, seed);
        std::map<std::string, size_t> nu_count;
        for (const auto& label : run.history)
            if (label.kind == Label::Kind::Nu) ++nu_count[label.exec.step];
        for (const auto& s : inst.workflow.steps) {
            CAPTURE(s);
            CHECK(nu_count[s] == 1);  // replicated steps reduce in one shot
        }
    }
}

TEST_CASE("optimization preserves execs and only removes communications") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        auto opt = optimize(sys);
        CHECK(system_predicates(opt, true) == system_predicates(sys, true));

        auto all_before = system_predicates(sys, false);
        for (const auto& p : system_predicates(opt, false)) {
            auto it = all_before.find(p);
            REQUIRE(it != all_before.end());
            all_before.erase(it);  // opt is a sub-multiset
        }
        CHECK(render_swirl(optimize(opt)) == render_swirl(opt));
    }
}

TEST_CASE("optimization never changes the quiescent placement") {
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        auto a = canonical(run_to_quiescence(sys).final);
        auto b = canonical(run_to_quiescence(optimize(sys)).final);
        for (const auto& cfg : a.configs) {
            auto* other = b.find(cfg.loc);
            REQUIRE(other != nullptr);
            CHECK(other->data == cfg.data);
        }
    }
}

TEST_CASE("compressed exploration agrees with the full one on terminals") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        CAPTURE(seed);
        auto sys = encode(make_random_instance(seed));
        auto full = reachable_lts(sys);
        auto small = reachable_lts(sys, 100000, /*compress=*/true);
        CHECK(small.states.size() <= full.states.size());
        auto terminal = [](const Lts& l) {
            auto out = l.out_edges();
            std::set<std::string> t;
            for (size_t i = 0; i < l.states.size(); ++i)
                if (out[i].empty()) t.insert(l.states[i]);
            return t;
        };
        CHECK(terminal(full) == terminal(small));
    }
}
