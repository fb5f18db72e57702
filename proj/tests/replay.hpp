#ifndef TESTS_REPLAY_HPP
#define TESTS_REPLAY_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "swirl/runtime.hpp"
#include "swirl/semantics.hpp"

// Checks that a report's event order is a linearization admitted by the
// reduction semantics: each EXEC fires an enabled step transition (once per
// step, later barrier echoes are skipped) and each RECV fires an enabled
// communication that delivered it. SEND events carry no state change of their
// own; the matching communication is consumed at RECV time. Identical
// duplicated recvs make the consumed syntactic position ambiguous, so the
// search backtracks over the matching transitions.
inline bool validate_replay(const swirl::WorkflowSystem& initial,
                            const std::vector<swirl::Event>& events,
                            std::string* why = nullptr) {
    using namespace swirl;

    struct Frame {
        WorkflowSystem state;
        std::map<Id, int> pending_echoes;
    };
    std::string deepest;
    size_t deepest_at = 0;
    std::set<std::pair<size_t, std::string>> seen;

    std::function<bool(Frame, size_t)> go = [&](Frame f, size_t i) -> bool {
        while (i < events.size() && events[i].kind == "SEND") ++i;
        if (i == events.size())
            return enabled_transitions(f.state).empty();
        if (!seen.insert({i, render_swirl(f.state)}).second) return false;

        const auto& ev = events[i];
        auto record = [&](const std::string& msg) {
            if (i >= deepest_at) {
                deepest_at = i;
                deepest = msg;
            }
            return false;
        };
        if (ev.kind == "EXEC") {
            const Id& step = ev.ids.at(0);
            auto it = f.pending_echoes.find(step);
            if (it != f.pending_echoes.end() && it->second > 0) {
                --it->second;
                return go(std::move(f), i + 1);
            }
            for (const auto& t : enabled_transitions(f.state))
                if (t.label.kind == Label::Kind::Nu && t.label.exec.step == step) {
                    Frame next = f;
                    next.pending_echoes[step] = int(t.label.exec.locs.size()) - 1;
                    next.state = apply(f.state, t);
                    if (go(std::move(next), i + 1)) return true;
                }
            return record("EXEC " + step + " not enabled");
        }
        if (ev.kind == "RECV") {
            Send want{ev.ids.at(0), ev.ids.at(1), ev.ids.at(2), ev.ids.at(3)};
            for (const auto& t : enabled_transitions(f.state))
                if (t.label.kind == Label::Kind::Tau && t.label.send == want) {
                    Frame next = f;
                    next.state = apply(f.state, t);
                    if (go(std::move(next), i + 1)) return true;
                }
            return record("RECV " + render_predicate(Predicate{want}) + " not enabled");
        }
        return record("unknown event kind " + ev.kind);
    };

    if (go({canonical(initial), {}}, 0)) return true;
    if (why)
        *why = deepest.empty() ? "final state is not quiescent"
                               : deepest + " (event " + std::to_string(deepest_at) + ")";
    return false;
}

#endif
