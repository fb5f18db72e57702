#include "swirl/equivalence.hpp"

#include <algorithm>
#include <deque>

#include "swirl/optimize.hpp"

namespace swirl {

WeakLts weak_saturate(const Lts& lts) {
    WeakLts w;
    w.lts = lts;
    size_t n = lts.states.size();
    w.out = lts.out_edges();
    const auto& out = w.out;

    w.tau_closure.resize(n);
    for (size_t s = 0; s < n; ++s) {
        std::set<int> reach;
        std::deque<int> frontier{int(s)};
        reach.insert(int(s));
        while (!frontier.empty()) {
            int cur = frontier.front();
            frontier.pop_front();
            for (int ei : out[cur]) {
                const auto& e = lts.edges[ei];
                if (e.label.kind == Label::Kind::Tau && reach.insert(e.dst).second)
                    frontier.push_back(e.dst);
            }
        }
        w.tau_closure[s].assign(reach.begin(), reach.end());
    }

    w.strong_barbs.resize(n);
    for (size_t s = 0; s < n; ++s)
        for (int ei : out[s]) {
            const auto& e = lts.edges[ei];
            if (e.label.kind == Label::Kind::Nu)
                w.strong_barbs[s].insert(e.label.render());
        }

    w.weak_nu.resize(n);
    w.weak_barbs.resize(n);
    for (size_t s = 0; s < n; ++s) {
        for (int mid : w.tau_closure[s]) {
            w.weak_barbs[s].insert(w.strong_barbs[mid].begin(), w.strong_barbs[mid].end());
            for (int ei : out[mid]) {
                const auto& e = lts.edges[ei];
                if (e.label.kind == Label::Kind::Nu)
                    w.weak_nu[s][e.label.render()].insert(e.dst);
            }
        }
    }
    return w;
}

namespace {

// One simulation direction of the Def-12 conditions for pair (p in a, q in b).
bool pair_ok_oneway(const WeakLts& a, const WeakLts& b, int p, int q,
                    const std::vector<std::vector<char>>& rel, bool a_rows,
                    std::string* why) {
    auto related = [&](int x, int y) { return a_rows ? rel[x][y] : rel[y][x]; };

    for (const auto& barb : a.strong_barbs[p]) {
        if (!b.weak_barbs[q].count(barb)) {
            if (why) *why = "barb " + barb + " unmatched";
            return false;
        }
    }
    for (int ei : a.out[p]) {
        const auto& e = a.lts.edges[ei];
        bool matched = false;
        if (e.label.kind == Label::Kind::Tau) {
            for (int qq : b.tau_closure[q])
                if (related(e.dst, qq)) {
                    matched = true;
                    break;
                }
        } else {
            auto it = b.weak_nu[q].find(e.label.render());
            if (it != b.weak_nu[q].end())
                for (int qq : it->second)
                    if (related(e.dst, qq)) {
                        matched = true;
                        break;
                    }
        }
        if (!matched) {
            if (why) *why = "move " + e.label.render() + " unmatched";
            return false;
        }
    }
    return true;
}

}  // namespace

BisimResult weak_barbed_bisim(const WeakLts& a, const WeakLts& b) {
    size_t na = a.lts.states.size();
    size_t nb = b.lts.states.size();
    std::vector<std::vector<char>> rel(na, std::vector<char>(nb, 1));

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t p = 0; p < na; ++p) {
            for (size_t q = 0; q < nb; ++q) {
                if (!rel[p][q]) continue;
                if (!pair_ok_oneway(a, b, int(p), int(q), rel, true, nullptr) ||
                    !pair_ok_oneway(b, a, int(q), int(p), rel, false, nullptr)) {
                    rel[p][q] = 0;
                    changed = true;
                }
            }
        }
    }

    BisimResult res;
    res.related = rel[a.lts.initial][b.lts.initial];
    if (res.related) {
        for (size_t p = 0; p < na; ++p)
            for (size_t q = 0; q < nb; ++q)
                if (rel[p][q]) res.witness_relation.emplace_back(int(p), int(q));
    } else {
        std::string why;
        if (!pair_ok_oneway(a, b, a.lts.initial, b.lts.initial, rel, true, &why) ||
            !pair_ok_oneway(b, a, b.lts.initial, a.lts.initial, rel, false, &why))
            res.distinguishing_trail = "initial pair: " + why;
        else
            res.distinguishing_trail = "initial pair removed during refinement";
    }
    return res;
}

BisimResult weak_barbed_bisim(const WorkflowSystem& sysA, const WorkflowSystem& sysB,
                              size_t max_states) {
    Lts la = reachable_lts(sysA, max_states, /*compress=*/true);
    Lts lb = reachable_lts(sysB, max_states, /*compress=*/true);
    return weak_barbed_bisim(weak_saturate(la), weak_saturate(lb));
}

BisimResult check_theorem1(const WorkflowSystem& sys, size_t max_states) {
    return weak_barbed_bisim(sys, optimize(sys), max_states);
}

}  // namespace swirl
