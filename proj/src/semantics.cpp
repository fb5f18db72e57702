#include "swirl/semantics.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>

#include "swirl/errors.hpp"
#include "swirl/parse.hpp"

namespace swirl {

namespace {

void collect_active(const TraceRef& t, Path& path, std::vector<ActivePosition>& out) {
    switch (t->kind) {
        case Trace::Kind::Nil:
            return;
        case Trace::Kind::Act:
            out.push_back({path, t->act});
            return;
        case Trace::Kind::Seq:
            path.push_back(0);
            collect_active(t->left, path, out);
            path.pop_back();
            return;
        case Trace::Kind::Par:
            path.push_back(0);
            collect_active(t->left, path, out);
            path.pop_back();
            path.push_back(1);
            collect_active(t->right, path, out);
            path.pop_back();
            return;
    }
}

TraceRef erase_at(const TraceRef& t, const Path& path, size_t depth) {
    if (depth == path.size()) return nil();
    if (path[depth] == 0)
        return t->kind == Trace::Kind::Seq
                   ? seq(erase_at(t->left, path, depth + 1), t->right)
                   : par(erase_at(t->left, path, depth + 1), t->right);
    return par(t->left, erase_at(t->right, path, depth + 1));
}

std::string render_path(const Path& p) {
    std::string s;
    for (uint8_t b : p) s += char('0' + b);
    return s;
}

struct Consumed {
    int config;
    Path path;
    bool operator==(const Consumed&) const = default;
    bool operator<(const Consumed& o) const {
        return std::tie(config, path) < std::tie(o.config, o.path);
    }
};

struct PendingTransition {
    Label label;
    Rule rule;
    std::vector<Consumed> consumed;        // sorted
    std::map<int, IdSet> data_additions;   // config index -> data to add
};

WorkflowSystem realize(const WorkflowSystem& sys, const PendingTransition& p) {
    WorkflowSystem out = sys;
    for (const auto& c : p.consumed)
        out.configs[c.config].trace = erase_at(out.configs[c.config].trace, c.path, 0);
    for (const auto& [idx, ds] : p.data_additions)
        out.configs[idx].data.insert(ds.begin(), ds.end());
    return canonical(out);
}

std::string provenance_of(const WorkflowSystem& sys, const std::vector<Consumed>& consumed) {
    std::ostringstream os;
    for (const auto& c : consumed)
        os << sys.configs[c.config].loc << ':' << render_path(c.path) << ';';
    return os.str();
}

std::vector<PendingTransition> pending_transitions(
    const WorkflowSystem& sys, std::vector<std::vector<ActivePosition>>& actives_out) {
    std::vector<std::vector<ActivePosition>> actives(sys.configs.size());
    for (size_t i = 0; i < sys.configs.size(); ++i)
        actives[i] = active_positions(sys.configs[i].trace);

    std::vector<PendingTransition> out;

    // (Exec): group active exec positions by the full predicate.
    std::map<std::string, std::pair<Exec, std::map<int, std::vector<Path>>>> execs;
    for (size_t i = 0; i < sys.configs.size(); ++i)
        for (const auto& ap : actives[i])
            if (const Exec* e = std::get_if<Exec>(&ap.pred)) {
                auto& slot = execs[render_predicate(ap.pred)];
                slot.first = *e;
                slot.second[int(i)].push_back(ap.path);
            }
    for (auto& [key, slot] : execs) {
        const Exec& e = slot.first;
        bool enabled = true;
        std::vector<int> cfg_order;
        for (const auto& l : e.locs) {
            int idx = -1;
            for (size_t i = 0; i < sys.configs.size(); ++i)
                if (sys.configs[i].loc == l) idx = int(i);
            if (idx < 0 || !slot.second.count(idx)) {
                enabled = false;
                break;
            }
            const IdSet& d = sys.configs[idx].data;
            if (!std::includes(d.begin(), d.end(), e.flow.inputs.begin(),
                               e.flow.inputs.end())) {
                enabled = false;
                break;
            }
            cfg_order.push_back(idx);
        }
        if (!enabled) continue;
        // one transition per combination choosing one active position per location
        std::vector<size_t> choice(cfg_order.size(), 0);
        while (true) {
            PendingTransition p;
            p.label = Label{Label::Kind::Nu, {}, e};
            p.rule = Rule::Exec;
            for (size_t k = 0; k < cfg_order.size(); ++k) {
                int idx = cfg_order[k];
                p.consumed.push_back({idx, slot.second[idx][choice[k]]});
                p.data_additions[idx].insert(e.flow.outputs.begin(), e.flow.outputs.end());
            }
            std::sort(p.consumed.begin(), p.consumed.end());
            out.push_back(std::move(p));
            size_t k = 0;
            for (; k < choice.size(); ++k) {
                if (++choice[k] < slot.second[cfg_order[k]].size()) break;
                choice[k] = 0;
            }
            if (k == choice.size()) break;
        }
    }

    // (Comm) / (L-Comm): every (send position, recv position) pairing.
    for (size_t i = 0; i < sys.configs.size(); ++i) {
        const auto& cfg = sys.configs[i];
        for (const auto& ap : actives[i]) {
            const Send* sd = std::get_if<Send>(&ap.pred);
            if (!sd || sd->src != cfg.loc || !cfg.data.count(sd->data)) continue;
            if (sd->dst == cfg.loc) {
                for (const auto& rp : actives[i]) {
                    const Recv* rv = std::get_if<Recv>(&rp.pred);
                    if (!rv || rv->port != sd->port || rv->src != sd->src ||
                        rv->dst != sd->dst || rp.path == ap.path)
                        continue;
                    PendingTransition p;
                    p.label = Label{Label::Kind::Tau, *sd, {}};
                    p.rule = Rule::LComm;
                    p.consumed = {{int(i), ap.path}, {int(i), rp.path}};
                    std::sort(p.consumed.begin(), p.consumed.end());
                    out.push_back(std::move(p));
                }
            } else {
                int j = -1;
                for (size_t k = 0; k < sys.configs.size(); ++k)
                    if (sys.configs[k].loc == sd->dst) j = int(k);
                if (j < 0) continue;
                for (const auto& rp : actives[j]) {
                    const Recv* rv = std::get_if<Recv>(&rp.pred);
                    if (!rv || rv->port != sd->port || rv->src != sd->src ||
                        rv->dst != sd->dst)
                        continue;
                    PendingTransition p;
                    p.label = Label{Label::Kind::Tau, *sd, {}};
                    p.rule = Rule::Comm;
                    p.consumed = {{int(i), ap.path}, {j, rp.path}};
                    std::sort(p.consumed.begin(), p.consumed.end());
                    p.data_additions[j].insert(sd->data);
                    out.push_back(std::move(p));
                }
            }
        }
    }

    actives_out = std::move(actives);
    return out;
}

}  // namespace

std::vector<ActivePosition> active_positions(const TraceRef& t) {
    std::vector<ActivePosition> out;
    Path path;
    collect_active(t, path, out);
    return out;
}

std::string Label::render() const {
    if (kind == Kind::Tau) return "tau:" + render_predicate(Predicate{send});
    return "nu:" + render_predicate(Predicate{exec});
}

std::vector<Transition> enabled_transitions(const WorkflowSystem& sys_in) {
    WorkflowSystem sys = canonical(sys_in);
    std::vector<std::vector<ActivePosition>> actives;
    auto pending = pending_transitions(sys, actives);
    std::vector<Transition> out;
    out.reserve(pending.size());
    for (const auto& p : pending)
        out.push_back({p.label, p.rule, provenance_of(sys, p.consumed), realize(sys, p)});
    std::sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
        return std::make_tuple(a.rule, a.label.render(), a.provenance) <
               std::make_tuple(b.rule, b.label.render(), b.provenance);
    });
    return out;
}

WorkflowSystem apply(const WorkflowSystem& sys, const Transition& t) {
    for (const auto& cand : enabled_transitions(sys))
        if (cand.rule == t.rule && cand.label == t.label && cand.provenance == t.provenance)
            return cand.target;
    throw StaleTransition("transition " + t.label.render() + " [" + t.provenance +
                          "] is not enabled");
}

std::vector<Exec> barbs(const WorkflowSystem& sys) {
    std::map<std::string, Exec> seen;
    for (const auto& t : enabled_transitions(sys))
        if (t.label.kind == Label::Kind::Nu) seen.emplace(t.label.render(), t.label.exec);
    std::vector<Exec> out;
    for (auto& [k, e] : seen) out.push_back(e);
    return out;
}

RunResult run_to_quiescence(const WorkflowSystem& sys, Policy policy, uint64_t seed,
                            size_t step_limit) {
    WorkflowSystem cur = canonical(sys);
    std::vector<Label> history;
    std::mt19937_64 rng(seed);
    for (size_t steps = 0;; ++steps) {
        auto trans = enabled_transitions(cur);
        if (trans.empty()) return {cur, history};
        if (steps >= step_limit)
            throw StepLimitExceeded("no quiescence after " + std::to_string(step_limit) +
                                    " firings");
        size_t pick = 0;
        if (policy == Policy::SeededRandom)
            pick = std::uniform_int_distribution<size_t>(0, trans.size() - 1)(rng);
        history.push_back(trans[pick].label);
        cur = trans[pick].target;
    }
}

std::vector<std::vector<int>> Lts::out_edges() const {
    std::vector<std::vector<int>> out(states.size());
    for (size_t i = 0; i < edges.size(); ++i) out[edges[i].src].push_back(int(i));
    return out;
}

namespace {

bool consumed_disjoint(const PendingTransition& a, const PendingTransition& b) {
    for (const auto& ca : a.consumed)
        for (const auto& cb : b.consumed)
            if (ca == cb) return false;
    return true;
}

// A tau transition may be executed eagerly when every coinitial transition
// either touches disjoint positions (data only grows, so premises are
// monotone and the diamond closes syntactically) or is an equal-target tau
// (absorbed). This realizes confluent-tau compression without enumerating
// successor states.
bool prioritizable(const WorkflowSystem& sys, const std::vector<PendingTransition>& all,
                   size_t idx) {
    const auto& t = all[idx];
    if (t.label.kind != Label::Kind::Tau) return false;
    for (size_t j = 0; j < all.size(); ++j) {
        if (j == idx) continue;
        const auto& u = all[j];
        if (consumed_disjoint(t, u)) continue;
        if (u.label.kind == Label::Kind::Tau &&
            system_equal(realize(sys, t), realize(sys, u)))
            continue;
        return false;
    }
    return true;
}

WorkflowSystem stable_representative(WorkflowSystem sys) {
    while (true) {
        std::vector<std::vector<ActivePosition>> actives;
        auto pending = pending_transitions(sys, actives);
        bool advanced = false;
        for (size_t i = 0; i < pending.size(); ++i) {
            if (prioritizable(sys, pending, i)) {
                sys = realize(sys, pending[i]);
                advanced = true;
                break;
            }
        }
        if (!advanced) return sys;
    }
}

}  // namespace

Lts reachable_lts(const WorkflowSystem& sys, size_t max_states, bool compress) {
    Lts lts;
    std::unordered_map<std::string, int> index;
    auto intern = [&](WorkflowSystem s) {
        if (compress) s = stable_representative(std::move(s));
        std::string key = render_swirl(s);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (lts.states.size() >= max_states)
            throw StateSpaceExceeded("state cap of " + std::to_string(max_states) +
                                     " exceeded");
        int id = int(lts.states.size());
        index.emplace(key, id);
        lts.states.push_back(key);
        lts.systems.push_back(std::move(s));
        return id;
    };

    lts.initial = intern(canonical(sys));
    for (size_t head = 0; head < lts.states.size(); ++head) {
        auto trans = enabled_transitions(lts.systems[head]);
        for (const auto& t : trans) {
            int dst = intern(t.target);
            lts.edges.push_back({int(head), t.label, dst});
        }
    }
    return lts;
}

DiamondReport check_church_rosser(const WorkflowSystem& sys, size_t max_states) {
    Lts lts = reachable_lts(sys, max_states);
    DiamondReport rep;
    rep.states = lts.states.size();

    size_t n = lts.states.size();
    std::vector<std::string> edge_label(lts.edges.size());
    for (size_t e = 0; e < lts.edges.size(); ++e)
        edge_label[e] = lts.edges[e].label.render();

    // per-state successor index: label -> sorted target states
    std::vector<std::map<std::string, std::vector<int>>> succ(n);
    auto out = lts.out_edges();
    for (size_t e = 0; e < lts.edges.size(); ++e)
        succ[lts.edges[e].src][edge_label[e]].push_back(lts.edges[e].dst);
    for (auto& m : succ)
        for (auto& [label, dsts] : m) {
            std::sort(dsts.begin(), dsts.end());
            dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
        }

    auto intersects = [](const std::vector<int>& a, const std::vector<int>& b) {
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return true;
            a[i] < b[j] ? ++i : ++j;
        }
        return false;
    };

    for (size_t s = 0; s < n; ++s) {
        const auto& es = out[s];
        for (size_t i = 0; i < es.size(); ++i) {
            for (size_t j = i + 1; j < es.size(); ++j) {
                ++rep.diamonds_checked;
                const auto& e1 = lts.edges[es[i]];
                const auto& e2 = lts.edges[es[j]];
                if (e1.dst == e2.dst) continue;  // cofinal
                bool closed = false;
                auto it1 = succ[e1.dst].find(edge_label[es[j]]);
                auto it2 = succ[e2.dst].find(edge_label[es[i]]);
                if (it1 != succ[e1.dst].end() && it2 != succ[e2.dst].end())
                    closed = intersects(it1->second, it2->second);
                if (!closed) {
                    rep.ok = false;
                    rep.violation = "state " + lts.states[s] + " transitions " +
                                    edge_label[es[i]] + " / " + edge_label[es[j]];
                    return rep;
                }
            }
        }
    }
    return rep;
}

std::string export_lts(const Lts& lts) {
    std::ostringstream os;
    os << "INITIAL " << lts.initial << '\n';
    for (size_t i = 0; i < lts.states.size(); ++i)
        os << "STATE " << i << ' ' << lts.states[i] << '\n';
    for (const auto& e : lts.edges)
        os << "EDGE " << e.src << ' ' << e.label.render() << ' ' << e.dst << '\n';
    return os.str();
}

Lts import_lts(const std::string& text) {
    Lts lts;
    std::istringstream in(text);
    std::string line;
    auto parse_label = [](const std::string& s) {
        Label l;
        std::string pred_text;
        if (s.rfind("tau:", 0) == 0) {
            l.kind = Label::Kind::Tau;
            pred_text = s.substr(4);
        } else if (s.rfind("nu:", 0) == 0) {
            l.kind = Label::Kind::Nu;
            pred_text = s.substr(3);
        } else {
            throw ParseError("bad LTS label: " + s);
        }
        // reuse the .swirl parser for the predicate text
        WorkflowSystem tmp = parse_swirl("loc _l {data={}; trace=" + pred_text + "}");
        const TraceRef& t = tmp.configs[0].trace;
        if (t->kind != Trace::Kind::Act) throw ParseError("bad LTS label: " + s);
        if (l.kind == Label::Kind::Tau)
            l.send = std::get<Send>(t->act);
        else
            l.exec = std::get<Exec>(t->act);
        return l;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "INITIAL") {
            ls >> lts.initial;
        } else if (tag == "STATE") {
            size_t idx;
            ls >> idx;
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
            if (idx != lts.states.size()) throw ParseError("non-sequential STATE index");
            lts.states.push_back(rest);
        } else if (tag == "EDGE") {
            int src, dst;
            std::string label;
            ls >> src >> label >> dst;
            if (src < 0 || size_t(src) >= lts.states.size() || dst < 0 ||
                size_t(dst) >= lts.states.size())
                throw ParseError("EDGE references unknown state");
            lts.edges.push_back({src, parse_label(label), dst});
        } else {
            throw ParseError("bad LTS line: " + line);
        }
    }
    return lts;
}

}  // namespace swirl
