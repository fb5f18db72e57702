#include "swirl/optimize.hpp"

#include <set>
#include <sstream>

namespace swirl {

namespace {

// Scans in syntactic order, rewriting dropped predicates to 0.
TraceRef scan(const TraceRef& t, std::set<std::string>& seen) {
    switch (t->kind) {
        case Trace::Kind::Nil:
            return t;
        case Trace::Kind::Act: {
            if (const Send* s = std::get_if<Send>(&t->act)) {
                if (s->src == s->dst) return nil();
                if (!seen.insert(render_predicate(t->act)).second) return nil();
                return t;
            }
            if (const Recv* r = std::get_if<Recv>(&t->act)) {
                if (r->src == r->dst) return nil();
                if (!seen.insert(render_predicate(t->act)).second) return nil();
                return t;
            }
            return t;  // exec: kept, never enters the seen-set
        }
        case Trace::Kind::Seq: {
            auto l = scan(t->left, seen);
            auto r = scan(t->right, seen);
            return seq(l, r);
        }
        case Trace::Kind::Par: {
            auto l = scan(t->left, seen);
            auto r = scan(t->right, seen);
            return par(l, r);
        }
    }
    return t;
}

void count(const TraceRef& t, CommStats& stats) {
    switch (t->kind) {
        case Trace::Kind::Nil:
            return;
        case Trace::Kind::Act:
            if (const Send* s = std::get_if<Send>(&t->act)) {
                ++stats.sends;
                ++stats.per_pair[{s->src, s->dst}];
            } else if (std::get_if<Recv>(&t->act)) {
                ++stats.recvs;
            } else {
                ++stats.execs;
            }
            return;
        default:
            count(t->left, stats);
            count(t->right, stats);
            return;
    }
}

}  // namespace

WorkflowSystem optimize(const WorkflowSystem& sys) {
    WorkflowSystem out = canonical(sys);
    for (auto& cfg : out.configs) {
        std::set<std::string> seen;  // one seen-set per location trace
        cfg.trace = scan(cfg.trace, seen);
    }
    return canonical(out);
}

CommStats comm_stats(const WorkflowSystem& sys) {
    CommStats stats;
    for (const auto& cfg : sys.configs) count(cfg.trace, stats);
    return stats;
}

std::string format_stats(const CommStats& stats) {
    std::ostringstream os;
    os << "execs " << stats.execs << "\nsends " << stats.sends << "\nrecvs "
       << stats.recvs << '\n';
    for (const auto& [pair, n] : stats.per_pair)
        os << "pair " << pair.first << " -> " << pair.second << ' ' << n << '\n';
    return os.str();
}

}  // namespace swirl
