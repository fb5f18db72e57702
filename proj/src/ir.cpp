#include "swirl/ir.hpp"

#include <algorithm>
#include <sstream>

namespace swirl {

TraceRef nil() {
    static const TraceRef n = std::make_shared<Trace>();
    return n;
}

TraceRef act(Predicate p) {
    auto t = std::make_shared<Trace>();
    t->kind = Trace::Kind::Act;
    t->act = std::move(p);
    return t;
}

TraceRef seq(TraceRef a, TraceRef b) {
    auto t = std::make_shared<Trace>();
    t->kind = Trace::Kind::Seq;
    t->left = std::move(a);
    t->right = std::move(b);
    return t;
}

TraceRef par(TraceRef a, TraceRef b) {
    auto t = std::make_shared<Trace>();
    t->kind = Trace::Kind::Par;
    t->left = std::move(a);
    t->right = std::move(b);
    return t;
}

TraceRef seq_all(const std::vector<TraceRef>& parts) {
    if (parts.empty()) return nil();
    TraceRef out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = seq(*it, out);
    return out;
}

TraceRef par_all(const std::vector<TraceRef>& parts) {
    if (parts.empty()) return nil();
    TraceRef out = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = par(*it, out);
    return out;
}

bool trace_equal(const TraceRef& a, const TraceRef& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Trace::Kind::Nil: return true;
        case Trace::Kind::Act: return a->act == b->act;
        default: return trace_equal(a->left, b->left) && trace_equal(a->right, b->right);
    }
}

const LocationConfig* WorkflowSystem::find(const Id& loc) const {
    for (const auto& c : configs)
        if (c.loc == loc) return &c;
    return nullptr;
}

bool system_equal(const WorkflowSystem& a, const WorkflowSystem& b) {
    if (a.configs.size() != b.configs.size()) return false;
    for (size_t i = 0; i < a.configs.size(); ++i) {
        const auto& ca = a.configs[i];
        const auto& cb = b.configs[i];
        if (ca.loc != cb.loc || ca.data != cb.data || !trace_equal(ca.trace, cb.trace))
            return false;
    }
    return true;
}

namespace {

void render_set(std::ostream& os, const IdSet& ids) {
    os << '{';
    bool first = true;
    for (const auto& id : ids) {
        if (!first) os << ',';
        os << id;
        first = false;
    }
    os << '}';
}

struct PredicateRenderer {
    std::ostream& os;
    void operator()(const Exec& e) const {
        os << "exec(" << e.step << ',';
        render_set(os, e.flow.inputs);
        os << "->";
        render_set(os, e.flow.outputs);
        os << ',';
        render_set(os, e.locs);
        os << ')';
    }
    void operator()(const Send& s) const {
        os << "send(" << s.data << "->" << s.port << ',' << s.src << ',' << s.dst << ')';
    }
    void operator()(const Recv& r) const {
        os << "recv(" << r.port << ',' << r.src << ',' << r.dst << ')';
    }
};

// Precedence: atoms > '.' > '|'. Parenthesize a child when its operator
// binds no tighter than the parent's, so rendering stays injective on ASTs.
void render_rec(std::ostream& os, const TraceRef& t, int parent_level, bool left_child) {
    int level = 0;
    switch (t->kind) {
        case Trace::Kind::Nil: os << '0'; return;
        case Trace::Kind::Act: std::visit(PredicateRenderer{os}, t->act); return;
        case Trace::Kind::Seq: level = 1; break;
        case Trace::Kind::Par: level = 2; break;
    }
    bool parens = level > parent_level || (level == parent_level && left_child);
    if (parens) os << '(';
    if (t->kind == Trace::Kind::Seq) {
        render_rec(os, t->left, 1, true);
        os << '.';
        render_rec(os, t->right, 1, false);
    } else {
        render_rec(os, t->left, 2, true);
        os << " | ";
        render_rec(os, t->right, 2, false);
    }
    if (parens) os << ')';
}

}  // namespace

std::string render_predicate(const Predicate& p) {
    std::ostringstream os;
    std::visit(PredicateRenderer{os}, p);
    return os.str();
}

std::string render_trace(const TraceRef& t) {
    std::ostringstream os;
    render_rec(os, t, 2, false);
    return os.str();
}

std::string render_swirl(const WorkflowSystem& sys) {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : sys.configs) {
        if (!first) os << " | ";
        os << "loc " << c.loc << " {data=";
        render_set(os, c.data);
        os << "; trace=" << render_trace(c.trace) << '}';
        first = false;
    }
    return os.str();
}

namespace {

void flatten(const TraceRef& t, Trace::Kind kind, std::vector<TraceRef>& out) {
    if (t->kind == kind) {
        flatten(t->left, kind, out);
        flatten(t->right, kind, out);
    } else if (t->kind != Trace::Kind::Nil) {
        out.push_back(t);
    }
}

}  // namespace

TraceRef normalize(const TraceRef& t) {
    switch (t->kind) {
        case Trace::Kind::Nil:
        case Trace::Kind::Act:
            return t;
        case Trace::Kind::Seq: {
            auto l = normalize(t->left);
            auto r = normalize(t->right);
            std::vector<TraceRef> parts;
            flatten(l, Trace::Kind::Seq, parts);
            flatten(r, Trace::Kind::Seq, parts);
            return seq_all(parts);
        }
        case Trace::Kind::Par: {
            auto l = normalize(t->left);
            auto r = normalize(t->right);
            std::vector<TraceRef> parts;
            flatten(l, Trace::Kind::Par, parts);
            flatten(r, Trace::Kind::Par, parts);
            std::stable_sort(parts.begin(), parts.end(),
                             [](const TraceRef& a, const TraceRef& b) {
                                 return render_trace(a) < render_trace(b);
                             });
            return par_all(parts);
        }
    }
    return t;
}

WorkflowSystem normalize(const WorkflowSystem& sys) {
    WorkflowSystem out;
    out.configs.reserve(sys.configs.size());
    for (const auto& c : sys.configs)
        out.configs.push_back({c.loc, c.data, normalize(c.trace)});
    return out;
}

WorkflowSystem canonical(const WorkflowSystem& sys) {
    WorkflowSystem out = normalize(sys);
    std::stable_sort(out.configs.begin(), out.configs.end(),
                     [](const LocationConfig& a, const LocationConfig& b) {
                         return a.loc < b.loc;
                     });
    return out;
}

bool congruent(const TraceRef& a, const TraceRef& b) {
    return trace_equal(normalize(a), normalize(b));
}

bool congruent(const WorkflowSystem& a, const WorkflowSystem& b) {
    return system_equal(canonical(a), canonical(b));
}

}  // namespace swirl
