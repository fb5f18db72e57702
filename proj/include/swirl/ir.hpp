#ifndef SWIRL_IR_HPP
#define SWIRL_IR_HPP

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace swirl {

using Id = std::string;
using IdSet = std::set<Id>;

/// In/out data sets of a step, the F(s) component of an exec predicate.
struct Dataflow {
    IdSet inputs;
    IdSet outputs;

    bool operator==(const Dataflow&) const = default;
    auto operator<=>(const Dataflow&) const = default;
};

struct Exec {
    Id step;
    Dataflow flow;
    IdSet locs;  // must be non-empty

    bool operator==(const Exec&) const = default;
    auto operator<=>(const Exec&) const = default;
};

struct Send {
    Id data;
    Id port;
    Id src;
    Id dst;

    bool operator==(const Send&) const = default;
    auto operator<=>(const Send&) const = default;
};

struct Recv {
    Id port;
    Id src;
    Id dst;

    bool operator==(const Recv&) const = default;
    auto operator<=>(const Recv&) const = default;
};

using Predicate = std::variant<Exec, Send, Recv>;

struct Trace;
using TraceRef = std::shared_ptr<const Trace>;

/// Execution trace: predicates composed by sequence and parallel, with 0.
/// Immutable; subtrees are shared freely.
struct Trace {
    enum class Kind { Nil, Act, Seq, Par };

    Kind kind = Kind::Nil;
    Predicate act;   // Kind::Act only
    TraceRef left;   // Seq/Par
    TraceRef right;  // Seq/Par
};

TraceRef nil();
TraceRef act(Predicate p);
TraceRef seq(TraceRef a, TraceRef b);
TraceRef par(TraceRef a, TraceRef b);

/// Right-nested fold helpers; empty input yields 0.
TraceRef seq_all(const std::vector<TraceRef>& parts);
TraceRef par_all(const std::vector<TraceRef>& parts);

bool trace_equal(const TraceRef& a, const TraceRef& b);

/// One location configuration <l, D, e>.
struct LocationConfig {
    Id loc;
    IdSet data;
    TraceRef trace;
};

/// Parallel composition of location configurations, one per location.
struct WorkflowSystem {
    std::vector<LocationConfig> configs;

    const LocationConfig* find(const Id& loc) const;
};

bool system_equal(const WorkflowSystem& a, const WorkflowSystem& b);

std::string render_predicate(const Predicate& p);
std::string render_trace(const TraceRef& t);
std::string render_swirl(const WorkflowSystem& sys);

/// Structural-congruence normal form: no 0 under . or |, both operators
/// right-nested, | children sorted by rendered text.
TraceRef normalize(const TraceRef& t);
WorkflowSystem normalize(const WorkflowSystem& sys);

/// Normalizes traces, sorts configs by location id. Used for state identity.
WorkflowSystem canonical(const WorkflowSystem& sys);

bool congruent(const TraceRef& a, const TraceRef& b);
bool congruent(const WorkflowSystem& a, const WorkflowSystem& b);

}  // namespace swirl

#endif
