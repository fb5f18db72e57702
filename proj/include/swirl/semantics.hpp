#ifndef SWIRL_SEMANTICS_HPP
#define SWIRL_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swirl/ir.hpp"

namespace swirl {

/// Path from a trace root to a predicate: 0 = left child, 1 = right child.
/// Descends left of Seq and either side of Par.
using Path = std::vector<uint8_t>;

struct ActivePosition {
    Path path;
    Predicate pred;
};

/// Predicates enabled by the (Sec)/(L-Par) context closure.
std::vector<ActivePosition> active_positions(const TraceRef& t);

/// Transition labels: tau for communications, nu (the exec barb) for steps.
struct Label {
    enum class Kind { Tau, Nu };
    Kind kind;
    Send send;  // Tau: the communicated send predicate
    Exec exec;  // Nu: the full exec triple

    std::string render() const;
    bool operator==(const Label& other) const { return render() == other.render(); }
};

enum class Rule { Exec, LComm, Comm };

struct Transition {
    Label label;
    Rule rule;
    /// (config index, path) of every consumed predicate, rendered for identity.
    std::string provenance;
    WorkflowSystem target;  // canonical
};

/// All transitions enabled in the (canonical) system, deterministically
/// ordered by (rule, label, provenance).
std::vector<Transition> enabled_transitions(const WorkflowSystem& sys);

/// Returns t.target after checking t is still enabled; throws StaleTransition.
WorkflowSystem apply(const WorkflowSystem& sys, const Transition& t);

/// Strong barbs: the exec labels enabled right now.
std::vector<Exec> barbs(const WorkflowSystem& sys);

enum class Policy { Deterministic, SeededRandom };

struct RunResult {
    WorkflowSystem final;
    std::vector<Label> history;
};

RunResult run_to_quiescence(const WorkflowSystem& sys, Policy policy = Policy::Deterministic,
                            uint64_t seed = 0, size_t step_limit = 1000000);

struct LtsEdge {
    int src;
    Label label;
    int dst;
};

struct Lts {
    std::vector<std::string> states;  // canonical renderings
    std::vector<WorkflowSystem> systems;
    std::vector<LtsEdge> edges;
    int initial = 0;

    std::vector<std::vector<int>> out_edges() const;  // state -> edge indices
};

/// Explicit-state BFS over canonical states.
/// With compression enabled, chains of provably confluent tau transitions are
/// executed eagerly and collapsed, so only "stable" states are materialized;
/// the result is weakly barbed bisimilar to the full LTS. States where the
/// local confluence check fails are expanded in full.
Lts reachable_lts(const WorkflowSystem& sys, size_t max_states = 100000,
                  bool compress = false);

struct DiamondReport {
    bool ok = true;
    size_t states = 0;
    size_t diamonds_checked = 0;
    std::string violation;  // first failing diamond, when !ok
};

/// Checks the Church-Rosser diamond for every pair of coinitial transitions
/// over the full reachable LTS.
DiamondReport check_church_rosser(const WorkflowSystem& sys, size_t max_states = 100000);

std::string export_lts(const Lts& lts);
Lts import_lts(const std::string& text);

}  // namespace swirl

#endif
