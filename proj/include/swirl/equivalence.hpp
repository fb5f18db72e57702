#ifndef SWIRL_EQUIVALENCE_HPP
#define SWIRL_EQUIVALENCE_HPP

#include <set>
#include <string>
#include <vector>

#include "swirl/ir.hpp"
#include "swirl/semantics.hpp"

namespace swirl {

/// An LTS plus its tau-saturated relations: tau-closure (reflexive,
/// transitive), weak-nu successors (tau* then nu) and weak barbs per state.
struct WeakLts {
    Lts lts;
    std::vector<std::vector<int>> out;                     // state -> edge indices
    std::vector<std::vector<int>> tau_closure;             // sorted state lists
    std::vector<std::map<std::string, std::set<int>>> weak_nu;  // label -> states
    std::vector<std::set<std::string>> strong_barbs;       // nu labels on out-edges
    std::vector<std::set<std::string>> weak_barbs;
};

WeakLts weak_saturate(const Lts& lts);

struct BisimResult {
    bool related = false;
    /// When related: a weak barbed bisimulation containing the initial pair.
    std::vector<std::pair<int, int>> witness_relation;
    /// When not related: the unmatched barb or move at the initial pair.
    std::string distinguishing_trail;
};

/// Greatest-fixed-point weak barbed bisimilarity between two explicit-state
/// LTSs (tau moves matched by tau*, nu moves matched by tau*;nu with the
/// full exec label, strong barbs matched by weak barbs).
BisimResult weak_barbed_bisim(const WeakLts& a, const WeakLts& b);

/// Builds both state spaces (confluent-tau compressed) and checks.
BisimResult weak_barbed_bisim(const WorkflowSystem& sysA, const WorkflowSystem& sysB,
                              size_t max_states = 100000);

/// sys against its optimized form.
BisimResult check_theorem1(const WorkflowSystem& sys, size_t max_states = 100000);

}  // namespace swirl

#endif
