#ifndef SWIRL_OPTIMIZE_HPP
#define SWIRL_OPTIMIZE_HPP

#include <map>
#include <string>

#include "swirl/ir.hpp"

namespace swirl {

/// Removes same-location communications and duplicate cross-location
/// communications: per location, the trace's predicates are scanned in
/// left-to-right syntactic order threading a seen-set; a send/recv is dropped
/// when src = dst or when an identical predicate was already kept. Execs are
/// never touched. The result is canonical.
WorkflowSystem optimize(const WorkflowSystem& sys);

struct CommStats {
    size_t sends = 0;
    size_t recvs = 0;
    size_t execs = 0;
    std::map<std::pair<Id, Id>, size_t> per_pair;  // (src,dst) -> send count
};

CommStats comm_stats(const WorkflowSystem& sys);

std::string format_stats(const CommStats& stats);

}  // namespace swirl

#endif
