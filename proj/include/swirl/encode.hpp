#ifndef SWIRL_ENCODE_HPP
#define SWIRL_ENCODE_HPP

#include "swirl/ir.hpp"
#include "swirl/workflow.hpp"

namespace swirl {

/// The recv*.exec.send* fragment realizing step s at location l.
/// Requires l in mapping(s).
TraceRef building_block(const DistributedWorkflowInstance& inst, const Id& step,
                        const Id& loc);

/// Lowers a validated instance to its initial workflow system: one config per
/// location, trace = parallel composition of the work queue's building
/// blocks, data = placement. Result is canonical.
WorkflowSystem encode(const DistributedWorkflowInstance& inst);

}  // namespace swirl

#endif
