#ifndef SWIRL_WORKFLOW_HPP
#define SWIRL_WORKFLOW_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "swirl/ir.hpp"

namespace swirl {

/// Directed bipartite step/port graph. Links connect a step to a port or a
/// port to a step, never two nodes of the same kind.
struct Workflow {
    IdSet steps;
    IdSet ports;
    std::set<std::pair<Id, Id>> deps;  // (from, to); one endpoint step, one port
};

/// Location-mapped workflow instance: graph + locations + step->locations
/// mapping + data elements with their ports + initial data distribution.
struct DistributedWorkflowInstance {
    Workflow workflow;
    IdSet locations;
    std::map<Id, IdSet> mapping;       // step -> locations (non-empty)
    IdSet data;
    std::map<Id, Id> data_port;        // datum -> port (total function)
    std::map<Id, IdSet> placement;     // location -> preplaced data
    std::map<Id, std::string> step_meta;  // step -> command (optional)
};

IdSet in_ports(const Workflow& w, const Id& step);
IdSet out_ports(const Workflow& w, const Id& step);
IdSet in_steps(const Workflow& w, const Id& port);
IdSet out_steps(const Workflow& w, const Id& port);

IdSet in_data(const DistributedWorkflowInstance& inst, const Id& step);
IdSet out_data(const DistributedWorkflowInstance& inst, const Id& step);

/// Steps mapped onto location l (the work queue Q(l)).
IdSet work_queue(const DistributedWorkflowInstance& inst, const Id& loc);

/// Runs every structural invariant; throws ValidationError naming the
/// violated one.
void validate(const DistributedWorkflowInstance& inst);

DistributedWorkflowInstance parse_instance(const std::string& json_text);
DistributedWorkflowInstance load_instance(const std::string& path);
std::string instance_to_json(const DistributedWorkflowInstance& inst);
void write_instance_file(const DistributedWorkflowInstance& inst, const std::string& path);

}  // namespace swirl

#endif
