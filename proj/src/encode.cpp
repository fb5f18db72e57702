#include "swirl/encode.hpp"

#include "swirl/errors.hpp"

namespace swirl {

TraceRef building_block(const DistributedWorkflowInstance& inst, const Id& step,
                        const Id& loc) {
    auto mit = inst.mapping.find(step);
    if (mit == inst.mapping.end() || !mit->second.count(loc))
        throw PreconditionViolation("location " + loc + " is not in mapping(" + step + ")");

    const Workflow& w = inst.workflow;
    IdSet ins = in_data(inst, step);
    IdSet outs = out_data(inst, step);

    // (i) one recv per input datum per producing location
    std::vector<TraceRef> recvs;
    for (const auto& d : ins) {
        const Id& port = inst.data_port.at(d);
        for (const auto& producer : in_steps(w, port))
            for (const auto& lj : inst.mapping.at(producer))
                recvs.push_back(act(Recv{port, lj, loc}));
    }

    // (ii) the step itself, carrying its dataflow and full location set
    TraceRef exec_part = act(Exec{step, Dataflow{ins, outs}, mit->second});

    // (iii) one send per output datum per consumer step per consumer location
    std::vector<TraceRef> sends;
    for (const auto& d : outs) {
        const Id& port = inst.data_port.at(d);
        for (const auto& consumer : out_steps(w, port))
            for (const auto& lj : inst.mapping.at(consumer))
                sends.push_back(act(Send{d, port, loc, lj}));
    }

    return seq(par_all(recvs), seq(exec_part, par_all(sends)));
}

WorkflowSystem encode(const DistributedWorkflowInstance& inst) {
    validate(inst);
    WorkflowSystem sys;
    for (const auto& l : inst.locations) {
        LocationConfig cfg;
        cfg.loc = l;
        auto pit = inst.placement.find(l);
        if (pit != inst.placement.end()) cfg.data = pit->second;
        std::vector<TraceRef> blocks;
        for (const auto& s : work_queue(inst, l))
            blocks.push_back(building_block(inst, s, l));
        cfg.trace = normalize(par_all(blocks));
        sys.configs.push_back(std::move(cfg));
    }
    return canonical(sys);
}

}  // namespace swirl
