#ifndef TESTS_RANDOM_INSTANCES_HPP
#define TESTS_RANDOM_INSTANCES_HPP

#include <random>
#include <string>
#include <vector>

#include "swirl/workflow.hpp"

// Seeded generator of small acyclic instances: up to 5 steps in topological
// order, up to 4 locations, every datum on its own port. Later steps consume
// random subsets of earlier outputs, so all dependencies point forward.
inline swirl::DistributedWorkflowInstance make_random_instance(uint64_t seed) {
    using namespace swirl;
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) {
        return int(rng() % uint64_t(hi - lo + 1)) + lo;
    };

    DistributedWorkflowInstance inst;
    int nloc = pick(1, 4);
    std::vector<Id> locs;
    for (int i = 1; i <= nloc; ++i) {
        locs.push_back("L" + std::to_string(i));
        inst.locations.insert(locs.back());
    }

    int nsteps = pick(1, 5);
    std::vector<Id> available;  // data produced by earlier steps
    int next_datum = 1;
    for (int i = 1; i <= nsteps; ++i) {
        Id step = "S" + std::to_string(i);
        inst.workflow.steps.insert(step);

        // inputs: random subset of what already exists
        for (const auto& d : available)
            if (rng() % 3 == 0) inst.workflow.deps.insert({inst.data_port.at(d), step});

        // outputs: fresh data, each on its own port
        int nout = pick(i == 1 ? 1 : 0, 2);  // the first step always produces
        for (int o = 0; o < nout; ++o) {
            Id d = "D" + std::to_string(next_datum);
            Id port = "P" + std::to_string(next_datum);
            ++next_datum;
            inst.workflow.ports.insert(port);
            inst.workflow.deps.insert({step, port});
            inst.data.insert(d);
            inst.data_port[d] = port;
            available.push_back(d);
        }

        // mapping: one or two locations
        IdSet where{locs[size_t(rng() % locs.size())]};
        if (locs.size() > 1 && rng() % 4 == 0)
            where.insert(locs[size_t(rng() % locs.size())]);
        inst.mapping[step] = where;
    }

    // occasionally preplace a datum, but never where one of its consumers
    // runs: a pre-satisfied input would let the optimized system fire that
    // consumer before the producer, which is observably different
    if (!available.empty() && rng() % 3 == 0) {
        Id d = available[size_t(rng() % available.size())];
        IdSet consumer_locs;
        for (const auto& s : out_steps(inst.workflow, inst.data_port.at(d)))
            for (const auto& l : inst.mapping.at(s)) consumer_locs.insert(l);
        std::vector<Id> safe;
        for (const auto& l : locs)
            if (!consumer_locs.count(l)) safe.push_back(l);
        if (!safe.empty()) inst.placement[safe[size_t(rng() % safe.size())]] = {d};
    }

    validate(inst);
    return inst;
}

#endif
