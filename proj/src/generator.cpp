#include "swirl/generator.hpp"

#include <string>

#include "swirl/errors.hpp"

namespace swirl {

DistributedWorkflowInstance fig1_instance() {
    DistributedWorkflowInstance inst;
    inst.workflow.steps = {"s1", "s2", "s3"};
    inst.workflow.ports = {"p1", "p2"};
    inst.workflow.deps = {{"s1", "p1"}, {"s1", "p2"}, {"p1", "s2"}, {"p2", "s3"}};
    inst.locations = {"ld", "l1", "l2", "l3"};
    inst.mapping = {{"s1", {"ld"}}, {"s2", {"l1"}}, {"s3", {"l2", "l3"}}};
    inst.data = {"d1", "d2"};
    inst.data_port = {{"d1", "p1"}, {"d2", "p2"}};
    return inst;
}

namespace {

Id num(const std::string& prefix, int i) { return prefix + std::to_string(i); }

}  // namespace

DistributedWorkflowInstance gen_1000genomes(const GenomeParams& p) {
    if (p.n < 1 || p.m < 1 || p.a < 1 || p.b < 1 || p.c < 1)
        throw InvalidParams("all genome parameters must be >= 1");

    DistributedWorkflowInstance inst;
    Workflow& w = inst.workflow;

    auto add_step = [&](const Id& s, const IdSet& locs) {
        w.steps.insert(s);
        inst.mapping[s] = locs;
    };
    auto add_datum = [&](const Id& d, const Id& port) {
        w.ports.insert(port);
        inst.data.insert(d);
        inst.data_port[d] = port;
    };
    auto link = [&](const Id& from, const Id& to) { w.deps.emplace(from, to); };

    inst.locations.insert("ld");
    for (int j = 1; j <= p.a; ++j) inst.locations.insert(num("lI", j));
    inst.locations.insert("lIM");
    inst.locations.insert("lSF");
    for (int t = 1; t <= p.b; ++t) inst.locations.insert(num("lMO", t));
    for (int k = 1; k <= p.c; ++k) inst.locations.insert(num("lF", k));

    auto round_robin = [](const std::string& prefix, int i, int count) {
        return prefix + std::to_string((i - 1) % count + 1);
    };

    // s0: auxiliary source step distributing all initial data from ld
    add_step("s0", {"ld"});
    for (int i = 1; i <= p.n; ++i) {
        add_datum(num("d0_", i), num("p0_", i));
        link("s0", num("p0_", i));
    }
    for (int h = 1; h <= p.m; ++h) {
        add_datum(num("dP_", h), num("pP_", h));
        link("s0", num("pP_", h));
    }
    add_datum("d0SF", "p0SF");
    link("s0", "p0SF");

    // individuals
    for (int i = 1; i <= p.n; ++i) {
        Id s = num("sI", i);
        add_step(s, {round_robin("lI", i, p.a)});
        link(num("p0_", i), s);
        add_datum(num("dI_", i), num("pI_", i));
        link(s, num("pI_", i));
    }

    // individuals merge
    add_step("sIM", {"lIM"});
    for (int i = 1; i <= p.n; ++i) link(num("pI_", i), "sIM");
    add_datum("dIM", "pIM");
    link("sIM", "pIM");

    // sifting
    add_step("sSF", {"lSF"});
    link("p0SF", "sSF");
    add_datum("dSF", "pSF");
    link("sSF", "pSF");

    // mutations overlap and frequency: same consumption pattern
    for (int h = 1; h <= p.m; ++h) {
        Id mo = num("sMO", h);
        add_step(mo, {round_robin("lMO", h, p.b)});
        link("pIM", mo);
        link("pSF", mo);
        link(num("pP_", h), mo);

        Id fr = num("sF", h);
        add_step(fr, {round_robin("lF", h, p.c)});
        link("pIM", fr);
        link("pSF", fr);
        link(num("pP_", h), fr);
    }

    // s0's outputs start out on the driver location
    inst.placement["ld"] = out_data(inst, "s0");

    validate(inst);
    return inst;
}

}  // namespace swirl
