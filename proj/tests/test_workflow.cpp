#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "swirl/errors.hpp"
#include "swirl/generator.hpp"
#include "swirl/workflow.hpp"

using namespace swirl;

TEST_CASE("graph accessors on the three-step example") {
    auto inst = fig1_instance();
    const auto& w = inst.workflow;
    CHECK(in_ports(w, "s1") == IdSet{});
    CHECK(out_ports(w, "s1") == IdSet{"p1", "p2"});
    CHECK(in_ports(w, "s2") == IdSet{"p1"});
    CHECK(in_ports(w, "s3") == IdSet{"p2"});
    CHECK(out_ports(w, "s3") == IdSet{});
    CHECK(in_steps(w, "p1") == IdSet{"s1"});
    CHECK(out_steps(w, "p2") == IdSet{"s3"});
    CHECK_THROWS_AS(in_ports(w, "nope"), NotFound);
    CHECK_THROWS_AS(out_steps(w, "nope"), NotFound);
}

TEST_CASE("data accessors resolve ports to data elements") {
    auto inst = fig1_instance();
    CHECK(in_data(inst, "s1") == IdSet{});
    CHECK(out_data(inst, "s1") == IdSet{"d1", "d2"});
    CHECK(in_data(inst, "s2") == IdSet{"d1"});
    CHECK(in_data(inst, "s3") == IdSet{"d2"});
}

TEST_CASE("work queue inverts the mapping") {
    auto inst = fig1_instance();
    CHECK(work_queue(inst, "ld") == IdSet{"s1"});
    CHECK(work_queue(inst, "l1") == IdSet{"s2"});
    CHECK(work_queue(inst, "l2") == IdSet{"s3"});
    CHECK(work_queue(inst, "l3") == IdSet{"s3"});
}

TEST_CASE("validate accepts the example and rejects broken instances") {
    auto base = fig1_instance();
    CHECK_NOTHROW(validate(base));

    SUBCASE("cycle") {
        auto inst = base;
        inst.workflow.deps.insert({"p1", "s1"});  // s1 -> p1 -> s1
        CHECK_THROWS_WITH_AS(validate(inst), doctest::Contains("cycle"),
                             ValidationError);
    }
    SUBCASE("port carrying two data elements") {
        auto inst = base;
        inst.data.insert("d9");
        inst.data_port["d9"] = "p1";
        CHECK_THROWS_WITH_AS(validate(inst), doctest::Contains("two data"),
                             ValidationError);
    }
    SUBCASE("mapping to unknown location") {
        auto inst = base;
        inst.mapping["s2"] = {"mars"};
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("empty mapping") {
        auto inst = base;
        inst.mapping["s2"].clear();
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("dep between two steps") {
        auto inst = base;
        inst.workflow.deps.insert({"s1", "s2"});
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("datum on unknown port") {
        auto inst = base;
        inst.data_port["d1"] = "p9";
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("placement of unknown datum") {
        auto inst = base;
        inst.placement["ld"] = {"ghost"};
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("bad identifier") {
        auto inst = base;
        inst.locations.insert("not ok");
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
    SUBCASE("step and port sharing an id") {
        auto inst = base;
        inst.workflow.ports.insert("s1");
        CHECK_THROWS_AS(validate(inst), ValidationError);
    }
}

TEST_CASE("instance JSON round trip") {
    auto inst = fig1_instance();
    auto back = parse_instance(instance_to_json(inst));
    CHECK(back.workflow.steps == inst.workflow.steps);
    CHECK(back.workflow.ports == inst.workflow.ports);
    CHECK(back.workflow.deps == inst.workflow.deps);
    CHECK(back.locations == inst.locations);
    CHECK(back.mapping == inst.mapping);
    CHECK(back.data == inst.data);
    CHECK(back.data_port == inst.data_port);
    CHECK(back.placement == inst.placement);
    // serialization itself is stable
    CHECK(instance_to_json(back) == instance_to_json(inst));
}

TEST_CASE("instance parser rejects unknown keys and malformed JSON") {
    CHECK_THROWS_AS(parse_instance("{"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"surprise": 1})"), ParseError);
    auto inst = fig1_instance();
    auto json = instance_to_json(inst);
    CHECK_NOTHROW(parse_instance(json));
}
