#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "swirl/encode.hpp"
#include "swirl/errors.hpp"
#include "swirl/generator.hpp"
#include "swirl/parse.hpp"

using namespace swirl;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("building block shape is recv*.exec.send*") {
    auto inst = fig1_instance();

    // source step: no recvs, one send per (consumer step, consumer location)
    auto bd = normalize(building_block(inst, "s1", "ld"));
    auto expect_d = normalize(parse_swirl(
        "loc ld {data={}; trace=exec(s1,{}->{d1,d2},{ld})."
        "(send(d1->p1,ld,l1) | send(d2->p2,ld,l2) | send(d2->p2,ld,l3))}")
        .configs[0].trace);
    CHECK(trace_equal(bd, expect_d));

    // sink step on a single location: one recv per input datum
    auto b2 = normalize(building_block(inst, "s2", "l1"));
    auto expect_2 = normalize(parse_swirl(
        "loc l1 {data={}; trace=recv(p1,ld,l1).exec(s2,{d1}->{},{l1})}")
        .configs[0].trace);
    CHECK(trace_equal(b2, expect_2));

    // replicated step: block is location-specific but exec carries all locations
    auto b3 = normalize(building_block(inst, "s3", "l3"));
    auto expect_3 = normalize(parse_swirl(
        "loc l3 {data={}; trace=recv(p2,ld,l3).exec(s3,{d2}->{},{l2,l3})}")
        .configs[0].trace);
    CHECK(trace_equal(b3, expect_3));
}

TEST_CASE("building block requires the location to run the step") {
    auto inst = fig1_instance();
    CHECK_THROWS_AS(building_block(inst, "s2", "ld"), PreconditionViolation);
}

TEST_CASE("encoding the example matches the hand-written system") {
    auto sys = encode(fig1_instance());
    auto golden = parse_swirl(
        "loc ld {data={}; trace=exec(s1,{}->{d1,d2},{ld})."
        "(send(d1->p1,ld,l1) | send(d2->p2,ld,l2) | send(d2->p2,ld,l3))} | "
        "loc l1 {data={}; trace=recv(p1,ld,l1).exec(s2,{d1}->{},{l1})} | "
        "loc l2 {data={}; trace=recv(p2,ld,l2).exec(s3,{d2}->{},{l2,l3})} | "
        "loc l3 {data={}; trace=recv(p2,ld,l3).exec(s3,{d2}->{},{l2,l3})}");
    CHECK(congruent(sys, golden));
    CHECK(render_swirl(sys) + "\n" == slurp(FIXTURE_DIR "/ex2.swirl"));
}

TEST_CASE("encoding validates its input") {
    auto inst = fig1_instance();
    inst.mapping["s2"].clear();
    CHECK_THROWS_AS(encode(inst), ValidationError);
}

TEST_CASE("initial data comes from the placement") {
    auto inst = fig1_instance();
    inst.placement["ld"] = {"d1"};
    auto sys = encode(inst);
    CHECK(sys.find("ld")->data == IdSet{"d1"});
    CHECK(sys.find("l1")->data == IdSet{});
}

TEST_CASE("a location mapped to several steps runs their blocks in parallel") {
    auto inst = fig1_instance();
    inst.mapping["s2"] = {"l2"};  // l2 now runs s2 and s3, l1 is idle
    auto sys = encode(inst);
    auto golden = parse_swirl(
        "loc l2 {data={}; trace=recv(p1,ld,l2).exec(s2,{d1}->{},{l2}) | "
        "recv(p2,ld,l2).exec(s3,{d2}->{},{l2,l3})}");
    CHECK(congruent(sys.find("l2")->trace, golden.configs[0].trace));
    CHECK(sys.find("l1")->trace->kind == Trace::Kind::Nil);
}
