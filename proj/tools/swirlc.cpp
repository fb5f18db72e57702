#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "swirl/encode.hpp"
#include "swirl/equivalence.hpp"
#include "swirl/errors.hpp"
#include "swirl/generator.hpp"
#include "swirl/optimize.hpp"
#include "swirl/parse.hpp"
#include "swirl/runtime.hpp"
#include "swirl/semantics.hpp"
#include "swirl/workflow.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw swirl::Error("cannot write " + path);
    out << text;
}

swirl::GenomeParams parse_genome_spec(const std::string& spec) {
    swirl::GenomeParams p;
    int vals[5];
    char sep;
    std::istringstream in(spec);
    for (int i = 0; i < 5; ++i) {
        if (!(in >> vals[i])) throw swirl::InvalidParams("--genome wants n,m,a,b,c");
        if (i < 4 && !(in >> sep && sep == ','))
            throw swirl::InvalidParams("--genome wants n,m,a,b,c");
    }
    p.n = vals[0];
    p.m = vals[1];
    p.a = vals[2];
    p.b = vals[3];
    p.c = vals[4];
    return p;
}

int cmd_translate(const std::string& in, const std::string& out) {
    auto inst = swirl::load_instance(in);
    auto sys = swirl::encode(inst);
    write_text(out, swirl::render_swirl(sys) + "\n");
    return kOk;
}

int cmd_optimize(const std::string& in, const std::string& out, bool stats) {
    auto sys = swirl::load_swirl_file(in);
    auto opt = swirl::optimize(sys);
    write_text(out, swirl::render_swirl(opt) + "\n");
    if (stats) {
        std::cerr << "before:\n"
                  << swirl::format_stats(swirl::comm_stats(swirl::canonical(sys)))
                  << "after:\n" << swirl::format_stats(swirl::comm_stats(opt));
    }
    return kOk;
}

int cmd_check(const std::string& in, bool theorem1, bool confluence,
              const std::string& against) {
    auto sys = swirl::load_swirl_file(in);
    if (confluence) {
        auto rep = swirl::check_church_rosser(sys);
        std::cout << "states " << rep.states << "\ndiamonds " << rep.diamonds_checked
                  << "\nconfluent " << (rep.ok ? "yes" : "no") << "\n";
        if (!rep.ok) {
            std::cout << rep.violation << "\n";
            return kCheckFailed;
        }
        return kOk;
    }
    swirl::BisimResult res;
    if (theorem1) {
        res = swirl::check_theorem1(sys);
    } else {
        auto other = swirl::load_swirl_file(against);
        res = swirl::weak_barbed_bisim(sys, other);
    }
    if (res.related) {
        std::cout << "RELATED (witness relation: " << res.witness_relation.size()
                  << " pairs)\n";
        return kOk;
    }
    std::cout << "DISTINGUISHED: " << res.distinguishing_trail << "\n";
    return kCheckFailed;
}

int cmd_run(const std::string& swirl_path, const std::string& meta_path, bool inproc,
            bool tcp, const std::string& loc, const std::string& out) {
    auto sys = swirl::load_swirl_file(swirl_path);
    auto meta = swirl::load_metadata(meta_path);
    auto bundle = swirl::compile(sys, meta);
    swirl::ExecutionReport rep;
    if (inproc) {
        rep = swirl::run_inproc(bundle);
    } else if (tcp) {
        if (loc.empty()) throw swirl::InvalidParams("--tcp needs --loc");
        rep = swirl::run_location_tcp(bundle, loc);
    } else {
        throw swirl::InvalidParams("pick one of --inproc / --tcp");
    }
    write_text(out, swirl::format_report(rep));
    return kOk;
}

int cmd_gen(bool fig1, const std::string& genome, const std::string& out) {
    swirl::DistributedWorkflowInstance inst;
    if (fig1)
        inst = swirl::fig1_instance();
    else
        inst = swirl::gen_1000genomes(parse_genome_spec(genome));
    write_text(out, swirl::instance_to_json(inst) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workflow plan compiler and checker"};
    app.require_subcommand(1);

    std::string in_path, out_path, against, meta_path, loc, genome;
    bool stats = false, theorem1 = false, confluence = false;
    bool inproc = false, tcp = false, fig1 = false;

    auto* translate = app.add_subcommand("translate", "instance JSON -> plan text");
    translate->add_option("instance", in_path)->required();
    translate->add_option("-o,--output", out_path);

    auto* optimize = app.add_subcommand("optimize", "drop redundant communications");
    optimize->add_option("input", in_path)->required();
    optimize->add_option("-o,--output", out_path);
    optimize->add_flag("--stats", stats, "print communication counts to stderr");

    auto* check = app.add_subcommand("check", "confluence / behavioural equivalence");
    check->add_option("input", in_path)->required();
    auto* t1 = check->add_flag("--theorem1", theorem1, "input vs its optimized form");
    auto* cf = check->add_flag("--confluence", confluence, "diamond property over the LTS");
    auto* ag = check->add_option("--against", against, "second plan to compare with");
    t1->excludes(cf)->excludes(ag);
    cf->excludes(ag);

    auto* run = app.add_subcommand("run", "execute a plan");
    run->add_option("plan", in_path)->required();
    run->add_option("metadata", meta_path)->required();
    run->add_flag("--inproc", inproc, "all locations as threads in this process");
    run->add_flag("--tcp", tcp, "run one location over TCP");
    run->add_option("--loc", loc, "location to run (with --tcp)");
    run->add_option("-o,--output", out_path, "execution report file");

    auto* gen = app.add_subcommand("gen", "emit a built-in instance");
    gen->add_flag("--fig1", fig1, "three-step two-datum example");
    gen->add_option("--genome", genome, "genome pipeline sized n,m,a,b,c");
    gen->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*translate) return cmd_translate(in_path, out_path);
        if (*optimize) return cmd_optimize(in_path, out_path, stats);
        if (*check) {
            if (!theorem1 && !confluence && against.empty()) {
                std::cerr << "check: pick --theorem1, --confluence or --against\n";
                return kUsage;
            }
            return cmd_check(in_path, theorem1, confluence, against);
        }
        if (*run) return cmd_run(in_path, meta_path, inproc, tcp, loc, out_path);
        if (*gen) {
            if (fig1 == !genome.empty()) {  // exactly one selector
                std::cerr << "gen: pick --fig1 or --genome n,m,a,b,c\n";
                return kUsage;
            }
            return cmd_gen(fig1, genome, out_path);
        }
    } catch (const swirl::DeadlockError& e) {
        std::cerr << "deadlock: " << e.what() << "\n";
        return kRuntime;
    } catch (const swirl::ConnectionFailure& e) {
        std::cerr << "connection: " << e.what() << "\n";
        return kRuntime;
    } catch (const swirl::StepFailure& e) {
        std::cerr << "step failed: " << e.what() << "\n";
        return kRuntime;
    } catch (const swirl::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const swirl::ValidationError& e) {
        std::cerr << "invalid instance: " << e.what() << "\n";
        return kUsage;
    } catch (const swirl::InvalidParams& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const swirl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
