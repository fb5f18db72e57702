#include "swirl/workflow.hpp"

#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "swirl/errors.hpp"

namespace swirl {

namespace {

using nlohmann::json;

bool valid_id(const Id& id) {
    static const std::regex re("[A-Za-z_][A-Za-z0-9_]*");
    return std::regex_match(id, re);
}

void require_step(const Workflow& w, const Id& s) {
    if (!w.steps.count(s)) throw NotFound("unknown step: " + s);
}

void require_port(const Workflow& w, const Id& p) {
    if (!w.ports.count(p)) throw NotFound("unknown port: " + p);
}

}  // namespace

IdSet in_ports(const Workflow& w, const Id& step) {
    require_step(w, step);
    IdSet out;
    for (const auto& [from, to] : w.deps)
        if (to == step) out.insert(from);
    return out;
}

IdSet out_ports(const Workflow& w, const Id& step) {
    require_step(w, step);
    IdSet out;
    for (const auto& [from, to] : w.deps)
        if (from == step) out.insert(to);
    return out;
}

IdSet in_steps(const Workflow& w, const Id& port) {
    require_port(w, port);
    IdSet out;
    for (const auto& [from, to] : w.deps)
        if (to == port) out.insert(from);
    return out;
}

IdSet out_steps(const Workflow& w, const Id& port) {
    require_port(w, port);
    IdSet out;
    for (const auto& [from, to] : w.deps)
        if (from == port) out.insert(to);
    return out;
}

IdSet in_data(const DistributedWorkflowInstance& inst, const Id& step) {
    IdSet ports = in_ports(inst.workflow, step);
    IdSet out;
    for (const auto& [d, p] : inst.data_port)
        if (ports.count(p)) out.insert(d);
    return out;
}

IdSet out_data(const DistributedWorkflowInstance& inst, const Id& step) {
    IdSet ports = out_ports(inst.workflow, step);
    IdSet out;
    for (const auto& [d, p] : inst.data_port)
        if (ports.count(p)) out.insert(d);
    return out;
}

IdSet work_queue(const DistributedWorkflowInstance& inst, const Id& loc) {
    if (!inst.locations.count(loc)) throw NotFound("unknown location: " + loc);
    IdSet out;
    for (const auto& [s, locs] : inst.mapping)
        if (locs.count(loc)) out.insert(s);
    return out;
}

void validate(const DistributedWorkflowInstance& inst) {
    const Workflow& w = inst.workflow;

    for (const auto& s : w.steps)
        if (!valid_id(s)) throw ValidationError("invalid step id: '" + s + "'");
    for (const auto& p : w.ports)
        if (!valid_id(p)) throw ValidationError("invalid port id: '" + p + "'");
    for (const auto& l : inst.locations)
        if (!valid_id(l)) throw ValidationError("invalid location id: '" + l + "'");
    for (const auto& d : inst.data)
        if (!valid_id(d)) throw ValidationError("invalid data id: '" + d + "'");

    for (const auto& s : w.steps)
        if (w.ports.count(s))
            throw ValidationError("id used as both step and port: " + s);

    for (const auto& [from, to] : w.deps) {
        bool sp = w.steps.count(from) && w.ports.count(to);
        bool ps = w.ports.count(from) && w.steps.count(to);
        if (!sp && !ps)
            throw ValidationError("dep link is not bipartite or has unknown endpoint: " +
                                  from + " -> " + to);
    }

    for (const auto& s : w.steps) {
        auto it = inst.mapping.find(s);
        if (it == inst.mapping.end() || it->second.empty())
            throw ValidationError("step has empty location mapping: " + s);
        for (const auto& l : it->second)
            if (!inst.locations.count(l))
                throw ValidationError("step " + s + " mapped to unknown location: " + l);
    }
    for (const auto& [s, locs] : inst.mapping)
        if (!w.steps.count(s))
            throw ValidationError("mapping references unknown step: " + s);

    std::map<Id, Id> port_owner;
    for (const auto& d : inst.data) {
        auto it = inst.data_port.find(d);
        if (it == inst.data_port.end())
            throw ValidationError("datum has no port: " + d);
        if (!w.ports.count(it->second))
            throw ValidationError("datum " + d + " mapped to unknown port: " + it->second);
        auto [owner, fresh] = port_owner.emplace(it->second, d);
        if (!fresh)
            throw ValidationError("port " + it->second + " carries two data elements: " +
                                  owner->second + " and " + d);
    }
    for (const auto& [d, p] : inst.data_port)
        if (!inst.data.count(d))
            throw ValidationError("data_port references unknown datum: " + d);

    for (const auto& [l, ds] : inst.placement) {
        if (!inst.locations.count(l))
            throw ValidationError("placement references unknown location: " + l);
        for (const auto& d : ds)
            if (!inst.data.count(d))
                throw ValidationError("placement references unknown datum: " + d);
    }

    for (const auto& [s, cmd] : inst.step_meta)
        if (!w.steps.count(s))
            throw ValidationError("step_meta references unknown step: " + s);

    // Cycle detection over step->port->step edges (DFS, three colors).
    std::map<Id, int> color;
    std::function<void(const Id&)> visit = [&](const Id& s) {
        color[s] = 1;
        for (const auto& p : out_ports(w, s)) {
            for (const auto& nxt : out_steps(w, p)) {
                int c = color.count(nxt) ? color[nxt] : 0;
                if (c == 1)
                    throw ValidationError("cycle through step " + nxt);
                if (c == 0) visit(nxt);
            }
        }
        color[s] = 2;
    };
    for (const auto& s : w.steps)
        if (!color.count(s)) visit(s);
}

namespace {

IdSet json_id_list(const json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + " must be a list");
    IdSet out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ParseError(what + " entries must be strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

}  // namespace

DistributedWorkflowInstance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance file: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance file must be a JSON object");

    static const std::set<std::string> known = {"steps",    "ports", "deps",
                                               "locations", "mapping", "data",
                                               "placement"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ParseError("unknown key: '" + k + "'");
    for (const auto& k : {"steps", "ports", "deps", "locations", "mapping", "data"})
        if (!j.contains(k)) throw ParseError(std::string("missing key: '") + k + "'");

    DistributedWorkflowInstance inst;
    if (!j["steps"].is_array()) throw ParseError("steps must be a list");
    for (const auto& s : j["steps"]) {
        if (!s.is_object() || !s.contains("id") || !s["id"].is_string())
            throw ParseError("steps entries must be objects with an 'id'");
        for (const auto& [k, v] : s.items())
            if (k != "id" && k != "command")
                throw ParseError("unknown key in step: '" + k + "'");
        Id id = s["id"].get<std::string>();
        if (!inst.workflow.steps.insert(id).second)
            throw ParseError("duplicate step id: " + id);
        if (s.contains("command")) {
            if (!s["command"].is_string()) throw ParseError("step command must be a string");
            inst.step_meta[id] = s["command"].get<std::string>();
        }
    }
    inst.workflow.ports = json_id_list(j["ports"], "ports");
    if (!j["deps"].is_array()) throw ParseError("deps must be a list");
    for (const auto& d : j["deps"]) {
        if (!d.is_object() || !d.contains("from") || !d.contains("to") ||
            !d["from"].is_string() || !d["to"].is_string())
            throw ParseError("deps entries must be {from, to} objects");
        for (const auto& [k, v] : d.items())
            if (k != "from" && k != "to") throw ParseError("unknown key in dep: '" + k + "'");
        inst.workflow.deps.emplace(d["from"].get<std::string>(), d["to"].get<std::string>());
    }
    inst.locations = json_id_list(j["locations"], "locations");
    if (!j["mapping"].is_object()) throw ParseError("mapping must be an object");
    for (const auto& [s, locs] : j["mapping"].items())
        inst.mapping[s] = json_id_list(locs, "mapping[" + s + "]");
    if (!j["data"].is_object()) throw ParseError("data must be an object");
    for (const auto& [d, p] : j["data"].items()) {
        if (!p.is_string()) throw ParseError("data values must be port ids");
        inst.data.insert(d);
        inst.data_port[d] = p.get<std::string>();
    }
    if (j.contains("placement")) {
        if (!j["placement"].is_object()) throw ParseError("placement must be an object");
        for (const auto& [l, ds] : j["placement"].items())
            inst.placement[l] = json_id_list(ds, "placement[" + l + "]");
    }

    validate(inst);
    return inst;
}

DistributedWorkflowInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string instance_to_json(const DistributedWorkflowInstance& inst) {
    json j;
    j["steps"] = json::array();
    for (const auto& s : inst.workflow.steps) {
        json e{{"id", s}};
        auto it = inst.step_meta.find(s);
        if (it != inst.step_meta.end()) e["command"] = it->second;
        j["steps"].push_back(e);
    }
    j["ports"] = inst.workflow.ports;
    j["deps"] = json::array();
    for (const auto& [from, to] : inst.workflow.deps)
        j["deps"].push_back({{"from", from}, {"to", to}});
    j["locations"] = inst.locations;
    j["mapping"] = json::object();
    for (const auto& [s, locs] : inst.mapping) j["mapping"][s] = locs;
    j["data"] = json::object();
    for (const auto& [d, p] : inst.data_port) j["data"][d] = p;
    if (!inst.placement.empty()) {
        j["placement"] = json::object();
        for (const auto& [l, ds] : inst.placement) j["placement"][l] = ds;
    }
    return j.dump(2) + "\n";
}

void write_instance_file(const DistributedWorkflowInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << instance_to_json(inst);
}

}  // namespace swirl
