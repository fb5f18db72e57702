#ifndef SWIRL_RUNTIME_HPP
#define SWIRL_RUNTIME_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swirl/ir.hpp"

namespace swirl {

struct Endpoint {
    std::string host;
    uint16_t port = 0;
};

enum class RunMode { Simulate, Shell };

/// Declarative deployment metadata: step commands, data payload sources,
/// location endpoints.
struct Metadata {
    RunMode mode = RunMode::Simulate;
    std::map<Id, std::string> commands;            // step -> shell command
    std::map<Id, std::vector<uint8_t>> inline_data;  // datum -> payload bytes
    std::map<Id, std::string> file_data;           // datum -> payload file path
    std::map<Id, Endpoint> endpoints;              // location -> host:port

    // connection/deadlock tuning
    int connect_attempts = 10;
    std::chrono::milliseconds connect_backoff{500};
    std::chrono::milliseconds idle_timeout{30000};
};

Metadata parse_metadata(const std::string& json_text);
Metadata load_metadata(const std::string& path);

/// One per-location program: preload data plus the location's trace lowered
/// to an instruction tree (isomorphic to the normalized trace).
struct LocationProgram {
    Id loc;
    IdSet preload;
    TraceRef program;
};

struct Bundle {
    std::vector<LocationProgram> programs;
    Metadata meta;
};

/// Checks metadata coverage for the requested mode and snapshots it.
/// Throws MetadataMissing naming the gap.
Bundle compile(const WorkflowSystem& sys, const Metadata& meta);

struct Event {
    std::string time;  // ISO-8601 with milliseconds
    Id loc;
    std::string kind;  // EXEC | SEND | RECV
    std::vector<std::string> ids;
};

struct ExecutionReport {
    std::vector<Event> events;                       // global append order
    std::map<Id, IdSet> placement;                   // final data per location
    std::map<Id, std::map<Id, std::vector<uint8_t>>> payloads;  // loc -> datum -> bytes
    int exit_status = 0;
};

std::string format_report(const ExecutionReport& report);
ExecutionReport parse_report(const std::string& text);

/// Runs every location as a worker thread over an in-process message fabric.
ExecutionReport run_inproc(const Bundle& bundle);

/// Runs one location's program over TCP against the metadata endpoints.
ExecutionReport run_location_tcp(const Bundle& bundle, const Id& loc);

/// Deterministic synthesized payload for simulated outputs.
std::vector<uint8_t> simulated_payload(const Id& step, const Id& datum);

}  // namespace swirl

#endif
