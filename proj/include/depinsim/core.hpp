#pragma once

// Shared value types of the job-orchestration model: schedules, resource
// requirements, assignment modes, job specifications, processor profiles,
// and the slot arithmetic every other component builds on.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace depinsim {

using TimeMs = std::int64_t;      // absolute simulated time, ms since 0
using DurationMs = std::int64_t;  // non-negative span, ms
using Tokens = std::int64_t;      // smallest denomination, integral
using JobId = std::uint64_t;

// Upper bound on slots per job; schedules beyond it fail validation so
// per-slot bookkeeping stays allocatable.
inline constexpr std::uint64_t kMaxSlotCount = 10'000'000;

// Execution window of a job: slots run at start, start+interval, ... and the
// last one must finish (declared duration) by end.
struct Schedule {
    TimeMs start_ms = 0;
    TimeMs end_ms = 0;
    DurationMs interval_ms = 1;
    DurationMs duration_ms = 1;
    DurationMs max_start_delay_ms = 0;
};

struct ResourceRequirements {
    std::uint64_t memory_bytes = 0;
    std::uint64_t network_requests = 0;
    std::uint64_t storage_bytes = 0;
};

enum class AssignmentKind { Personal, Selected, Public };

struct AssignmentMode {
    AssignmentKind kind = AssignmentKind::Public;
    std::set<std::string> selected;  // non-empty iff kind == Selected

    static AssignmentMode personal() { return {AssignmentKind::Personal, {}}; }
    static AssignmentMode selected_set(std::set<std::string> ids) {
        return {AssignmentKind::Selected, std::move(ids)};
    }
    static AssignmentMode open_to_public() { return {AssignmentKind::Public, {}}; }
};

struct WorkloadRef {
    std::string name;           // e.g. "sieve"
    std::uint64_t param = 0;    // workload-specific size parameter
};

struct DestinationRef {
    std::string sink_id;        // opaque settlement target
    Tokens gas_fee = 0;         // per-fulfillment settlement cost
};

struct JobSpec {
    std::string consumer_id;
    WorkloadRef workload;
    Schedule schedule;
    ResourceRequirements resources;
    Tokens reward = 0;
    Tokens gas_budget = 0;
    double min_reputation = 0.0;  // consulted only for Public mode
    AssignmentMode mode;
    DestinationRef destination;
};

enum class JobState { Open, Matched, Assigned, Completed, Failed };

const char* to_string(JobState s);

// Legal lifecycle moves: Open->Matched, Matched->Assigned,
// Matched->Open (slot confirmation refused), Assigned->Completed,
// Assigned->Failed.
bool is_legal_transition(JobState from, JobState to);

struct ExecutionTimeModel {
    enum class Kind { Constant, Normal };
    Kind kind = Kind::Constant;
    double mean_ms = 1.0;
    double std_ms = 0.0;  // ignored for Constant

    static ExecutionTimeModel constant(double mean) {
        return {Kind::Constant, mean, 0.0};
    }
    static ExecutionTimeModel normal(double mean, double std) {
        return {Kind::Normal, mean, std};
    }
};

struct ProcessorProfile {
    std::string processor_id;
    std::string owner_id;
    std::string device_model;   // doubles as the platform label in reports
    int android_version = 0;
    std::string country;        // ISO 3166 alpha-3
    ExecutionTimeModel exec_model;
    double power_watts = 1.0;
    Tokens price_floor = 0;     // per slot
    std::uint32_t capacity = 1; // max concurrent slots
    double reliability = 1.0;   // per-slot success probability
    double refusal_probability = 0.0;  // chance of refusing slot confirmation
};

// Number of executions the schedule yields:
// floor((end - start - duration) / interval) + 1. Schedule invariants
// guarantee the result is >= 1.
std::uint64_t slot_count(const Schedule& schedule);

// Slot start times [start + k * interval], k = 0 .. slot_count-1.
std::vector<TimeMs> slot_times(const Schedule& schedule);

// Every violated invariant of the spec and its schedule, one message each.
// Empty result means valid. Total: never aborts on any representable input.
std::vector<std::string> validate_spec(const JobSpec& spec);

std::vector<std::string> validate_schedule(const Schedule& schedule);

}  // namespace depinsim
