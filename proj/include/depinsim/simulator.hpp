#pragma once

// Deterministic discrete-event engine. Drives job registrations, matching
// ticks, slot executions and fulfillment reports over a simulated
// millisecond clock, wiring the registry, ledger and reputation book
// together. Identical (scenario, seed) inputs replay to identical reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "depinsim/core.hpp"
#include "depinsim/registry.hpp"
#include "depinsim/result.hpp"
#include "depinsim/rng.hpp"

namespace depinsim {

struct ScenarioJob {
    TimeMs registration_time_ms = 0;
    // Platform-side overhead before the job becomes visible to matching.
    DurationMs dispatch_latency_ms = 0;
    JobSpec spec;
};

struct Scenario {
    std::uint64_t seed = 0;
    DurationMs match_tick_ms = 1000;
    TimeMs max_time_ms = 0;            // 0 = run until the event queue drains
    bool audit_every_event = false;    // ledger audit after every mutation
    std::vector<ProcessorProfile> processors;
    std::vector<ScenarioJob> jobs;
    std::map<std::string, Tokens> initial_balances;
};

struct JobOutcome {
    JobId job_id = 0;
    JobState final_state = JobState::Open;
    std::string processor;  // empty if never matched
    std::vector<ExecutionRecord> executions;
};

struct ProcessorOutcome {
    std::string processor_id;
    std::uint64_t fulfilled_slots = 0;
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
    Tokens earnings = 0;
    double reputation = 0.5;
};

struct SimEvent {
    TimeMs time_ms = 0;
    std::uint64_t seq = 0;
    std::string type;
    JobId job_id = 0;           // 0 when not job-related
    std::string processor_id;   // empty when not processor-related
    std::int64_t slot = -1;     // -1 when not slot-related
    std::string detail;
};

struct SimReport {
    std::uint64_t seed = 0;
    double success_rate = 1.0;  // successful slots / reported slots
    bool audit_ok = true;
    std::vector<JobOutcome> jobs;
    std::vector<ProcessorOutcome> processors;
    // Successful execution durations grouped by device model.
    std::map<std::string, std::vector<DurationMs>> platform_samples;
    std::map<std::string, Tokens> final_balances;
    std::vector<SimEvent> event_log;
};

// Duration draw for one execution: the constant model returns its mean,
// the normal model redraws until the rounded value is >= 1 ms.
DurationMs sample_exec_time(const ExecutionTimeModel& model, Rng& rng);

// Scenario problems found before any event runs; empty means runnable.
std::vector<std::string> validate_scenario(const Scenario& scenario);

struct ScenarioError {
    std::vector<std::string> problems;
};

Result<SimReport, ScenarioError> run(const Scenario& scenario);

}  // namespace depinsim
