#pragma once

// The consensus-layer job registry. Owns every JobRecord, enforces the
// lifecycle state machine (Open -> Matched -> Assigned -> Completed/Failed,
// with Matched -> Open on refused slot confirmation), and settles rewards,
// gas and reputation on each fulfillment report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depinsim/core.hpp"
#include "depinsim/ledger.hpp"
#include "depinsim/reputation.hpp"
#include "depinsim/result.hpp"

namespace depinsim {

struct ExecutionRecord {
    std::uint64_t slot_index = 0;
    TimeMs scheduled_start_ms = 0;
    TimeMs actual_start_ms = 0;
    DurationMs duration_ms = 0;
    bool success = false;
    std::string failure_reason;  // empty on success
};

struct JobRecord {
    JobId job_id = 0;
    JobSpec spec;
    JobState state = JobState::Open;
    std::optional<std::string> matched_processor;
    std::optional<std::string> proposed_processor;  // set while Open, by matching
    std::vector<ExecutionRecord> executions;

    // Fulfillment bookkeeping, meaningful from Assigned onwards.
    std::vector<bool> slot_reported;
    std::uint64_t reported_count = 0;
    bool any_failure = false;
};

enum class RegistryErrc {
    InvalidSpec,
    InsufficientBalance,
    UnknownJob,
    WrongState,
    NotProposed,
    AlreadyMatched,
    WrongProcessor,
    DuplicateSlot,
    SlotOutOfRange,
};

const char* to_string(RegistryErrc e);

struct RegistryError {
    RegistryErrc code;
    std::vector<std::string> violations;  // filled for InvalidSpec
};

class Registry {
public:
    // Validates the spec, locks reward + gas against the consumer and
    // persists a new record in Open state. Job ids are a dense 1-based
    // sequence; a failed registration does not consume an id.
    Result<JobId, RegistryError> register_job(const JobSpec& spec,
                                              Ledger& ledger);

    // Marks the processor as the matcher's current proposal for an Open job.
    Result<JobState, RegistryError> propose(JobId job_id,
                                            const std::string& processor_id);

    // Open -> Matched, only for the proposed processor; exclusive.
    Result<JobState, RegistryError> acknowledge(JobId job_id,
                                                const std::string& processor_id);

    // Matched -> Assigned when accepted, Matched -> Open (proposal and match
    // cleared, re-matchable) when refused.
    Result<JobState, RegistryError> confirm_slots(JobId job_id,
                                                  const std::string& processor_id,
                                                  bool accepted);

    // Appends the execution record for a not-yet-reported slot, pays the
    // per-slot reward share plus gas reimbursement on success and feeds the
    // reputation book. When the last slot reports, the job moves to
    // Completed (all successes) or Failed, and any unconsumed locked funds
    // return to the consumer.
    Result<JobState, RegistryError> report_fulfillment(JobId job_id,
                                                       std::uint64_t slot_index,
                                                       const ExecutionRecord& record,
                                                       Ledger& ledger,
                                                       ReputationBook& reputation);

    Result<JobState, RegistryErrc> job_state(JobId job_id) const;

    const JobRecord* find(JobId job_id) const;
    std::vector<const JobRecord*> jobs_in_state(JobState state) const;
    const std::vector<JobRecord>& records() const { return records_; }
    std::uint64_t job_count() const { return records_.size(); }

private:
    JobRecord* find_mutable(JobId job_id);

    std::vector<JobRecord> records_;  // job_id == index + 1
};

}  // namespace depinsim
