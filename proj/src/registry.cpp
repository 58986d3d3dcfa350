#include "depinsim/registry.hpp"

#include <stdexcept>

namespace depinsim {

namespace {

using StateResult = Result<JobState, RegistryError>;

StateResult fail(RegistryErrc code) {
    return StateResult::fail(RegistryError{code, {}});
}

}  // namespace

const char* to_string(RegistryErrc e) {
    switch (e) {
        case RegistryErrc::InvalidSpec: return "invalid spec";
        case RegistryErrc::InsufficientBalance: return "insufficient balance";
        case RegistryErrc::UnknownJob: return "unknown job";
        case RegistryErrc::WrongState: return "wrong state";
        case RegistryErrc::NotProposed: return "not proposed";
        case RegistryErrc::AlreadyMatched: return "already matched";
        case RegistryErrc::WrongProcessor: return "wrong processor";
        case RegistryErrc::DuplicateSlot: return "duplicate slot";
        case RegistryErrc::SlotOutOfRange: return "slot out of range";
    }
    return "?";
}

Result<JobId, RegistryError> Registry::register_job(const JobSpec& spec,
                                                    Ledger& ledger) {
    using R = Result<JobId, RegistryError>;
    auto violations = validate_spec(spec);
    if (!violations.empty()) {
        return R::fail({RegistryErrc::InvalidSpec, std::move(violations)});
    }
    const JobId job_id = records_.size() + 1;
    if (auto err = ledger.lock(spec.consumer_id, job_id, spec.reward,
                               spec.gas_budget)) {
        if (*err == LedgerError::InsufficientBalance) {
            return R::fail({RegistryErrc::InsufficientBalance, {}});
        }
        throw std::logic_error("registry: unexpected ledger error on lock: " +
                               std::string(to_string(*err)));
    }
    JobRecord record;
    record.job_id = job_id;
    record.spec = spec;
    record.state = JobState::Open;
    record.slot_reported.assign(slot_count(spec.schedule), false);
    records_.push_back(std::move(record));
    return R::ok(job_id);
}

Result<JobState, RegistryError> Registry::propose(JobId job_id,
                                                  const std::string& processor_id) {
    JobRecord* job = find_mutable(job_id);
    if (!job) return fail(RegistryErrc::UnknownJob);
    if (job->state != JobState::Open) return fail(RegistryErrc::WrongState);
    job->proposed_processor = processor_id;
    return StateResult::ok(job->state);
}

Result<JobState, RegistryError> Registry::acknowledge(JobId job_id,
                                                      const std::string& processor_id) {
    JobRecord* job = find_mutable(job_id);
    if (!job) return fail(RegistryErrc::UnknownJob);
    if (job->state == JobState::Matched) return fail(RegistryErrc::AlreadyMatched);
    if (job->state != JobState::Open) return fail(RegistryErrc::WrongState);
    if (!job->proposed_processor || *job->proposed_processor != processor_id) {
        return fail(RegistryErrc::NotProposed);
    }
    job->state = JobState::Matched;
    job->matched_processor = processor_id;
    job->proposed_processor.reset();
    return StateResult::ok(job->state);
}

Result<JobState, RegistryError> Registry::confirm_slots(JobId job_id,
                                                        const std::string& processor_id,
                                                        bool accepted) {
    JobRecord* job = find_mutable(job_id);
    if (!job) return fail(RegistryErrc::UnknownJob);
    if (job->state != JobState::Matched) return fail(RegistryErrc::WrongState);
    if (!job->matched_processor || *job->matched_processor != processor_id) {
        return fail(RegistryErrc::WrongProcessor);
    }
    if (accepted) {
        job->state = JobState::Assigned;
    } else {
        job->state = JobState::Open;
        job->matched_processor.reset();
    }
    return StateResult::ok(job->state);
}

Result<JobState, RegistryError> Registry::report_fulfillment(
    JobId job_id, std::uint64_t slot_index, const ExecutionRecord& record,
    Ledger& ledger, ReputationBook& reputation) {
    JobRecord* job = find_mutable(job_id);
    if (!job) return fail(RegistryErrc::UnknownJob);
    if (job->state != JobState::Assigned) return fail(RegistryErrc::WrongState);
    const std::uint64_t slots = job->slot_reported.size();
    if (slot_index >= slots) return fail(RegistryErrc::SlotOutOfRange);
    if (job->slot_reported[slot_index]) return fail(RegistryErrc::DuplicateSlot);

    job->slot_reported[slot_index] = true;
    ++job->reported_count;
    job->executions.push_back(record);
    job->executions.back().slot_index = slot_index;  // parameter is authoritative
    if (!record.success) job->any_failure = true;

    reputation.record_outcome(*job->matched_processor, record.success);

    if (record.success) {
        // Even split of the reward over slots; the final slot carries the
        // integer-division remainder. Gas is reimbursed per fulfilled slot.
        const Tokens base_share = job->spec.reward / static_cast<Tokens>(slots);
        const Tokens remainder = job->spec.reward % static_cast<Tokens>(slots);
        const Tokens share =
            base_share + (slot_index == slots - 1 ? remainder : 0);
        if (auto err = ledger.pay_slot(job_id, *job->matched_processor, share,
                                       job->spec.destination.gas_fee)) {
            throw std::logic_error("registry: slot payout failed: " +
                                   std::string(to_string(*err)));
        }
    }

    if (job->reported_count == slots) {
        job->state = job->any_failure ? JobState::Failed : JobState::Completed;
        // Unconsumed locked funds (unpaid shares of failed slots, leftover
        // gas budget) flow back to the consumer.
        auto refunded = ledger.refund(job_id, job->spec.consumer_id);
        if (!refunded) {
            throw std::logic_error("registry: terminal refund failed: " +
                                   std::string(to_string(refunded.error())));
        }
    }
    return StateResult::ok(job->state);
}

Result<JobState, RegistryErrc> Registry::job_state(JobId job_id) const {
    using R = Result<JobState, RegistryErrc>;
    const JobRecord* job = find(job_id);
    if (!job) return R::fail(RegistryErrc::UnknownJob);
    return R::ok(job->state);
}

const JobRecord* Registry::find(JobId job_id) const {
    if (job_id == 0 || job_id > records_.size()) return nullptr;
    return &records_[job_id - 1];
}

JobRecord* Registry::find_mutable(JobId job_id) {
    if (job_id == 0 || job_id > records_.size()) return nullptr;
    return &records_[job_id - 1];
}

std::vector<const JobRecord*> Registry::jobs_in_state(JobState state) const {
    std::vector<const JobRecord*> out;
    for (const auto& record : records_) {
        if (record.state == state) out.push_back(&record);
    }
    return out;
}

}  // namespace depinsim
