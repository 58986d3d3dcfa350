#include "depinsim/core.hpp"

#include <limits>

namespace depinsim {

const char* to_string(JobState s) {
    switch (s) {
        case JobState::Open: return "open";
        case JobState::Matched: return "matched";
        case JobState::Assigned: return "assigned";
        case JobState::Completed: return "completed";
        case JobState::Failed: return "failed";
    }
    return "?";
}

bool is_legal_transition(JobState from, JobState to) {
    switch (from) {
        case JobState::Open:
            return to == JobState::Matched;
        case JobState::Matched:
            return to == JobState::Assigned || to == JobState::Open;
        case JobState::Assigned:
            return to == JobState::Completed || to == JobState::Failed;
        case JobState::Completed:
        case JobState::Failed:
            return false;
    }
    return false;
}

std::uint64_t slot_count(const Schedule& s) {
    const auto usable = s.end_ms - s.start_ms - s.duration_ms;
    return static_cast<std::uint64_t>(usable / s.interval_ms) + 1;
}

std::vector<TimeMs> slot_times(const Schedule& s) {
    const auto n = slot_count(s);
    std::vector<TimeMs> times;
    times.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        times.push_back(s.start_ms + static_cast<TimeMs>(k) * s.interval_ms);
    }
    return times;
}

std::vector<std::string> validate_schedule(const Schedule& s) {
    std::vector<std::string> violations;
    if (s.start_ms >= s.end_ms) {
        violations.push_back("empty schedule window: start_ms must be < end_ms");
    }
    if (s.interval_ms < 1) {
        violations.push_back("interval_ms must be >= 1");
    }
    if (s.duration_ms < 1) {
        violations.push_back("duration_ms must be >= 1");
    }
    if (s.max_start_delay_ms < 0) {
        violations.push_back("max_start_delay_ms must be >= 0");
    }
    if (s.start_ms < s.end_ms && s.duration_ms > s.end_ms - s.start_ms) {
        violations.push_back("duration_ms exceeds the schedule window");
    }
    return violations;
}

std::vector<std::string> validate_spec(const JobSpec& spec) {
    std::vector<std::string> violations = validate_schedule(spec.schedule);
    bool schedule_ok = violations.empty();
    if (schedule_ok && slot_count(spec.schedule) > kMaxSlotCount) {
        violations.push_back("schedule yields more than " +
                             std::to_string(kMaxSlotCount) + " slots");
        schedule_ok = false;
    }

    if (spec.consumer_id.empty()) {
        violations.push_back("consumer_id must not be empty");
    }
    if (spec.reward < 0) {
        violations.push_back("reward must be >= 0");
    }
    if (spec.gas_budget < 0) {
        violations.push_back("gas_budget must be >= 0");
    }
    if (spec.min_reputation < 0.0 || spec.min_reputation > 1.0) {
        violations.push_back("min_reputation must lie in [0, 1]");
    }
    if (spec.mode.kind == AssignmentKind::Selected && spec.mode.selected.empty()) {
        violations.push_back("selected mode requires a non-empty processor set");
    }
    if (spec.mode.kind != AssignmentKind::Selected && !spec.mode.selected.empty()) {
        violations.push_back("processor set is only meaningful for selected mode");
    }
    if (spec.destination.gas_fee < 0) {
        violations.push_back("destination gas_fee must be >= 0");
    }
    // Gas sufficiency needs a well-formed schedule to know the slot count.
    if (schedule_ok && spec.destination.gas_fee >= 0 && spec.gas_budget >= 0) {
        const auto slots = static_cast<Tokens>(slot_count(spec.schedule));
        const Tokens fee = spec.destination.gas_fee;
        if (fee > 0 && slots > std::numeric_limits<Tokens>::max() / fee) {
            violations.push_back(
                "insufficient gas budget: slots * gas_fee exceeds the "
                "token range");
        } else if (spec.gas_budget < slots * fee) {
            violations.push_back("insufficient gas budget: need " +
                                 std::to_string(slots * fee) + " for " +
                                 std::to_string(slots) + " slots, have " +
                                 std::to_string(spec.gas_budget));
        }
    }
    return violations;
}

}  // namespace depinsim
