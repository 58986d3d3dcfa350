#pragma once

// Liquid matching: deterministic greedy pairing of Open jobs with eligible
// processors. Jobs are served in ascending job id; among eligible
// processors the winner maximizes (reputation, -price_floor, smallest id).

#include <cstdint>
#include <string>
#include <vector>

#include "depinsim/core.hpp"
#include "depinsim/registry.hpp"

namespace depinsim {

struct MatchProposal {
    JobId job_id = 0;
    std::string processor_id;
};

struct ProcessorSnapshot {
    ProcessorProfile profile;
    double reputation = 0.5;
    std::uint32_t load = 0;  // concurrent slots currently held
};

// Eligibility under the three assignment modes:
//   Personal: the processor belongs to the consumer; price floor and
//             reputation are ignored (permissioned, reward may be 0).
//   Selected: the processor id is in the declared set.
//   Public:   reputation >= min_reputation and the total reward covers
//             price_floor * slot_count.
// All modes additionally require load < capacity.
bool eligible(const JobSpec& spec, const ProcessorProfile& profile,
              double reputation, std::uint32_t load);

// One proposal per matchable job; a processor's provisional load grows as
// proposals accumulate within the call so capacity is never oversubscribed.
// Jobs without an eligible processor are skipped. Pure and deterministic.
std::vector<MatchProposal> match(const std::vector<const JobRecord*>& open_jobs,
                                 const std::vector<ProcessorSnapshot>& processors);

}  // namespace depinsim
