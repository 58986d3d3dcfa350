#include "depinsim/matching.hpp"

#include <algorithm>
#include <limits>

namespace depinsim {

bool eligible(const JobSpec& spec, const ProcessorProfile& profile,
              double reputation, std::uint32_t load) {
    if (load >= profile.capacity) return false;
    switch (spec.mode.kind) {
        case AssignmentKind::Personal:
            return profile.owner_id == spec.consumer_id;
        case AssignmentKind::Selected:
            return spec.mode.selected.count(profile.processor_id) != 0;
        case AssignmentKind::Public: {
            if (reputation < spec.min_reputation) return false;
            const auto slots = static_cast<Tokens>(slot_count(spec.schedule));
            if (profile.price_floor > 0 &&
                slots > std::numeric_limits<Tokens>::max() / profile.price_floor) {
                return false;  // ask exceeds the token range
            }
            return spec.reward >= profile.price_floor * slots;
        }
    }
    return false;
}

std::vector<MatchProposal> match(
    const std::vector<const JobRecord*>& open_jobs,
    const std::vector<ProcessorSnapshot>& processors) {
    std::vector<const JobRecord*> jobs = open_jobs;
    std::sort(jobs.begin(), jobs.end(),
              [](const JobRecord* a, const JobRecord* b) {
                  return a->job_id < b->job_id;
              });

    std::vector<std::uint32_t> loads(processors.size());
    for (std::size_t i = 0; i < processors.size(); ++i) {
        loads[i] = processors[i].load;
    }

    std::vector<MatchProposal> proposals;
    for (const JobRecord* job : jobs) {
        const ProcessorSnapshot* best = nullptr;
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < processors.size(); ++i) {
            const auto& candidate = processors[i];
            if (!eligible(job->spec, candidate.profile, candidate.reputation,
                          loads[i])) {
                continue;
            }
            const bool wins =
                !best ||
                candidate.reputation > best->reputation ||
                (candidate.reputation == best->reputation &&
                 (candidate.profile.price_floor < best->profile.price_floor ||
                  (candidate.profile.price_floor == best->profile.price_floor &&
                   candidate.profile.processor_id <
                       best->profile.processor_id)));
            if (wins) {
                best = &candidate;
                best_index = i;
            }
        }
        if (best) {
            proposals.push_back({job->job_id, best->profile.processor_id});
            ++loads[best_index];
        }
    }
    return proposals;
}

}  // namespace depinsim
