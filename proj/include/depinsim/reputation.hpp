#pragma once

// Per-processor reliability scores: Laplace-smoothed success rate over the
// fulfillment outcomes the registry reports.

#include <cstdint>
#include <map>
#include <string>

namespace depinsim {

struct ReputationRecord {
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
};

inline ReputationRecord initial_reputation() { return {}; }

inline ReputationRecord update(ReputationRecord rec, bool success) {
    if (success) {
        ++rec.successes;
    } else {
        ++rec.failures;
    }
    return rec;
}

// (successes + 1) / (successes + failures + 2); 0.5 for a fresh record,
// strictly inside (0, 1) for all finite counts.
inline double score(const ReputationRecord& rec) {
    return static_cast<double>(rec.successes + 1) /
           static_cast<double>(rec.successes + rec.failures + 2);
}

// Mutable book of per-processor records, fed by fulfillment reports.
class ReputationBook {
public:
    double score_of(const std::string& processor_id) const {
        auto it = records_.find(processor_id);
        return score(it == records_.end() ? ReputationRecord{} : it->second);
    }

    ReputationRecord record_of(const std::string& processor_id) const {
        auto it = records_.find(processor_id);
        return it == records_.end() ? ReputationRecord{} : it->second;
    }

    void record_outcome(const std::string& processor_id, bool success) {
        records_[processor_id] = update(record_of(processor_id), success);
    }

    const std::map<std::string, ReputationRecord>& records() const {
        return records_;
    }

private:
    std::map<std::string, ReputationRecord> records_;
};

}  // namespace depinsim
