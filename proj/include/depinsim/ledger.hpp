#pragma once

// Token settlement: account balances plus per-job locked funds (reward and
// gas), moved only through lock / pay_slot / refund so that
// sum(balances) + sum(locked) == total_supply holds after every operation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "depinsim/core.hpp"
#include "depinsim/result.hpp"

namespace depinsim {

enum class LedgerError {
    InsufficientBalance,
    DuplicateLock,
    InsufficientLocked,
    UnknownJob,
    NegativeAmount,
};

const char* to_string(LedgerError e);

struct LockedFunds {
    Tokens reward_remaining = 0;
    Tokens gas_remaining = 0;
};

struct AuditViolation {
    std::string detail;
};

class Ledger {
public:
    Ledger() = default;

    // Supply is fixed at construction as the sum of the initial balances.
    explicit Ledger(std::map<std::string, Tokens> initial_balances);

    // Arbitrary-state constructor; the declared supply is taken at face
    // value so audit() can be exercised against corrupted books.
    Ledger(std::map<std::string, Tokens> balances,
           std::map<JobId, LockedFunds> locked, Tokens declared_supply);

    // Moves reward+gas from the consumer into the job's locked entry.
    std::optional<LedgerError> lock(const std::string& consumer, JobId job_id,
                                    Tokens reward, Tokens gas);

    // Pays the processor a reward share plus the gas reimbursement out of
    // the job's locked funds.
    std::optional<LedgerError> pay_slot(JobId job_id,
                                        const std::string& processor,
                                        Tokens reward_share, Tokens gas_fee);

    // Returns all remaining locked funds of the job to the consumer and
    // drops the lock entry. Yields the amount moved.
    Result<Tokens, LedgerError> refund(JobId job_id,
                                       const std::string& consumer);

    // Recomputes sum(balances) + sum(locked) against the fixed supply.
    std::optional<AuditViolation> audit() const;

    Tokens balance_of(const std::string& account) const;
    std::optional<LockedFunds> locked_for(JobId job_id) const;
    Tokens total_supply() const { return total_supply_; }

    const std::map<std::string, Tokens>& balances() const { return balances_; }
    const std::map<JobId, LockedFunds>& locked() const { return locked_; }

private:
    std::map<std::string, Tokens> balances_;
    std::map<JobId, LockedFunds> locked_;
    Tokens total_supply_ = 0;
};

}  // namespace depinsim
