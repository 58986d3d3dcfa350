#include "depinsim/ledger.hpp"

#include <limits>

namespace depinsim {

const char* to_string(LedgerError e) {
    switch (e) {
        case LedgerError::InsufficientBalance: return "insufficient balance";
        case LedgerError::DuplicateLock: return "duplicate lock";
        case LedgerError::InsufficientLocked: return "insufficient locked funds";
        case LedgerError::UnknownJob: return "unknown job";
        case LedgerError::NegativeAmount: return "negative amount";
    }
    return "?";
}

Ledger::Ledger(std::map<std::string, Tokens> initial_balances)
    : balances_(std::move(initial_balances)) {
    for (const auto& [account, amount] : balances_) {
        total_supply_ += amount;
    }
}

Ledger::Ledger(std::map<std::string, Tokens> balances,
               std::map<JobId, LockedFunds> locked, Tokens declared_supply)
    : balances_(std::move(balances)),
      locked_(std::move(locked)),
      total_supply_(declared_supply) {}

std::optional<LedgerError> Ledger::lock(const std::string& consumer,
                                        JobId job_id, Tokens reward,
                                        Tokens gas) {
    if (reward < 0 || gas < 0) {
        return LedgerError::NegativeAmount;
    }
    if (locked_.count(job_id) != 0) {
        return LedgerError::DuplicateLock;
    }
    auto it = balances_.find(consumer);
    const Tokens have = it == balances_.end() ? 0 : it->second;
    if (reward > std::numeric_limits<Tokens>::max() - gas ||
        have < reward + gas) {
        return LedgerError::InsufficientBalance;
    }
    balances_[consumer] = have - reward - gas;
    locked_[job_id] = LockedFunds{reward, gas};
    return std::nullopt;
}

std::optional<LedgerError> Ledger::pay_slot(JobId job_id,
                                            const std::string& processor,
                                            Tokens reward_share,
                                            Tokens gas_fee) {
    if (reward_share < 0 || gas_fee < 0) {
        return LedgerError::NegativeAmount;
    }
    auto it = locked_.find(job_id);
    if (it == locked_.end()) {
        return LedgerError::UnknownJob;
    }
    if (it->second.reward_remaining < reward_share ||
        it->second.gas_remaining < gas_fee) {
        return LedgerError::InsufficientLocked;
    }
    it->second.reward_remaining -= reward_share;
    it->second.gas_remaining -= gas_fee;
    balances_[processor] += reward_share + gas_fee;
    return std::nullopt;
}

Result<Tokens, LedgerError> Ledger::refund(JobId job_id,
                                           const std::string& consumer) {
    using R = Result<Tokens, LedgerError>;
    auto it = locked_.find(job_id);
    if (it == locked_.end()) {
        return R::fail(LedgerError::UnknownJob);
    }
    const Tokens amount = it->second.reward_remaining + it->second.gas_remaining;
    balances_[consumer] += amount;
    locked_.erase(it);
    return R::ok(amount);
}

std::optional<AuditViolation> Ledger::audit() const {
    Tokens sum = 0;
    for (const auto& [account, amount] : balances_) {
        if (amount < 0) {
            return AuditViolation{"negative balance for " + account};
        }
        sum += amount;
    }
    for (const auto& [job_id, funds] : locked_) {
        if (funds.reward_remaining < 0 || funds.gas_remaining < 0) {
            return AuditViolation{"negative locked amount for job " +
                                  std::to_string(job_id)};
        }
        sum += funds.reward_remaining + funds.gas_remaining;
    }
    if (sum != total_supply_) {
        return AuditViolation{"balances + locked = " + std::to_string(sum) +
                              " but total supply is " +
                              std::to_string(total_supply_)};
    }
    return std::nullopt;
}

Tokens Ledger::balance_of(const std::string& account) const {
    auto it = balances_.find(account);
    return it == balances_.end() ? 0 : it->second;
}

std::optional<LockedFunds> Ledger::locked_for(JobId job_id) const {
    auto it = locked_.find(job_id);
    if (it == locked_.end()) return std::nullopt;
    return it->second;
}

}  // namespace depinsim
