#include "depinsim/simulator.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include "depinsim/matching.hpp"

namespace depinsim {

namespace {
// event-queue sanity bound; pathological configs fail validation instead
// of exhausting memory
constexpr std::uint64_t kMaxSlotsPerJob = 1'000'000;
}  // namespace

DurationMs sample_exec_time(const ExecutionTimeModel& model, Rng& rng) {
    if (model.kind == ExecutionTimeModel::Kind::Constant) {
        return static_cast<DurationMs>(std::llround(model.mean_ms));
    }
    DurationMs ms = 0;
    do {
        ms = static_cast<DurationMs>(
            std::llround(rng.normal(model.mean_ms, model.std_ms)));
    } while (ms < 1);
    return ms;
}

std::vector<std::string> validate_scenario(const Scenario& scenario) {
    std::vector<std::string> problems;
    if (scenario.match_tick_ms < 1) {
        problems.push_back("match_tick_ms must be >= 1");
    }
    if (scenario.max_time_ms < 0) {
        problems.push_back("max_time_ms must be >= 0");
    }
    std::set<std::string> processor_ids;
    for (std::size_t i = 0; i < scenario.processors.size(); ++i) {
        const auto& p = scenario.processors[i];
        const std::string where = "processors[" + std::to_string(i) + "]";
        if (p.processor_id.empty()) {
            problems.push_back(where + ": processor_id must not be empty");
        } else if (!processor_ids.insert(p.processor_id).second) {
            problems.push_back(where + ": duplicate processor_id '" +
                               p.processor_id + "'");
        }
        if (p.exec_model.mean_ms <= 0) {
            problems.push_back(where + ": exec_model.mean_ms must be > 0");
        }
        if (p.exec_model.std_ms < 0) {
            problems.push_back(where + ": exec_model.std_ms must be >= 0");
        }
        if (p.power_watts <= 0) {
            problems.push_back(where + ": power_watts must be > 0");
        }
        if (p.capacity < 1) {
            problems.push_back(where + ": capacity must be >= 1");
        }
        if (p.reliability < 0.0 || p.reliability > 1.0) {
            problems.push_back(where + ": reliability must lie in [0, 1]");
        }
        if (p.refusal_probability < 0.0 || p.refusal_probability > 1.0) {
            problems.push_back(where + ": refusal_probability must lie in [0, 1]");
        }
        if (p.price_floor < 0) {
            problems.push_back(where + ": price_floor must be >= 0");
        }
    }
    for (std::size_t i = 0; i < scenario.jobs.size(); ++i) {
        const auto& job = scenario.jobs[i];
        const std::string where = "jobs[" + std::to_string(i) + "]";
        if (job.registration_time_ms < 0) {
            problems.push_back(where + ": registration_time_ms must be >= 0");
        }
        if (job.dispatch_latency_ms < 0) {
            problems.push_back(where + ": dispatch_latency_ms must be >= 0");
        }
        for (const auto& violation : validate_spec(job.spec)) {
            problems.push_back(where + ".spec: " + violation);
        }
        if (validate_schedule(job.spec.schedule).empty() &&
            slot_count(job.spec.schedule) > kMaxSlotsPerJob) {
            problems.push_back(where + ".spec.schedule: more than " +
                               std::to_string(kMaxSlotsPerJob) +
                               " slots is unsupported");
        }
    }
    Tokens supply = 0;
    for (const auto& [account, balance] : scenario.initial_balances) {
        if (balance < 0) {
            problems.push_back("initial_balances['" + account +
                               "'] must be >= 0");
        } else if (balance > std::numeric_limits<Tokens>::max() - supply) {
            problems.push_back("initial_balances sum exceeds the token range");
            break;
        } else {
            supply += balance;
        }
    }
    return problems;
}

namespace {

enum class EventKind { Register, MatchTick, SlotStart, SlotReport };

struct QueuedEvent {
    TimeMs time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::MatchTick;
    std::size_t job_index = 0;   // Register: scenario job index
    JobId job_id = 0;            // SlotStart / SlotReport
    ExecutionRecord record;      // SlotReport payload
};

struct EventAfter {
    bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

class Simulation {
public:
    explicit Simulation(const Scenario& scenario)
        : scenario_(scenario),
          rng_(scenario.seed),
          ledger_(scenario.initial_balances) {
        for (const auto& p : scenario_.processors) {
            profiles_by_id_.emplace(p.processor_id, &p);
        }
    }

    SimReport run() {
        for (std::size_t i = 0; i < scenario_.jobs.size(); ++i) {
            const auto& job = scenario_.jobs[i];
            QueuedEvent ev;
            ev.time = job.registration_time_ms + job.dispatch_latency_ms;
            ev.kind = EventKind::Register;
            ev.job_index = i;
            push(ev);
            ++pending_registrations_;
        }
        schedule_match_tick(0);

        while (!queue_.empty()) {
            QueuedEvent ev = queue_.top();
            queue_.pop();
            if (scenario_.max_time_ms > 0 && ev.time > scenario_.max_time_ms) {
                log(ev.time, "horizon_reached", 0, "", -1,
                    "remaining events dropped");
                break;
            }
            now_ = ev.time;
            switch (ev.kind) {
                case EventKind::Register: handle_register(ev); break;
                case EventKind::MatchTick: handle_match_tick(ev); break;
                case EventKind::SlotStart: handle_slot_start(ev); break;
                case EventKind::SlotReport: handle_slot_report(ev); break;
            }
        }
        return finalize();
    }

private:
    void push(QueuedEvent ev) {
        ev.seq = next_seq_++;
        queue_.push(std::move(ev));
    }

    void log(TimeMs time, std::string type, JobId job_id,
             std::string processor_id, std::int64_t slot, std::string detail) {
        SimEvent ev;
        ev.time_ms = time;
        ev.seq = log_seq_++;
        ev.type = std::move(type);
        ev.job_id = job_id;
        ev.processor_id = std::move(processor_id);
        ev.slot = slot;
        ev.detail = std::move(detail);
        event_log_.push_back(std::move(ev));
    }

    void audit_hook() {
        if (!scenario_.audit_every_event) return;
        if (auto violation = ledger_.audit()) {
            throw std::logic_error("ledger audit failed at t=" +
                                   std::to_string(now_) + ": " +
                                   violation->detail);
        }
    }

    void schedule_match_tick(TimeMs at) {
        if (tick_scheduled_) return;
        QueuedEvent ev;
        ev.time = at;
        ev.kind = EventKind::MatchTick;
        push(ev);
        tick_scheduled_ = true;
    }

    void handle_register(const QueuedEvent& ev) {
        --pending_registrations_;
        const auto& job = scenario_.jobs[ev.job_index];
        auto result = registry_.register_job(job.spec, ledger_);
        if (!result) {
            log(now_, "job_rejected", 0, "", -1,
                "jobs[" + std::to_string(ev.job_index) +
                    "]: " + to_string(result.error().code));
            return;
        }
        log(now_, "job_registered", result.value(), "", -1, "");
        audit_hook();
    }

    void handle_match_tick(const QueuedEvent&) {
        tick_scheduled_ = false;
        const auto open_jobs = registry_.jobs_in_state(JobState::Open);
        if (!open_jobs.empty() && !scenario_.processors.empty()) {
            std::vector<ProcessorSnapshot> snapshots;
            snapshots.reserve(scenario_.processors.size());
            for (const auto& profile : scenario_.processors) {
                ProcessorSnapshot snap;
                snap.profile = profile;
                snap.reputation = reputation_.score_of(profile.processor_id);
                snap.load = current_load(profile.processor_id);
                snapshots.push_back(std::move(snap));
            }
            const auto proposals = match(open_jobs, snapshots);
            for (const auto& proposal : proposals) {
                apply_proposal(proposal);
            }
        }
        // Keep ticking while anything can still change: future registrations,
        // in-flight executions next to re-matchable Open jobs, or a refusal
        // that gets a fresh draw next tick. An Open job with nothing else
        // pending can never match again (loads only drop when executions
        // finish), so the tick chain may stop.
        const bool open_left = !registry_.jobs_in_state(JobState::Open).empty();
        const bool retick_on_refusal = retriable_refusal_this_tick_ && open_left;
        retriable_refusal_this_tick_ = false;
        if ((!queue_.empty() && (open_left || pending_registrations_ > 0)) ||
            retick_on_refusal) {
            schedule_match_tick(now_ + scenario_.match_tick_ms);
        }
    }

    void apply_proposal(const MatchProposal& proposal) {
        const auto& processor_id = proposal.processor_id;
        auto proposed = registry_.propose(proposal.job_id, processor_id);
        if (!proposed) {
            throw std::logic_error("matching proposed an unmatchable job");
        }
        log(now_, "match_proposed", proposal.job_id, processor_id, -1, "");
        auto matched = registry_.acknowledge(proposal.job_id, processor_id);
        if (!matched) {
            throw std::logic_error("acknowledge failed for proposed job");
        }
        log(now_, "job_matched", proposal.job_id, processor_id, -1, "");

        const double refusal_p =
            profiles_by_id_.at(processor_id)->refusal_probability;
        const bool refused = refusal_p > 0.0 && rng_.bernoulli(refusal_p);
        auto confirmed =
            registry_.confirm_slots(proposal.job_id, processor_id, !refused);
        if (!confirmed) {
            throw std::logic_error("slot confirmation failed for matched job");
        }
        if (refused) {
            // a certain refuser never produces a fresh draw, so it alone
            // must not keep the tick chain alive
            if (refusal_p < 1.0) retriable_refusal_this_tick_ = true;
            log(now_, "slots_refused", proposal.job_id, processor_id, -1,
                "job re-opened");
            return;
        }
        log(now_, "job_assigned", proposal.job_id, processor_id, -1, "");
        ++active_jobs_[processor_id];
        schedule_executions(proposal.job_id, processor_id);
    }

    // Pre-samples the whole execution timeline of an assigned job. Slots of
    // one job never overlap: a slot waits for its predecessor and fails if
    // the wait pushes it past scheduled_start + max_start_delay. Together
    // with matching's load rule this bounds a processor's concurrent slots
    // by its capacity.
    void schedule_executions(JobId job_id, const std::string& processor_id) {
        const JobRecord* job = registry_.find(job_id);
        const ProcessorProfile& profile = *profiles_by_id_.at(processor_id);
        const auto times = slot_times(job->spec.schedule);
        const auto max_delay = job->spec.schedule.max_start_delay_ms;
        TimeMs prev_end = 0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const TimeMs scheduled = times[k];
            const auto delay = static_cast<TimeMs>(
                rng_.below(static_cast<std::uint64_t>(max_delay) + 1));
            const DurationMs duration = sample_exec_time(profile.exec_model, rng_);
            const bool succeeds = rng_.bernoulli(profile.reliability);

            ExecutionRecord record;
            record.slot_index = k;
            record.scheduled_start_ms = scheduled;
            const TimeMs earliest =
                std::max({scheduled + delay, prev_end, now_});
            if (earliest > scheduled + max_delay) {
                record.actual_start_ms = earliest;
                record.duration_ms = 0;
                record.success = false;
                record.failure_reason = "start window missed";
                QueuedEvent report;
                report.time = earliest;
                report.kind = EventKind::SlotReport;
                report.job_id = job_id;
                report.record = std::move(record);
                push(report);
                continue;
            }
            record.actual_start_ms = earliest;
            record.duration_ms = duration;
            if (succeeds) {
                record.success = true;
            } else {
                record.success = false;
                record.failure_reason = "execution error";
            }
            QueuedEvent start;
            start.time = earliest;
            start.kind = EventKind::SlotStart;
            start.job_id = job_id;
            start.record.slot_index = k;
            push(start);

            QueuedEvent report;
            report.time = earliest + duration;
            report.kind = EventKind::SlotReport;
            report.job_id = job_id;
            report.record = std::move(record);
            push(report);
            prev_end = earliest + duration;
        }
    }

    void handle_slot_start(const QueuedEvent& ev) {
        const JobRecord* job = registry_.find(ev.job_id);
        log(now_, "slot_started", ev.job_id, *job->matched_processor,
            static_cast<std::int64_t>(ev.record.slot_index), "");
    }

    void handle_slot_report(const QueuedEvent& ev) {
        const JobRecord* job = registry_.find(ev.job_id);
        const std::string processor_id = *job->matched_processor;
        const auto slots = static_cast<Tokens>(slot_count(job->spec.schedule));
        const Tokens base_share = job->spec.reward / slots;
        const Tokens remainder = job->spec.reward % slots;
        const Tokens payout_on_success =
            base_share +
            (static_cast<Tokens>(ev.record.slot_index) == slots - 1 ? remainder
                                                                    : 0) +
            job->spec.destination.gas_fee;
        auto result = registry_.report_fulfillment(
            ev.job_id, ev.record.slot_index, ev.record, ledger_, reputation_);
        if (!result) {
            throw std::logic_error("fulfillment report rejected: " +
                                   std::string(to_string(result.error().code)));
        }
        auto& outcome = processor_outcomes_[processor_id];
        ++outcome.fulfilled_slots;
        if (ev.record.success) {
            ++outcome.successes;
            outcome.earnings += payout_on_success;
            platform_samples_[profiles_by_id_.at(processor_id)->device_model]
                .push_back(ev.record.duration_ms);
        } else {
            ++outcome.failures;
        }
        log(now_, "slot_fulfilled", ev.job_id, processor_id,
            static_cast<std::int64_t>(ev.record.slot_index),
            ev.record.success ? "success" : ev.record.failure_reason);

        const JobState state = result.value();
        if (state == JobState::Completed || state == JobState::Failed) {
            log(now_, state == JobState::Completed ? "job_completed"
                                                   : "job_failed",
                ev.job_id, processor_id, -1, "");
            auto it = active_jobs_.find(processor_id);
            if (it != active_jobs_.end() && it->second > 0) --it->second;
        }
        audit_hook();
    }

    std::uint32_t current_load(const std::string& processor_id) const {
        auto it = active_jobs_.find(processor_id);
        return it == active_jobs_.end() ? 0 : it->second;
    }

    SimReport finalize() {
        SimReport report;
        report.seed = scenario_.seed;
        std::uint64_t reported = 0;
        std::uint64_t succeeded = 0;
        for (const auto& record : registry_.records()) {
            JobOutcome outcome;
            outcome.job_id = record.job_id;
            outcome.final_state = record.state;
            outcome.processor = record.matched_processor.value_or("");
            outcome.executions = record.executions;
            for (const auto& exec : record.executions) {
                ++reported;
                if (exec.success) ++succeeded;
            }
            report.jobs.push_back(std::move(outcome));
        }
        report.success_rate =
            reported == 0 ? 1.0
                          : static_cast<double>(succeeded) /
                                static_cast<double>(reported);
        for (const auto& profile : scenario_.processors) {
            ProcessorOutcome outcome;
            auto it = processor_outcomes_.find(profile.processor_id);
            if (it != processor_outcomes_.end()) outcome = it->second;
            outcome.processor_id = profile.processor_id;
            outcome.reputation = reputation_.score_of(profile.processor_id);
            report.processors.push_back(std::move(outcome));
        }
        report.platform_samples = platform_samples_;
        report.final_balances = ledger_.balances();
        report.event_log = std::move(event_log_);
        report.audit_ok = !ledger_.audit().has_value();
        return report;
    }

    const Scenario& scenario_;
    Rng rng_;
    Registry registry_;
    Ledger ledger_;
    ReputationBook reputation_;

    std::map<std::string, const ProcessorProfile*> profiles_by_id_;
    std::map<std::string, std::uint32_t> active_jobs_;
    std::map<std::string, ProcessorOutcome> processor_outcomes_;
    std::map<std::string, std::vector<DurationMs>> platform_samples_;
    std::vector<SimEvent> event_log_;

    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, EventAfter>
        queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t log_seq_ = 0;
    std::uint64_t pending_registrations_ = 0;
    TimeMs now_ = 0;
    bool tick_scheduled_ = false;
    bool retriable_refusal_this_tick_ = false;
};

}  // namespace

Result<SimReport, ScenarioError> run(const Scenario& scenario) {
    using R = Result<SimReport, ScenarioError>;
    auto problems = validate_scenario(scenario);
    if (!problems.empty()) {
        return R::fail(ScenarioError{std::move(problems)});
    }
    Simulation sim(scenario);
    return R::ok(sim.run());
}

}  // namespace depinsim
