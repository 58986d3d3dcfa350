// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Runs offline against the in-repo fixtures and the CLI
// binary produced by this build.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "depinsim/bench.hpp"
#include "depinsim/discovery.hpp"
#include "depinsim/io.hpp"
#include "depinsim/matching.hpp"
#include "depinsim/registry.hpp"
#include "depinsim/rng.hpp"
#include "depinsim/simulator.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace depinsim;

namespace {

const std::string kFixtures = DEPINSIM_FIXTURE_DIR;
const std::string kCli = DEPINSIM_CLI_BIN;

struct Check {
    bool ok = true;
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            failures.push_back(what);
        }
    }
};

// ---- criterion 1: sieve fidelity ---------------------------------------

void criterion_sieve(Check& check) {
    const auto primes = sieve_primes(1'000'000);
    const auto trial_count = oracles::count_primes_trial(1'000'000);
    check.expect(primes.size() == 78498,
                 "sieve(1e6) returned " + std::to_string(primes.size()) +
                     " primes, expected 78498");
    check.expect(primes.size() == trial_count,
                 "sieve(1e6) disagrees with trial division (" +
                     std::to_string(trial_count) + ")");

    const auto all = oracles::primes_trial(10000);
    for (std::uint64_t max = 0; max <= 10000; ++max) {
        const auto got = sieve_primes(max);
        const auto prefix_len = static_cast<std::size_t>(
            std::upper_bound(all.begin(), all.end(), max) - all.begin());
        if (got.size() != prefix_len ||
            !std::equal(got.begin(), got.end(), all.begin())) {
            check.expect(false, "sieve(" + std::to_string(max) +
                                    ") disagrees with trial division");
            return;
        }
    }
}

// ---- criterion 2: power arithmetic -------------------------------------

void criterion_power(Check& check) {
    check.expect(per_core_watts(180, 32) == 5.625,
                 "per_core_watts(180, 32) != 5.625 exactly");
    const double wh = energy_wh(5.625, 2092);
    check.expect(std::abs(wh - 3.268750e-3) <= 1e-9,
                 "energy_wh(5.625, 2092) off by more than 1e-9");
    const auto local = executions_per_wh(3.268750e-3);
    check.expect(local >= 305 && local <= 307,
                 "executions_per_wh(3.26875e-3) = " + std::to_string(local) +
                     ", expected 306 +/- 1");
    const auto depin = executions_per_wh(2.275833e-4);
    check.expect(depin >= 4393 && depin <= 4395,
                 "executions_per_wh(2.275833e-4) = " + std::to_string(depin) +
                     ", expected 4394 +/- 1");
}

// ---- criterion 3: benchmark moment regeneration ------------------------

void criterion_moments(Check& check) {
    auto scenario = load_scenario(kFixtures + "/scenario_platforms.json");
    if (!scenario) {
        check.expect(false, "platform scenario failed to load: " + scenario.error());
        return;
    }
    auto report = run(scenario.value());
    if (!report) {
        check.expect(false, "platform scenario failed to run");
        return;
    }
    const std::map<std::string, double> configured = {{"Acurast", 2790},
                                                      {"AWS", 3683},
                                                      {"GoogleCloud", 5565},
                                                      {"Azure", 6102}};
    std::vector<PlatformStats> all_stats;
    for (const auto& [platform, mean] : configured) {
        auto it = report.value().platform_samples.find(platform);
        if (it == report.value().platform_samples.end()) {
            check.expect(false, "no samples for " + platform);
            continue;
        }
        SampleSet set;
        set.platform = platform;
        for (auto ms : it->second) {
            set.samples_ms.push_back(static_cast<double>(ms));
        }
        check.expect(set.samples_ms.size() >= 1000,
                     platform + " produced fewer than 1000 samples");
        auto s = stats(set);
        if (!s) {
            check.expect(false, platform + " stats failed");
            continue;
        }
        check.expect(std::abs(s.value().mean_ms - mean) / mean <= 0.02,
                     platform + " sample mean " +
                         std::to_string(s.value().mean_ms) +
                         " deviates more than 2% from " + std::to_string(mean));
        all_stats.push_back(s.value());
    }
    auto ranked = compare(all_stats);
    if (!ranked) {
        check.expect(false, "compare() failed");
        return;
    }
    const std::vector<std::string> expected_order = {"Acurast", "AWS",
                                                     "GoogleCloud", "Azure"};
    for (std::size_t i = 0; i < expected_order.size(); ++i) {
        check.expect(ranked.value().ranking[i].platform == expected_order[i],
                     "ranking[" + std::to_string(i) + "] is " +
                         ranked.value().ranking[i].platform + ", expected " +
                         expected_order[i]);
    }
}

// ---- criterion 4: discovery replay -------------------------------------

void criterion_discovery(Check& check) {
    std::ifstream log_in(kFixtures + "/discovery_log.jsonl");
    std::ifstream prefix_in(kFixtures + "/prefix_table.csv");
    std::ifstream vendor_in(kFixtures + "/vendor_map.csv");
    if (!log_in || !prefix_in || !vendor_in) {
        check.expect(false, "fixture files missing");
        return;
    }
    const auto parsed = parse_log(log_in);
    check.expect(parsed.records.size() == 121,
                 "expected 121 records, got " +
                     std::to_string(parsed.records.size()));
    check.expect(parsed.rejected.empty(), "fixture log has rejected lines");
    check.expect(success_rate(parsed.records) == 1.0,
                 "success rate is not 100%");

    auto table = PrefixTable::load_csv(prefix_in);
    auto vendors = VendorMap::load_csv(vendor_in);
    if (!table || !vendors) {
        check.expect(false, "fixture tables failed to parse");
        return;
    }
    const auto nodes = nodes_by_prefix(parsed.records, table.value());
    std::vector<NodeInfo> kept;
    for (const auto& node : nodes.nodes) {
        if (node.organization != "AnonVPN Networks") kept.push_back(node);
    }
    const auto hist = country_histogram(kept);
    const std::map<std::string, int> expected = {
        {"CHE", 5}, {"GBR", 5}, {"THA", 3}, {"USA", 3}, {"FRA", 2},
        {"NLD", 2}, {"KOR", 2}, {"CZE", 1}, {"DEU", 1}, {"IND", 1},
        {"ITA", 1}, {"MLT", 1}, {"POL", 1}};
    check.expect(hist == expected,
                 "country histogram deviates from the published counts");

    const auto node_count = nodes.nodes.size() + nodes.unresolved_ips.size();
    const auto report =
        device_report(parsed.records, vendors.value(), node_count);
    check.expect(report.distinct_devices == 62,
                 "expected 62 distinct devices, got " +
                     std::to_string(report.distinct_devices));
    check.expect(std::abs(report.devices_per_node - 2.07) <= 0.01,
                 "devices per node " +
                     std::to_string(report.devices_per_node) +
                     " outside 2.07 +/- 0.01");
    const std::map<int, int> published = {{11, 16}, {12, 20}, {13, 44}, {14, 19}};
    for (const auto& [version, share] : published) {
        auto it = report.android_version_shares.find(version);
        const int got = it == report.android_version_shares.end() ? -100
                                                                  : it->second;
        check.expect(std::abs(got - share) <= 1,
                     "Android " + std::to_string(version) + " share " +
                         std::to_string(got) + "% not within 1pp of " +
                         std::to_string(share) + "%");
    }
}

// ---- criterion 5: ledger conservation ----------------------------------

Scenario random_scenario(Rng& rng, bool perfect) {
    Scenario scenario;
    scenario.seed = rng.next_u64();
    scenario.audit_every_event = true;
    scenario.initial_balances = {{"alice", 100000}, {"bob", 50000}};
    const auto n_procs = 1 + rng.below(4);
    for (std::uint64_t i = 0; i < n_procs; ++i) {
        ProcessorProfile p;
        p.processor_id = "p" + std::to_string(i);
        // in perfect runs p0 belongs to alice so Personal jobs can match
        p.owner_id = (perfect && i == 0) || rng.bernoulli(0.5) ? "alice"
                                                               : "operator";
        p.device_model = "Model-" + std::to_string(rng.below(3));
        p.exec_model = ExecutionTimeModel::constant(
            50 + static_cast<double>(rng.below(400)));
        p.power_watts = 0.3;
        p.price_floor = static_cast<Tokens>(rng.below(3));
        p.capacity = perfect ? 64 : 1 + static_cast<std::uint32_t>(rng.below(4));
        p.reliability =
            perfect ? 1.0 : 0.5 + static_cast<double>(rng.below(51)) / 100.0;
        scenario.processors.push_back(std::move(p));
    }
    const auto n_jobs = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < n_jobs; ++i) {
        ScenarioJob job;
        job.registration_time_ms = static_cast<TimeMs>(rng.below(2000));
        job.spec.consumer_id =
            (perfect || rng.bernoulli(0.7)) ? "alice" : "bob";
        const auto slots = 1 + rng.below(4);
        const DurationMs interval = 3000 + static_cast<DurationMs>(rng.below(3000));
        job.spec.schedule = {5000,
                             5000 + static_cast<TimeMs>(slots - 1) * interval + 1500,
                             interval, 1500,
                             static_cast<DurationMs>(rng.below(800))};
        // in perfect runs the reward clears every possible floor * slots ask
        job.spec.reward = (perfect ? 8 : 0) + static_cast<Tokens>(rng.below(40));
        job.spec.destination = {"sink", static_cast<Tokens>(rng.below(4))};
        job.spec.gas_budget =
            static_cast<Tokens>(slots) * job.spec.destination.gas_fee +
            static_cast<Tokens>(rng.below(5));
        switch (rng.below(3)) {
            case 0: job.spec.mode = AssignmentMode::personal(); break;
            case 1:
                job.spec.mode = AssignmentMode::selected_set(
                    {"p" + std::to_string(rng.below(n_procs))});
                break;
            default: job.spec.mode = AssignmentMode::open_to_public(); break;
        }
        job.spec.min_reputation =
            static_cast<double>(rng.below(perfect ? 1 : 60)) / 100.0;
        scenario.jobs.push_back(std::move(job));
    }
    return scenario;
}

void criterion_conservation(Check& check) {
    Rng rng(0x1ed6e2);
    const std::vector<std::string> accounts = {"c1", "c2", "p1", "p2"};
    // 800 raw operation sequences over the ledger surface
    for (int seq = 0; seq < 800; ++seq) {
        Ledger ledger({{"c1", 2000}, {"c2", 700}});
        std::vector<JobId> live;
        JobId next = 1;
        const auto ops = 5 + rng.below(50);
        for (std::uint64_t i = 0; i < ops; ++i) {
            switch (rng.below(3)) {
                case 0: {
                    const JobId id = next++;
                    if (!ledger.lock(accounts[rng.below(2)], id,
                                     static_cast<Tokens>(rng.below(400)),
                                     static_cast<Tokens>(rng.below(60)))) {
                        live.push_back(id);
                    }
                    break;
                }
                case 1:
                    if (!live.empty()) {
                        (void)ledger.pay_slot(live[rng.below(live.size())],
                                              accounts[2 + rng.below(2)],
                                              static_cast<Tokens>(rng.below(150)),
                                              static_cast<Tokens>(rng.below(20)));
                    }
                    break;
                default:
                    if (!live.empty()) {
                        const auto at = rng.below(live.size());
                        (void)ledger.refund(live[at], accounts[rng.below(2)]);
                        live.erase(live.begin() +
                                   static_cast<std::ptrdiff_t>(at));
                    }
                    break;
            }
            if (ledger.audit()) {
                check.expect(false, "audit violation in raw sequence " +
                                        std::to_string(seq));
                return;
            }
            for (const auto& [account, amount] : ledger.balances()) {
                if (amount < 0) {
                    check.expect(false, "negative balance in sequence " +
                                            std::to_string(seq));
                    return;
                }
            }
        }
    }
    // 200 full simulator runs audited after every mutation
    for (int i = 0; i < 200; ++i) {
        auto scenario = random_scenario(rng, /*perfect=*/false);
        auto report = run(scenario);
        if (!report) {
            check.expect(false, "random scenario failed validation");
            return;
        }
        if (!report.value().audit_ok) {
            check.expect(false, "simulator run " + std::to_string(i) +
                                    " ended with a failing audit");
            return;
        }
    }
}

// ---- criterion 6: state-machine legality -------------------------------

void criterion_state_machine(Check& check) {
    Registry registry;
    Ledger ledger({{"alice", 100000000}, {"bob", 100000000}});
    ReputationBook reputation;
    Rng rng(0xf022);

    struct Shadow {
        JobState state = JobState::Open;
        std::optional<std::string> matched;
        std::set<std::uint64_t> reported;
        std::uint64_t slots = 0;
    };
    std::map<JobId, Shadow> shadows;
    const std::vector<std::string> processors = {"p0", "p1", "p2"};
    std::uint64_t mutations = 0;

    auto spec_for = [&](bool valid) {
        JobSpec spec;
        spec.consumer_id = rng.bernoulli(0.5) ? "alice" : "bob";
        const auto slots = 1 + rng.below(4);
        spec.schedule = {0, static_cast<TimeMs>(slots) * 1000, 1000, 500,
                         static_cast<DurationMs>(rng.below(500))};
        if (!valid) spec.schedule.end_ms = spec.schedule.start_ms;
        spec.reward = static_cast<Tokens>(rng.below(50));
        spec.destination = {"sink", static_cast<Tokens>(rng.below(3))};
        spec.gas_budget = static_cast<Tokens>(slots) * spec.destination.gas_fee;
        spec.mode = AssignmentMode::open_to_public();
        return spec;
    };

    const std::uint64_t target_ops = 120000;
    for (std::uint64_t op = 0; op < target_ops; ++op) {
        const auto kind = rng.below(6);
        const JobId job_id =
            registry.job_count() == 0
                ? 1
                : 1 + rng.below(registry.job_count() + 1);  // may be unknown
        const auto& processor = processors[rng.below(processors.size())];
        const JobState before =
            registry.find(job_id) ? registry.find(job_id)->state
                                  : JobState::Open;

        switch (kind) {
            case 0: {
                auto r = registry.register_job(spec_for(rng.bernoulli(0.9)),
                                               ledger);
                if (r) {
                    ++mutations;
                    Shadow shadow;
                    shadow.slots = slot_count(
                        registry.find(r.value())->spec.schedule);
                    shadows[r.value()] = shadow;
                    if (registry.find(r.value())->state != JobState::Open) {
                        check.expect(false, "fresh job not Open");
                        return;
                    }
                }
                break;
            }
            case 1:
                (void)registry.propose(job_id, processor);
                break;
            case 2: {
                auto r = registry.acknowledge(job_id, processor);
                if (r) {
                    ++mutations;
                    auto& shadow = shadows[job_id];
                    if (shadow.state != JobState::Open) {
                        check.expect(false, "acknowledge succeeded outside Open");
                        return;
                    }
                    if (shadow.matched) {
                        check.expect(false, "second processor acquired a match");
                        return;
                    }
                    shadow.state = JobState::Matched;
                    shadow.matched = processor;
                }
                break;
            }
            case 3: {
                const bool accept = rng.bernoulli(0.8);
                auto r = registry.confirm_slots(job_id, processor, accept);
                if (r) {
                    ++mutations;
                    auto& shadow = shadows[job_id];
                    if (shadow.state != JobState::Matched ||
                        shadow.matched != processor) {
                        check.expect(false, "confirm succeeded illegally");
                        return;
                    }
                    shadow.state = accept ? JobState::Assigned : JobState::Open;
                    if (!accept) shadow.matched.reset();
                }
                break;
            }
            case 4: {
                const JobRecord* record = registry.find(job_id);
                const std::uint64_t slots =
                    record ? slot_count(record->spec.schedule) : 1;
                const auto slot = rng.below(slots + 1);  // may be out of range
                ExecutionRecord exec;
                exec.slot_index = slot;
                exec.scheduled_start_ms = 0;
                exec.actual_start_ms = 0;
                exec.duration_ms = 1;
                exec.success = rng.bernoulli(0.8);
                if (!exec.success) exec.failure_reason = "execution error";
                auto r = registry.report_fulfillment(job_id, slot, exec, ledger,
                                                     reputation);
                if (r) {
                    ++mutations;
                    auto& shadow = shadows[job_id];
                    if (shadow.state != JobState::Assigned) {
                        check.expect(false, "report accepted outside Assigned");
                        return;
                    }
                    if (shadow.reported.count(slot)) {
                        check.expect(false, "duplicate slot report accepted");
                        return;
                    }
                    if (slot >= shadow.slots) {
                        check.expect(false, "out-of-range slot accepted");
                        return;
                    }
                    shadow.reported.insert(slot);
                    shadow.state = r.value();
                    if (shadow.reported.size() == shadow.slots &&
                        shadow.state != JobState::Completed &&
                        shadow.state != JobState::Failed) {
                        check.expect(false, "fully reported job not terminal");
                        return;
                    }
                }
                break;
            }
            default:
                (void)registry.job_state(job_id);
                break;
        }

        // every observable move must be a legal transition (or identity)
        const JobState after =
            registry.find(job_id) ? registry.find(job_id)->state : before;
        if (after != before && !is_legal_transition(before, after)) {
            check.expect(false, std::string("illegal transition ") +
                                    to_string(before) + " -> " +
                                    to_string(after));
            return;
        }
        if (ledger.audit()) {
            check.expect(false, "ledger audit failed during fuzzing");
            return;
        }
    }
    check.expect(mutations > 10000, "fuzzer exercised too few mutations (" +
                                        std::to_string(mutations) + ")");

    // perfect reliability + ample capacity: every job must complete
    Rng scenario_rng(0xace5);
    for (int i = 0; i < 20; ++i) {
        auto scenario = random_scenario(scenario_rng, /*perfect=*/true);
        auto report = run(scenario);
        if (!report) {
            check.expect(false, "perfect scenario failed validation");
            return;
        }
        for (const auto& job : report.value().jobs) {
            if (job.final_state != JobState::Completed) {
                check.expect(false,
                             "job " + std::to_string(job.job_id) +
                                 " ended " + to_string(job.final_state) +
                                 " despite full reliability");
                return;
            }
        }
    }
}

// ---- criterion 7: determinism ------------------------------------------

void criterion_determinism(Check& check) {
    const auto base = fs::temp_directory_path() / "depinsim_acceptance";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");
    const std::string scenario = kFixtures + "/scenario_replay.json";
    for (const char* sub : {"a", "b"}) {
        const std::string command = kCli + " simulate --scenario " + scenario +
                                    " --out " + (base / sub).string() +
                                    " >/dev/null 2>&1";
        if (WEXITSTATUS(std::system(command.c_str())) != 0) {
            check.expect(false, "simulate run failed");
            return;
        }
    }
    for (const char* file : {"report.json", "samples.csv"}) {
        auto a = read_text_file(base / "a" / file);
        auto b = read_text_file(base / "b" / file);
        if (!a || !b) {
            check.expect(false, std::string(file) + " missing");
            continue;
        }
        check.expect(a.value() == b.value(),
                     std::string(file) + " differs between identical runs");
        check.expect(!a.value().empty(), std::string(file) + " is empty");
    }
}

// ---- criterion 8: reputation properties --------------------------------

void criterion_reputation(Check& check) {
    check.expect(score(initial_reputation()) == 0.5,
                 "score(initial) != 0.5 exactly");
    Rng rng(0x5c02e);
    for (int i = 0; i < 10000; ++i) {
        ReputationRecord rec{rng.below(1000000), rng.below(1000000)};
        if (score(update(rec, true)) < score(rec) ||
            score(update(rec, false)) > score(rec)) {
            check.expect(false, "monotonicity violated at (" +
                                    std::to_string(rec.successes) + ", " +
                                    std::to_string(rec.failures) + ")");
            return;
        }
    }
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<bool> outcomes;
        const auto n = 1 + rng.below(60);
        for (std::uint64_t i = 0; i < n; ++i) {
            outcomes.push_back(rng.bernoulli(0.5));
        }
        auto permuted = outcomes;
        for (std::size_t i = permuted.size(); i > 1; --i) {
            std::swap(permuted[i - 1], permuted[rng.below(i)]);
        }
        ReputationRecord a = initial_reputation();
        ReputationRecord b = initial_reputation();
        for (bool ok : outcomes) a = update(a, ok);
        for (bool ok : permuted) b = update(b, ok);
        if (score(a) != score(b) || a.successes != b.successes) {
            check.expect(false, "outcome order changed the record");
            return;
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        std::string name;
        long budget_ms;
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "sieve fidelity vs trial division", 10000, criterion_sieve},
        {2, "power-efficiency arithmetic", 1000, criterion_power},
        {3, "benchmark moment regeneration and ranking", 30000,
         criterion_moments},
        {4, "node-discovery fixture replay", 5000, criterion_discovery},
        {5, "ledger conservation under randomized operations", 30000,
         criterion_conservation},
        {6, "lifecycle legality under fuzzing", 60000,
         criterion_state_machine},
        {7, "byte-identical replay at fixed seed", 10000,
         criterion_determinism},
        {8, "reputation score properties", 5000, criterion_reputation},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
        check.expect(elapsed < criterion.budget_ms,
                     "exceeded the " + std::to_string(criterion.budget_ms) +
                         " ms budget");
        std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion "
                  << criterion.number << ": " << criterion.name << " ("
                  << elapsed << " / " << criterion.budget_ms << " ms)\n";
        for (const auto& failure : check.failures) {
            std::cout << "       - " << failure << "\n";
        }
        if (!check.ok) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all " << criteria.size() << " criteria passed\n";
    return 0;
}
