#include "depinsim/io.hpp"

#include <fstream>
#include <sstream>

namespace depinsim {

namespace {

using json = nlohmann::json;

std::string line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return std::to_string(line);
}

// Field readers that fail with the JSON-pointer-ish path of the offender.
template <typename T>
Result<T, std::string> get_field(const json& obj, const std::string& path,
                                 const std::string& key) {
    using R = Result<T, std::string>;
    if (!obj.contains(key)) {
        return R::fail(path + "." + key + ": missing");
    }
    try {
        return R::ok(obj.at(key).get<T>());
    } catch (const json::exception&) {
        return R::fail(path + "." + key + ": wrong type");
    }
}

template <typename T>
Result<T, std::string> get_or(const json& obj, const std::string& path,
                              const std::string& key, T fallback) {
    using R = Result<T, std::string>;
    if (!obj.contains(key)) return R::ok(std::move(fallback));
    return get_field<T>(obj, path, key);
}

Result<ExecutionTimeModel, std::string> exec_model_from(const json& obj,
                                                        const std::string& path) {
    using R = Result<ExecutionTimeModel, std::string>;
    auto kind = get_field<std::string>(obj, path, "kind");
    if (!kind) return R::fail(kind.error());
    auto mean = get_field<double>(obj, path, "mean_ms");
    if (!mean) return R::fail(mean.error());
    if (kind.value() == "constant") {
        return R::ok(ExecutionTimeModel::constant(mean.value()));
    }
    if (kind.value() == "normal") {
        auto std_ms = get_field<double>(obj, path, "std_ms");
        if (!std_ms) return R::fail(std_ms.error());
        return R::ok(ExecutionTimeModel::normal(mean.value(), std_ms.value()));
    }
    return R::fail(path + ".kind: expected 'constant' or 'normal'");
}

Result<AssignmentMode, std::string> mode_from(const json& obj,
                                              const std::string& path) {
    using R = Result<AssignmentMode, std::string>;
    auto kind = get_field<std::string>(obj, path, "kind");
    if (!kind) return R::fail(kind.error());
    if (kind.value() == "personal") return R::ok(AssignmentMode::personal());
    if (kind.value() == "public") return R::ok(AssignmentMode::open_to_public());
    if (kind.value() == "selected") {
        auto ids = get_field<std::vector<std::string>>(obj, path, "processors");
        if (!ids) return R::fail(ids.error());
        return R::ok(AssignmentMode::selected_set(
            std::set<std::string>(ids.value().begin(), ids.value().end())));
    }
    return R::fail(path + ".kind: expected 'personal', 'selected' or 'public'");
}

Result<JobSpec, std::string> spec_from(const json& obj, const std::string& path) {
    using R = Result<JobSpec, std::string>;
    JobSpec spec;
    auto consumer = get_field<std::string>(obj, path, "consumer_id");
    if (!consumer) return R::fail(consumer.error());
    spec.consumer_id = consumer.value();

    if (obj.contains("workload")) {
        const auto wpath = path + ".workload";
        auto name = get_field<std::string>(obj.at("workload"), wpath, "name");
        if (!name) return R::fail(name.error());
        auto param =
            get_or<std::uint64_t>(obj.at("workload"), wpath, "param", 0);
        if (!param) return R::fail(param.error());
        spec.workload = {name.value(), param.value()};
    }

    if (!obj.contains("schedule")) return R::fail(path + ".schedule: missing");
    {
        const auto spath = path + ".schedule";
        const auto& sched = obj.at("schedule");
        auto start = get_field<TimeMs>(sched, spath, "start_ms");
        auto end = get_field<TimeMs>(sched, spath, "end_ms");
        auto interval = get_or<DurationMs>(sched, spath, "interval_ms", 1);
        auto duration = get_field<DurationMs>(sched, spath, "duration_ms");
        auto delay = get_or<DurationMs>(sched, spath, "max_start_delay_ms", 0);
        for (const auto* r : {&start, &end}) {
            if (!*r) return R::fail(r->error());
        }
        if (!interval) return R::fail(interval.error());
        if (!duration) return R::fail(duration.error());
        if (!delay) return R::fail(delay.error());
        spec.schedule = {start.value(), end.value(), interval.value(),
                         duration.value(), delay.value()};
    }

    if (obj.contains("resources")) {
        const auto rpath = path + ".resources";
        const auto& res = obj.at("resources");
        auto memory = get_or<std::uint64_t>(res, rpath, "memory_bytes", 0);
        auto network = get_or<std::uint64_t>(res, rpath, "network_requests", 0);
        auto storage = get_or<std::uint64_t>(res, rpath, "storage_bytes", 0);
        if (!memory) return R::fail(memory.error());
        if (!network) return R::fail(network.error());
        if (!storage) return R::fail(storage.error());
        spec.resources = {memory.value(), network.value(), storage.value()};
    }

    auto reward = get_or<Tokens>(obj, path, "reward", 0);
    if (!reward) return R::fail(reward.error());
    spec.reward = reward.value();
    auto gas = get_or<Tokens>(obj, path, "gas_budget", 0);
    if (!gas) return R::fail(gas.error());
    spec.gas_budget = gas.value();
    auto min_rep = get_or<double>(obj, path, "min_reputation", 0.0);
    if (!min_rep) return R::fail(min_rep.error());
    spec.min_reputation = min_rep.value();

    if (!obj.contains("mode")) return R::fail(path + ".mode: missing");
    auto mode = mode_from(obj.at("mode"), path + ".mode");
    if (!mode) return R::fail(mode.error());
    spec.mode = mode.value();

    if (obj.contains("destination")) {
        const auto dpath = path + ".destination";
        const auto& dest = obj.at("destination");
        auto sink = get_or<std::string>(dest, dpath, "sink_id", "");
        auto fee = get_or<Tokens>(dest, dpath, "gas_fee", 0);
        if (!sink) return R::fail(sink.error());
        if (!fee) return R::fail(fee.error());
        spec.destination = {sink.value(), fee.value()};
    }
    return R::ok(std::move(spec));
}

}  // namespace

Result<Scenario, std::string> scenario_from_json(const std::string& text) {
    using R = Result<Scenario, std::string>;
    json root = json::parse(text, nullptr, false, /*ignore_comments=*/true);
    if (root.is_discarded()) {
        // Re-parse with exceptions for the offset diagnostic.
        try {
            [[maybe_unused]] auto reparsed = json::parse(text, nullptr, true, true);
        } catch (const json::parse_error& e) {
            return R::fail("scenario parse error at line " +
                           line_of_offset(text, e.byte) + ": " + e.what());
        }
        return R::fail("scenario parse error");
    }
    if (!root.is_object()) return R::fail("scenario root must be an object");

    Scenario scenario;
    auto seed = get_or<std::uint64_t>(root, "scenario", "seed", 0);
    if (!seed) return R::fail(seed.error());
    scenario.seed = seed.value();
    auto tick = get_or<DurationMs>(root, "scenario", "match_tick_ms", 1000);
    if (!tick) return R::fail(tick.error());
    scenario.match_tick_ms = tick.value();
    auto horizon = get_or<TimeMs>(root, "scenario", "max_time_ms", 0);
    if (!horizon) return R::fail(horizon.error());
    scenario.max_time_ms = horizon.value();

    if (root.contains("initial_balances")) {
        if (!root.at("initial_balances").is_object()) {
            return R::fail("scenario.initial_balances: must be an object");
        }
        for (const auto& [account, amount] :
             root.at("initial_balances").items()) {
            if (!amount.is_number_integer()) {
                return R::fail("scenario.initial_balances['" + account +
                               "']: must be an integer");
            }
            scenario.initial_balances[account] = amount.get<Tokens>();
        }
    }

    if (root.contains("processors")) {
        if (!root.at("processors").is_array()) {
            return R::fail("scenario.processors: must be an array");
        }
        std::size_t index = 0;
        for (const auto& entry : root.at("processors")) {
            const std::string path =
                "processors[" + std::to_string(index++) + "]";
            ProcessorProfile profile;
            auto id = get_field<std::string>(entry, path, "processor_id");
            if (!id) return R::fail(id.error());
            profile.processor_id = id.value();
            auto owner = get_or<std::string>(entry, path, "owner_id", "");
            if (!owner) return R::fail(owner.error());
            profile.owner_id = owner.value();
            auto model = get_or<std::string>(entry, path, "device_model", "");
            if (!model) return R::fail(model.error());
            profile.device_model = model.value();
            auto android = get_or<int>(entry, path, "android_version", 0);
            if (!android) return R::fail(android.error());
            profile.android_version = android.value();
            auto country = get_or<std::string>(entry, path, "country", "");
            if (!country) return R::fail(country.error());
            profile.country = country.value();
            if (!entry.contains("exec_model")) {
                return R::fail(path + ".exec_model: missing");
            }
            auto exec = exec_model_from(entry.at("exec_model"),
                                        path + ".exec_model");
            if (!exec) return R::fail(exec.error());
            profile.exec_model = exec.value();
            auto power = get_or<double>(entry, path, "power_watts", 1.0);
            if (!power) return R::fail(power.error());
            profile.power_watts = power.value();
            auto floor = get_or<Tokens>(entry, path, "price_floor", 0);
            if (!floor) return R::fail(floor.error());
            profile.price_floor = floor.value();
            auto capacity = get_or<std::uint32_t>(entry, path, "capacity", 1);
            if (!capacity) return R::fail(capacity.error());
            profile.capacity = capacity.value();
            auto reliability = get_or<double>(entry, path, "reliability", 1.0);
            if (!reliability) return R::fail(reliability.error());
            profile.reliability = reliability.value();
            auto refusal =
                get_or<double>(entry, path, "refusal_probability", 0.0);
            if (!refusal) return R::fail(refusal.error());
            profile.refusal_probability = refusal.value();
            scenario.processors.push_back(std::move(profile));
        }
    }

    if (root.contains("jobs")) {
        if (!root.at("jobs").is_array()) {
            return R::fail("scenario.jobs: must be an array");
        }
        std::size_t index = 0;
        for (const auto& entry : root.at("jobs")) {
            const std::string path = "jobs[" + std::to_string(index++) + "]";
            auto reg_time =
                get_or<TimeMs>(entry, path, "registration_time_ms", 0);
            if (!reg_time) return R::fail(reg_time.error());
            auto latency =
                get_or<DurationMs>(entry, path, "dispatch_latency_ms", 0);
            if (!latency) return R::fail(latency.error());
            auto repeat = get_or<std::uint64_t>(entry, path, "repeat", 1);
            if (!repeat) return R::fail(repeat.error());
            if (repeat.value() < 1) {
                return R::fail(path + ".repeat: must be >= 1");
            }
            if (!entry.contains("spec")) return R::fail(path + ".spec: missing");
            auto spec = spec_from(entry.at("spec"), path + ".spec");
            if (!spec) return R::fail(spec.error());
            for (std::uint64_t i = 0; i < repeat.value(); ++i) {
                scenario.jobs.push_back(
                    {reg_time.value(), latency.value(), spec.value()});
            }
        }
    }
    return R::ok(std::move(scenario));
}

Result<Scenario, std::string> load_scenario(const std::filesystem::path& file) {
    auto text = read_text_file(file);
    if (!text) {
        return Result<Scenario, std::string>::fail(text.error());
    }
    return scenario_from_json(text.value());
}

nlohmann::ordered_json simreport_to_json(const SimReport& report) {
    nlohmann::ordered_json out;
    out["seed"] = report.seed;
    out["success_rate"] = report.success_rate;
    out["audit_ok"] = report.audit_ok;

    auto& jobs = out["jobs"] = nlohmann::ordered_json::array();
    for (const auto& job : report.jobs) {
        nlohmann::ordered_json j;
        j["job_id"] = job.job_id;
        j["final_state"] = to_string(job.final_state);
        j["processor"] = job.processor;
        auto& execs = j["executions"] = nlohmann::ordered_json::array();
        for (const auto& exec : job.executions) {
            nlohmann::ordered_json e;
            e["slot_index"] = exec.slot_index;
            e["scheduled_start_ms"] = exec.scheduled_start_ms;
            e["actual_start_ms"] = exec.actual_start_ms;
            e["duration_ms"] = exec.duration_ms;
            e["outcome"] = exec.success ? "success" : "failure";
            e["reason"] = exec.failure_reason;
            execs.push_back(std::move(e));
        }
        jobs.push_back(std::move(j));
    }

    auto& processors = out["processors"] = nlohmann::ordered_json::array();
    for (const auto& p : report.processors) {
        nlohmann::ordered_json e;
        e["processor_id"] = p.processor_id;
        e["fulfilled_slots"] = p.fulfilled_slots;
        e["successes"] = p.successes;
        e["failures"] = p.failures;
        e["earnings"] = p.earnings;
        e["reputation"] = p.reputation;
        processors.push_back(std::move(e));
    }

    out["platform_samples"] = report.platform_samples;
    out["final_balances"] = report.final_balances;

    auto& events = out["event_log"] = nlohmann::ordered_json::array();
    for (const auto& ev : report.event_log) {
        nlohmann::ordered_json e;
        e["time_ms"] = ev.time_ms;
        e["seq"] = ev.seq;
        e["type"] = ev.type;
        e["job_id"] = ev.job_id;
        e["processor_id"] = ev.processor_id;
        e["slot"] = ev.slot;
        e["detail"] = ev.detail;
        events.push_back(std::move(e));
    }
    return out;
}

std::string samples_csv(
    const std::map<std::string, std::vector<DurationMs>>& samples) {
    std::ostringstream out;
    out << "platform,iteration,duration_ms\n";
    for (const auto& [platform, values] : samples) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << platform << ',' << i << ',' << values[i] << '\n';
        }
    }
    return out.str();
}

std::string samples_csv(const SampleSet& set) {
    std::ostringstream out;
    out.precision(15);  // keep the raw samples re-analyzable
    out << "platform,iteration,duration_ms\n";
    for (std::size_t i = 0; i < set.samples_ms.size(); ++i) {
        out << set.platform << ',' << i << ',' << set.samples_ms[i] << '\n';
    }
    return out.str();
}

nlohmann::ordered_json stats_to_json(const PlatformStats& stats) {
    nlohmann::ordered_json out;
    out["platform"] = stats.platform;
    out["mean_ms"] = stats.mean_ms;
    out["std_ms"] = stats.std_ms;
    out["min_ms"] = stats.min_ms;
    out["max_ms"] = stats.max_ms;
    out["p50_ms"] = stats.p50_ms;
    out["p95_ms"] = stats.p95_ms;
    return out;
}

nlohmann::ordered_json compare_to_json(const CompareResult& result) {
    nlohmann::ordered_json out;
    auto& ranking = out["ranking"] = nlohmann::ordered_json::array();
    for (const auto& stats : result.ranking) {
        ranking.push_back(stats_to_json(stats));
    }
    out["delta_pct"] = result.delta_pct;
    return out;
}

nlohmann::ordered_json discovery_to_json(const DiscoveryRun& run) {
    nlohmann::ordered_json out;
    out["records"] = run.record_count;
    out["success_rate"] = run.success_rate;
    auto& rejected = out["rejected_lines"] = nlohmann::ordered_json::array();
    for (const auto& line : run.rejected) {
        rejected.push_back({{"line", line.line_no}, {"reason", line.reason}});
    }
    out["nodes_discovered"] = run.node_count;
    out["nodes_geolocated"] =
        run.nodes.nodes.size() - run.eliminated.size();
    auto& eliminated = out["nodes_eliminated"] = nlohmann::ordered_json::array();
    for (const auto& node : run.eliminated) {
        eliminated.push_back({{"prefix", node.prefix},
                              {"country", node.country},
                              {"organization", node.organization}});
    }
    out["unresolved_ips"] = run.nodes.unresolved_ips;
    out["countries"] = run.countries;
    out["distinct_devices"] = run.devices.distinct_devices;
    out["distinct_models"] = run.devices.distinct_models;
    out["devices_per_node"] = run.devices.devices_per_node;
    out["devices_by_vendor"] = run.devices.devices_by_vendor;
    out["models_by_vendor"] = run.devices.models_by_vendor;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [version, count] : run.devices.android_version_counts) {
        counts[std::to_string(version)] = count;
    }
    out["android_version_counts"] = std::move(counts);
    nlohmann::ordered_json shares = nlohmann::ordered_json::object();
    for (const auto& [version, share] : run.devices.android_version_shares) {
        shares[std::to_string(version)] = share;
    }
    out["android_version_shares_pct"] = std::move(shares);
    out["unparsed_user_agents"] = run.devices.unparsed_user_agents;
    return out;
}

void write_text_file(const std::filesystem::path& file,
                     const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + file.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + file.string());
    }
}

Result<std::string, std::string> read_text_file(
    const std::filesystem::path& file) {
    using R = Result<std::string, std::string>;
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return R::fail("cannot open: " + file.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return R::ok(buffer.str());
}

}  // namespace depinsim
