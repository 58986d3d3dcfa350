// depinsim command line: simulate | bench | discover | power.
// Exit codes: 0 success, 1 internal invariant violation, 2 usage or
// configuration error. Diagnostics go to stderr, data to files and stdout.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depinsim/bench.hpp"
#include "depinsim/discovery.hpp"
#include "depinsim/io.hpp"
#include "depinsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace depinsim;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// everything the four workflows read from the command line
struct RunConfig {
    std::string scenario_file;
    std::string log_file;
    std::string prefix_file;
    std::string vendor_file;
    std::vector<std::string> deny_orgs;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t workload_param = 50'000'000;
    std::uint32_t iterations = 10;
    std::uint32_t warmup = 3;
    std::string platform = "local";
    double watts = 0;
    double tdp = 0;
    std::uint32_t cores = 0;
    double duration_ms = 0;
};

std::string format_sig6(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create output directory " + dir.string() +
                         ": " + ec.message());
    }
}

// Wall-clock run metadata is kept out of the deterministic payloads.
void write_sidecar(const fs::path& out_dir, const std::string& command,
                   const std::vector<std::string>& inputs) {
    nlohmann::ordered_json meta;
    meta["command"] = command;
    meta["inputs"] = inputs;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    meta["wall_clock_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    write_text_file(out_dir / "meta.json", meta.dump(2) + "\n");
}

int cmd_simulate(const RunConfig& config) {
    auto scenario = load_scenario(config.scenario_file);
    if (!scenario) {
        std::cerr << "error: " << scenario.error() << "\n";
        return 2;
    }
    if (config.seed_set) {
        scenario.value().seed = config.seed;
    }
    auto report = run(scenario.value());
    if (!report) {
        for (const auto& problem : report.error().problems) {
            std::cerr << "error: scenario: " << problem << "\n";
        }
        return 2;
    }
    ensure_out_dir(config.out_dir);
    const fs::path out_dir(config.out_dir);
    write_text_file(out_dir / "report.json",
                    simreport_to_json(report.value()).dump(2) + "\n");
    write_text_file(out_dir / "samples.csv",
                    samples_csv(report.value().platform_samples));
    write_sidecar(out_dir, "simulate", {config.scenario_file});
    std::cerr << "simulate: " << report.value().jobs.size() << " jobs, seed "
              << report.value().seed << ", success_rate "
              << report.value().success_rate << "\n";
    if (!report.value().audit_ok) {
        std::cerr << "error: final ledger audit failed\n";
        return 1;
    }
    return 0;
}

int cmd_bench(const RunConfig& config) {
    if (config.iterations < 1) {
        throw UsageError("--iterations must be >= 1");
    }
    // The prime-count run doubles as the first warm-up.
    const auto primes = sieve_primes(config.workload_param);
    std::cerr << "bench: sieve(" << config.workload_param << ") -> "
              << primes.size() << " primes\n";
    const auto set =
        run_benchmark(config.workload_param, config.iterations,
                      config.warmup > 0 ? config.warmup - 1 : 0,
                      config.platform);
    auto result = stats(set);
    if (!result) {
        throw std::logic_error("stats failed on non-empty sample set");
    }
    ensure_out_dir(config.out_dir);
    const fs::path out_dir(config.out_dir);
    write_text_file(out_dir / "samples.csv", samples_csv(set));
    write_text_file(out_dir / "stats.json",
                    stats_to_json(result.value()).dump(2) + "\n");
    write_sidecar(out_dir, "bench", {});
    const auto& s = result.value();
    std::cout << "platform " << s.platform << "\n"
              << "samples " << set.samples_ms.size() << "\n"
              << "mean_ms " << format_sig6(s.mean_ms) << "\n"
              << "std_ms " << format_sig6(s.std_ms) << "\n"
              << "min_ms " << format_sig6(s.min_ms) << "\n"
              << "max_ms " << format_sig6(s.max_ms) << "\n"
              << "p50_ms " << format_sig6(s.p50_ms) << "\n"
              << "p95_ms " << format_sig6(s.p95_ms) << "\n";
    return 0;
}

int cmd_discover(const RunConfig& config) {
    std::ifstream log_in(config.log_file);
    if (!log_in) throw UsageError("cannot open log file: " + config.log_file);
    std::ifstream prefix_in(config.prefix_file);
    if (!prefix_in) {
        throw UsageError("cannot open prefix table: " + config.prefix_file);
    }
    std::ifstream vendor_in(config.vendor_file);
    if (!vendor_in) {
        throw UsageError("cannot open vendor map: " + config.vendor_file);
    }

    auto table = PrefixTable::load_csv(prefix_in);
    if (!table) throw UsageError(table.error());
    auto vendors = VendorMap::load_csv(vendor_in);
    if (!vendors) throw UsageError(vendors.error());

    DiscoveryRun run;
    auto parsed = parse_log(log_in);
    run.record_count = parsed.records.size();
    run.success_rate = success_rate(parsed.records);
    run.rejected = parsed.rejected;
    run.nodes = nodes_by_prefix(parsed.records, table.value());

    // The deny list models the manual elimination of VPN/cloud prefixes:
    // denied nodes stay discovered (they count toward the device ratio) but
    // are dropped from the geography histogram.
    const std::set<std::string> denied(config.deny_orgs.begin(),
                                       config.deny_orgs.end());
    std::vector<NodeInfo> kept;
    for (const auto& node : run.nodes.nodes) {
        if (denied.count(node.organization)) {
            run.eliminated.push_back(node);
        } else {
            kept.push_back(node);
        }
    }
    run.countries = country_histogram(kept);
    run.node_count = run.nodes.nodes.size() + run.nodes.unresolved_ips.size();
    run.devices = device_report(parsed.records, vendors.value(), run.node_count);

    ensure_out_dir(config.out_dir);
    const fs::path out_dir(config.out_dir);
    write_text_file(out_dir / "discovery.json",
                    discovery_to_json(run).dump(2) + "\n");
    write_sidecar(out_dir, "discover",
                  {config.log_file, config.prefix_file, config.vendor_file});
    std::cerr << "discover: " << run.record_count << " records, "
              << run.node_count << " nodes, " << run.devices.distinct_devices
              << " devices\n";
    return 0;
}

int cmd_power(const RunConfig& config) {
    double per_core = config.watts;
    if (config.watts <= 0) {
        if (config.tdp <= 0 || config.cores < 1) {
            throw UsageError(
                "provide --watts > 0, or --tdp > 0 with --cores >= 1");
        }
        per_core = per_core_watts(config.tdp, config.cores);
        std::cout << "per_core_watts " << format_sig6(per_core) << "\n";
    }
    if (config.duration_ms <= 0) {
        throw UsageError("--duration must be > 0");
    }
    const PowerModel model{"cli", per_core, config.duration_ms};
    const double wh = energy_wh(model);
    std::cout << "energy_wh " << format_sig6(wh) << "\n";
    std::cout << "executions_per_wh " << executions_per_wh(wh) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator and measurement toolkit for a "
                 "decentralized serverless compute network"};
    app.require_subcommand(1);
    RunConfig config;

    auto* simulate = app.add_subcommand(
        "simulate", "run a scenario and write report.json + samples.csv");
    simulate
        ->add_option("--scenario", config.scenario_file, "scenario JSON file")
        ->required();
    simulate->add_option("--seed", config.seed, "override the scenario seed")
        ->each([&config](const std::string&) { config.seed_set = true; });
    simulate->add_option("--out", config.out_dir, "output directory");

    auto* bench = app.add_subcommand(
        "bench", "time the prime-sieve workload, write samples.csv + stats.json");
    bench->add_option("--max", config.workload_param, "sieve upper bound");
    bench->add_option("--iterations", config.iterations, "timed runs");
    bench->add_option("--warmup", config.warmup, "discarded warm-up runs");
    bench->add_option("--platform", config.platform, "platform label for the CSV");
    bench->add_option("--out", config.out_dir, "output directory");

    auto* discover = app.add_subcommand(
        "discover", "replay node discovery from an access log");
    discover->add_option("--log", config.log_file, "JSONL access log")
        ->required();
    discover->add_option("--prefixes", config.prefix_file, "prefix table CSV")
        ->required();
    discover->add_option("--vendors", config.vendor_file, "model->vendor CSV")
        ->required();
    discover->add_option("--deny", config.deny_orgs,
                         "organizations to eliminate from geography");
    discover->add_option("--out", config.out_dir, "output directory");

    auto* power = app.add_subcommand(
        "power", "energy per run and executions per watt-hour");
    power->add_option("--watts", config.watts, "per-core power draw (W)");
    power->add_option("--tdp", config.tdp, "package power (W), split over --cores");
    power->add_option("--cores", config.cores, "core count for --tdp");
    power->add_option("--duration", config.duration_ms,
                      "average run duration (ms)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config);
        if (bench->parsed()) return cmd_bench(config);
        if (discover->parsed()) return cmd_discover(config);
        if (power->parsed()) return cmd_power(config);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
