#pragma once

// File formats: JSON scenario configs (comments allowed), SimReport and
// statistics exports, and the sample CSVs. All writers are deterministic
// for fixed inputs; run metadata never enters these payloads.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "depinsim/bench.hpp"
#include "depinsim/discovery.hpp"
#include "depinsim/result.hpp"
#include "depinsim/simulator.hpp"

namespace depinsim {

// Parses a scenario config. Error strings carry the offending line or
// field path.
Result<Scenario, std::string> scenario_from_json(const std::string& text);
Result<Scenario, std::string> load_scenario(const std::filesystem::path& file);

nlohmann::ordered_json simreport_to_json(const SimReport& report);

// Header `platform,iteration,duration_ms`, one row per sample, LF endings.
std::string samples_csv(
    const std::map<std::string, std::vector<DurationMs>>& samples);
std::string samples_csv(const SampleSet& set);

nlohmann::ordered_json stats_to_json(const PlatformStats& stats);
nlohmann::ordered_json compare_to_json(const CompareResult& result);

struct DiscoveryRun {
    std::size_t record_count = 0;
    double success_rate = 1.0;
    std::vector<RejectedLine> rejected;
    NodeSet nodes;                        // everything the table resolved
    std::vector<NodeInfo> eliminated;     // deny-listed organizations
    std::map<std::string, int> countries; // histogram over kept nodes
    std::uint64_t node_count = 0;         // resolved + unresolved
    DeviceReport devices;
};

nlohmann::ordered_json discovery_to_json(const DiscoveryRun& run);

// Writes content atomically enough for tests: truncate + write + flush.
void write_text_file(const std::filesystem::path& file,
                     const std::string& content);

Result<std::string, std::string> read_text_file(
    const std::filesystem::path& file);

}  // namespace depinsim
