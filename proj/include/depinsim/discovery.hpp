#pragma once

// Offline node-discovery analytics: endpoint access-log ingestion, node
// deduplication by announced prefix (longest-prefix match over a static
// table), and device/user-agent histograms.

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depinsim/result.hpp"

namespace depinsim {

// IPv4 or IPv6 address; v4 occupies the first 4 bytes.
struct IpAddr {
    bool is_v6 = false;
    std::array<std::uint8_t, 16> bytes{};

    static std::optional<IpAddr> parse(const std::string& text);
    bool bit(int index) const;  // MSB-first within the address
    int bit_width() const { return is_v6 ? 128 : 32; }
    bool operator==(const IpAddr& other) const = default;
};

struct LogRecord {
    std::string timestamp;
    IpAddr ip;
    std::string ip_text;  // original spelling, used in reports
    std::string user_agent;
    int status = 0;
};

struct RejectedLine {
    std::size_t line_no = 0;  // 1-based
    std::string reason;
};

struct ParsedLog {
    std::vector<LogRecord> records;
    std::vector<RejectedLine> rejected;
};

// JSON Lines with keys timestamp, ip, user_agent, status. Malformed lines
// (bad JSON, missing keys, unparsable ip, status outside [100, 599]) land
// in `rejected` with their line number; the run never aborts.
ParsedLog parse_log(std::istream& in);

// Fraction of records with a 2xx status; 1.0 for an empty record list.
double success_rate(const std::vector<LogRecord>& records);

struct PrefixEntry {
    IpAddr network;
    int prefix_len = 0;
    std::string country;       // ISO 3166 alpha-3
    std::string organization;
    std::string text;          // original CIDR spelling
};

// Static replacement for live BGP lookups: CIDR prefixes with country and
// announcing organization, queried by longest-prefix match over a binary
// trie (one per address family).
class PrefixTable {
public:
    PrefixTable();
    PrefixTable(PrefixTable&&) noexcept;
    PrefixTable& operator=(PrefixTable&&) noexcept;
    ~PrefixTable();

    // CSV rows `prefix,country,organization`. Hard-fails with a line
    // diagnostic on any malformed row.
    static Result<PrefixTable, std::string> load_csv(std::istream& in);

    void add(PrefixEntry entry);
    const PrefixEntry* lookup(const IpAddr& ip) const;
    const std::vector<PrefixEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    struct TrieNode;
    void insert_into_trie(std::size_t entry_index);

    std::vector<PrefixEntry> entries_;
    std::unique_ptr<TrieNode> root_v4_;
    std::unique_ptr<TrieNode> root_v6_;
};

std::optional<std::pair<IpAddr, int>> parse_cidr(const std::string& text);

struct NodeInfo {
    std::string prefix;  // CIDR spelling of the announcing prefix
    std::string country;
    std::string organization;
};

struct NodeSet {
    std::vector<NodeInfo> nodes;                // one per distinct prefix
    std::vector<std::string> unresolved_ips;    // distinct IPs with no prefix
};

// Collapses the records' source addresses onto their longest-matching
// prefixes; each distinct prefix is one node. Addresses outside the table
// are listed as unresolved, one entry per distinct spelling.
NodeSet nodes_by_prefix(const std::vector<LogRecord>& records,
                        const PrefixTable& table);

// Nodes per country; the counts sum to nodes.size().
std::map<std::string, int> country_histogram(const std::vector<NodeInfo>& nodes);

struct DeviceInfo {
    std::string runtime;  // "Dalvik"
    int android_version = 0;
    std::string device_model;
};

struct UaParseFailure {
    std::size_t offset = 0;  // byte position where matching failed
    std::string reason;
};

// Grammar: Dalvik/<ver> (Linux; U; Android <N>; <model> Build/<id>)
Result<DeviceInfo, UaParseFailure> parse_user_agent(std::string_view ua);

// model-prefix -> vendor lookup (longest prefix wins, "Other" fallback),
// loaded from CSV rows `model_prefix,vendor`.
class VendorMap {
public:
    static Result<VendorMap, std::string> load_csv(std::istream& in);
    void add(std::string model_prefix, std::string vendor);
    std::string vendor_for(const std::string& model) const;

private:
    std::vector<std::pair<std::string, std::string>> prefixes_;
};

struct DeviceReport {
    std::uint64_t distinct_devices = 0;   // keyed by full user-agent identity
    std::uint64_t distinct_models = 0;    // keyed by parsed model token
    double devices_per_node = 0.0;
    std::map<std::string, int> devices_by_vendor;
    std::map<std::string, int> models_by_vendor;
    std::map<int, int> android_version_counts;   // devices per version
    std::map<int, int> android_version_shares;   // percent, half away from zero
    std::uint64_t unparsed_user_agents = 0;      // distinct unparsable UAs
};

// Device statistics over the records' user agents; node_count feeds the
// devices-per-node ratio.
DeviceReport device_report(const std::vector<LogRecord>& records,
                           const VendorMap& vendors, std::uint64_t node_count);

}  // namespace depinsim
