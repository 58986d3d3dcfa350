#include "depinsim/discovery.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include <json.hpp>

namespace depinsim {

std::optional<IpAddr> IpAddr::parse(const std::string& text) {
    IpAddr out;
    in_addr v4{};
    if (inet_pton(AF_INET, text.c_str(), &v4) == 1) {
        out.is_v6 = false;
        std::memcpy(out.bytes.data(), &v4, 4);
        return out;
    }
    in6_addr v6{};
    if (inet_pton(AF_INET6, text.c_str(), &v6) == 1) {
        out.is_v6 = true;
        std::memcpy(out.bytes.data(), &v6, 16);
        return out;
    }
    return std::nullopt;
}

bool IpAddr::bit(int index) const {
    return (bytes[static_cast<std::size_t>(index) / 8] >>
            (7 - (index % 8))) & 1;
}

ParsedLog parse_log(std::istream& in) {
    ParsedLog out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            out.rejected.push_back({line_no, "not a JSON object"});
            continue;
        }
        if (!obj.contains("timestamp") || !obj.contains("ip") ||
            !obj.contains("user_agent") || !obj.contains("status")) {
            out.rejected.push_back(
                {line_no, "missing key (timestamp/ip/user_agent/status)"});
            continue;
        }
        if (!obj["timestamp"].is_string() || !obj["ip"].is_string() ||
            !obj["user_agent"].is_string() ||
            !obj["status"].is_number_integer()) {
            out.rejected.push_back({line_no, "wrong field type"});
            continue;
        }
        const auto ip_text = obj["ip"].get<std::string>();
        auto ip = IpAddr::parse(ip_text);
        if (!ip) {
            out.rejected.push_back({line_no, "invalid ip: " + ip_text});
            continue;
        }
        const int status = obj["status"].get<int>();
        if (status < 100 || status > 599) {
            out.rejected.push_back(
                {line_no, "status out of range: " + std::to_string(status)});
            continue;
        }
        LogRecord record;
        record.timestamp = obj["timestamp"].get<std::string>();
        record.ip = *ip;
        record.ip_text = ip_text;
        record.user_agent = obj["user_agent"].get<std::string>();
        record.status = status;
        out.records.push_back(std::move(record));
    }
    return out;
}

double success_rate(const std::vector<LogRecord>& records) {
    if (records.empty()) return 1.0;
    std::size_t ok = 0;
    for (const auto& r : records) {
        if (r.status >= 200 && r.status < 300) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(records.size());
}

// --- prefix table ------------------------------------------------------

struct PrefixTable::TrieNode {
    std::unique_ptr<TrieNode> child[2];
    int entry_index = -1;  // terminal marker: index into entries_
};

PrefixTable::PrefixTable()
    : root_v4_(std::make_unique<TrieNode>()),
      root_v6_(std::make_unique<TrieNode>()) {}
PrefixTable::PrefixTable(PrefixTable&&) noexcept = default;
PrefixTable& PrefixTable::operator=(PrefixTable&&) noexcept = default;
PrefixTable::~PrefixTable() = default;

std::optional<std::pair<IpAddr, int>> parse_cidr(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return std::nullopt;
    const std::string addr_part = text.substr(0, slash);
    const std::string len_part = text.substr(slash + 1);
    auto addr = IpAddr::parse(addr_part);
    if (!addr) return std::nullopt;
    if (len_part.empty() || len_part.size() > 3 ||
        !std::all_of(len_part.begin(), len_part.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
        return std::nullopt;
    }
    const int len = std::stoi(len_part);
    if (len < 0 || len > addr->bit_width()) return std::nullopt;
    return std::make_pair(*addr, len);
}

void PrefixTable::add(PrefixEntry entry) {
    entries_.push_back(std::move(entry));
    insert_into_trie(entries_.size() - 1);
}

void PrefixTable::insert_into_trie(std::size_t entry_index) {
    const PrefixEntry& entry = entries_[entry_index];
    TrieNode* node = entry.network.is_v6 ? root_v6_.get() : root_v4_.get();
    for (int i = 0; i < entry.prefix_len; ++i) {
        const int b = entry.network.bit(i) ? 1 : 0;
        if (!node->child[b]) node->child[b] = std::make_unique<TrieNode>();
        node = node->child[b].get();
    }
    node->entry_index = static_cast<int>(entry_index);
}

const PrefixEntry* PrefixTable::lookup(const IpAddr& ip) const {
    const TrieNode* node = ip.is_v6 ? root_v6_.get() : root_v4_.get();
    const PrefixEntry* best =
        node->entry_index >= 0 ? &entries_[node->entry_index] : nullptr;
    for (int i = 0; i < ip.bit_width(); ++i) {
        const int b = ip.bit(i) ? 1 : 0;
        node = node->child[b].get();
        if (!node) break;
        if (node->entry_index >= 0) best = &entries_[node->entry_index];
    }
    return best;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string strip(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    auto end = s.find_last_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Result<PrefixTable, std::string> PrefixTable::load_csv(std::istream& in) {
    using R = Result<PrefixTable, std::string>;
    PrefixTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (line_no == 1 && trimmed == "prefix,country,organization") continue;
        auto fields = split_csv_row(trimmed);
        if (fields.size() != 3) {
            return R::fail("prefix table line " + std::to_string(line_no) +
                           ": expected 3 fields, got " +
                           std::to_string(fields.size()));
        }
        auto cidr = parse_cidr(strip(fields[0]));
        if (!cidr) {
            return R::fail("prefix table line " + std::to_string(line_no) +
                           ": invalid CIDR prefix '" + fields[0] + "'");
        }
        const std::string country = strip(fields[1]);
        if (country.size() != 3 ||
            !std::all_of(country.begin(), country.end(), [](unsigned char c) {
                return std::isupper(c);
            })) {
            return R::fail("prefix table line " + std::to_string(line_no) +
                           ": country must be ISO 3166 alpha-3, got '" +
                           country + "'");
        }
        PrefixEntry entry;
        entry.network = cidr->first;
        entry.prefix_len = cidr->second;
        entry.country = country;
        entry.organization = strip(fields[2]);
        entry.text = strip(fields[0]);
        table.add(std::move(entry));
    }
    return R::ok(std::move(table));
}

NodeSet nodes_by_prefix(const std::vector<LogRecord>& records,
                        const PrefixTable& table) {
    NodeSet out;
    std::set<std::string> seen_prefixes;
    std::set<std::string> seen_unresolved;
    for (const auto& record : records) {
        const PrefixEntry* entry = table.lookup(record.ip);
        if (!entry) {
            if (seen_unresolved.insert(record.ip_text).second) {
                out.unresolved_ips.push_back(record.ip_text);
            }
            continue;
        }
        if (seen_prefixes.insert(entry->text).second) {
            out.nodes.push_back({entry->text, entry->country, entry->organization});
        }
    }
    return out;
}

std::map<std::string, int> country_histogram(
    const std::vector<NodeInfo>& nodes) {
    std::map<std::string, int> hist;
    for (const auto& node : nodes) {
        ++hist[node.country];
    }
    return hist;
}

// --- user agents -------------------------------------------------------

namespace {

bool consume(std::string_view ua, std::size_t& pos, std::string_view literal) {
    if (ua.substr(pos, literal.size()) != literal) return false;
    pos += literal.size();
    return true;
}

}  // namespace

Result<DeviceInfo, UaParseFailure> parse_user_agent(std::string_view ua) {
    using R = Result<DeviceInfo, UaParseFailure>;
    std::size_t pos = 0;
    if (!consume(ua, pos, "Dalvik/")) {
        return R::fail({pos, "expected 'Dalvik/'"});
    }
    const std::size_t ver_start = pos;
    while (pos < ua.size() && ua[pos] != ' ') ++pos;
    if (pos == ver_start) {
        return R::fail({pos, "missing runtime version"});
    }
    if (!consume(ua, pos, " (Linux; U; Android ")) {
        return R::fail({pos, "expected ' (Linux; U; Android '"});
    }
    const std::size_t num_start = pos;
    while (pos < ua.size() && std::isdigit(static_cast<unsigned char>(ua[pos]))) {
        ++pos;
    }
    if (pos == num_start) {
        return R::fail({pos, "expected android version number"});
    }
    if (pos - num_start > 4) {
        return R::fail({num_start, "android version out of range"});
    }
    const int version =
        std::stoi(std::string(ua.substr(num_start, pos - num_start)));
    if (version < 1) {
        return R::fail({num_start, "android version must be >= 1"});
    }
    if (!consume(ua, pos, "; ")) {
        return R::fail({pos, "expected '; ' after android version"});
    }
    const std::size_t model_start = pos;
    const std::size_t build_pos = ua.find(" Build/", pos);
    if (build_pos == std::string_view::npos || build_pos == model_start) {
        return R::fail({pos, "expected '<model> Build/<id>'"});
    }
    std::string model(ua.substr(model_start, build_pos - model_start));
    pos = build_pos + std::strlen(" Build/");
    const std::size_t id_start = pos;
    while (pos < ua.size() && ua[pos] != ')') ++pos;
    if (pos == id_start) {
        return R::fail({pos, "missing build id"});
    }
    if (pos >= ua.size() || ua[pos] != ')') {
        return R::fail({pos, "expected ')'"});
    }
    ++pos;
    if (pos != ua.size()) {
        return R::fail({pos, "trailing characters after ')'"});
    }
    DeviceInfo info;
    info.runtime = "Dalvik";
    info.android_version = version;
    info.device_model = std::move(model);
    return R::ok(std::move(info));
}

// --- device report -----------------------------------------------------

Result<VendorMap, std::string> VendorMap::load_csv(std::istream& in) {
    using R = Result<VendorMap, std::string>;
    VendorMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (line_no == 1 && trimmed == "model_prefix,vendor") continue;
        auto fields = split_csv_row(trimmed);
        if (fields.size() != 2 || strip(fields[0]).empty() ||
            strip(fields[1]).empty()) {
            return R::fail("vendor map line " + std::to_string(line_no) +
                           ": expected 'model_prefix,vendor'");
        }
        map.add(strip(fields[0]), strip(fields[1]));
    }
    return R::ok(std::move(map));
}

void VendorMap::add(std::string model_prefix, std::string vendor) {
    prefixes_.emplace_back(std::move(model_prefix), std::move(vendor));
}

std::string VendorMap::vendor_for(const std::string& model) const {
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, vendor] : prefixes_) {
        if (model.rfind(prefix, 0) == 0 && (!best || prefix.size() > best_len)) {
            best = &vendor;
            best_len = prefix.size();
        }
    }
    return best ? *best : "Other";
}

DeviceReport device_report(const std::vector<LogRecord>& records,
                           const VendorMap& vendors,
                           std::uint64_t node_count) {
    DeviceReport report;
    // device identity = full user-agent string; model identity = model token
    std::map<std::string, DeviceInfo> devices;
    std::set<std::string> unparsed;
    for (const auto& record : records) {
        if (devices.count(record.user_agent)) continue;
        auto parsed = parse_user_agent(record.user_agent);
        if (!parsed) {
            unparsed.insert(record.user_agent);
            continue;
        }
        devices.emplace(record.user_agent, std::move(parsed.value()));
    }
    report.distinct_devices = devices.size();
    report.unparsed_user_agents = unparsed.size();

    std::set<std::string> models;
    std::map<std::string, std::set<std::string>> vendor_models;
    for (const auto& [ua, info] : devices) {
        ++report.android_version_counts[info.android_version];
        const std::string vendor = vendors.vendor_for(info.device_model);
        ++report.devices_by_vendor[vendor];
        models.insert(info.device_model);
        vendor_models[vendor].insert(info.device_model);
    }
    report.distinct_models = models.size();
    for (const auto& [vendor, model_set] : vendor_models) {
        report.models_by_vendor[vendor] = static_cast<int>(model_set.size());
    }
    for (const auto& [version, count] : report.android_version_counts) {
        const double pct = static_cast<double>(count) /
                           static_cast<double>(report.distinct_devices) * 100.0;
        report.android_version_shares[version] =
            static_cast<int>(std::llround(pct));
    }
    report.devices_per_node =
        node_count == 0 ? 0.0
                        : static_cast<double>(report.distinct_devices) /
                              static_cast<double>(node_count);
    return report;
}

}  // namespace depinsim
