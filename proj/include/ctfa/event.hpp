#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctfa/common.hpp"
#include "ctfa/time.hpp"

namespace ctfa {

// One attack record: who hit whom, on which service, with what payload.
// Histograms are sparse (only non-zero counts), time is UTC epoch seconds.
struct AttackEvent {
    std::int64_t time = 0;
    std::string from_team;
    std::string to_team;
    std::string svc;
    std::string payload_hash;
    std::map<std::uint8_t, std::uint64_t> byte_hist;
    std::map<std::string, std::uint64_t> inst_hist;

    friend bool operator==(const AttackEvent&, const AttackEvent&) = default;
};

// Total order used wherever event sequences must be canonical (temporal
// splits, generator output). Equal keys mean interchangeable events.
inline bool event_before(const AttackEvent& a, const AttackEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.from_team != b.from_team) return a.from_team < b.from_team;
    if (a.payload_hash != b.payload_hash) return a.payload_hash < b.payload_hash;
    if (a.to_team != b.to_team) return a.to_team < b.to_team;
    return a.svc < b.svc;
}

inline bool valid_payload_hash(std::string_view h) {
    if (h.size() != 32) return false;
    for (char c : h)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

struct EventParseError {
    enum class Kind { BadJson, MissingField, BadTimestamp, BadHash, BadHistogram, InvalidEvent };
    std::size_t line = 0;  // 1-based
    Kind kind = Kind::BadJson;
    std::string message;
};

struct EventReadResult {
    std::vector<AttackEvent> events;
    std::vector<EventParseError> rejected;
};

namespace detail {

inline bool parse_hist_key(const std::string& k, std::uint8_t& out) {
    if (k.size() != 4 || k[0] != '0' || k[1] != 'x') return false;
    auto hexval = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    int hi = hexval(k[2]), lo = hexval(k[3]);
    if (hi < 0 || lo < 0) return false;
    out = static_cast<std::uint8_t>(hi * 16 + lo);
    return true;
}

}  // namespace detail

// One line per record. Field order follows the dataset schema; byte_hist keys
// are "0x" + two lowercase hex digits, counts plain integers.
inline std::string event_to_json_line(const AttackEvent& e) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json bh(nlohmann::json::value_t::object);
    for (const auto& [b, n] : e.byte_hist) bh["0x" + hex_byte(b)] = n;
    nlohmann::ordered_json ih(nlohmann::json::value_t::object);
    for (const auto& [m, n] : e.inst_hist) ih[m] = n;
    j["byte_hist"] = std::move(bh);
    j["inst_hist"] = std::move(ih);
    j["from_team"] = e.from_team;
    j["to_team"] = e.to_team;
    j["svc"] = e.svc;
    j["payload_hash"] = e.payload_hash;
    j["time"] = format_iso8601(e.time);
    return j.dump();
}

inline void write_events(std::ostream& out, std::span<const AttackEvent> events) {
    for (const auto& e : events) out << event_to_json_line(e) << '\n';
}

// Malformed records are rejected individually with their line number; the
// rest of the stream is still read.
inline EventReadResult read_events(std::istream& in) {
    EventReadResult result;
    std::string line;
    std::size_t lineno = 0;
    using Kind = EventParseError::Kind;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.rejected.push_back({lineno, Kind::BadJson, "not a JSON object"});
            continue;
        }
        AttackEvent e;
        bool ok = true;
        auto reject = [&](Kind kind, const std::string& msg) {
            result.rejected.push_back({lineno, kind, msg});
            ok = false;
        };
        static const char* required[] = {"time",         "from_team", "to_team", "svc",
                                         "payload_hash", "byte_hist", "inst_hist"};
        for (const char* f : required) {
            if (!j.contains(f)) {
                reject(Kind::MissingField, std::string("missing field: ") + f);
                break;
            }
        }
        if (!ok) continue;
        if (!j["time"].is_string()) {
            reject(Kind::BadTimestamp, "time is not a string");
            continue;
        }
        auto t = parse_iso8601(j["time"].get<std::string>());
        if (!t) {
            reject(Kind::BadTimestamp, "time: " + j["time"].get<std::string>());
            continue;
        }
        e.time = *t;
        if (!j["payload_hash"].is_string() ||
            !valid_payload_hash(j["payload_hash"].get<std::string>())) {
            reject(Kind::BadHash, "payload_hash must be 32 lowercase hex chars");
            continue;
        }
        e.payload_hash = j["payload_hash"].get<std::string>();
        for (const char* f : {"from_team", "to_team", "svc"}) {
            if (!j[f].is_string()) {
                reject(Kind::MissingField, std::string(f) + " is not a string");
                break;
            }
        }
        if (!ok) continue;
        e.from_team = j["from_team"].get<std::string>();
        e.to_team = j["to_team"].get<std::string>();
        e.svc = j["svc"].get<std::string>();
        if (e.from_team == e.to_team) {
            reject(Kind::InvalidEvent, "from_team equals to_team");
            continue;
        }
        if (!j["byte_hist"].is_object() || !j["inst_hist"].is_object()) {
            reject(Kind::BadHistogram, "histograms must be objects");
            continue;
        }
        for (auto& [k, v] : j["byte_hist"].items()) {
            std::uint8_t b;
            if (!detail::parse_hist_key(k, b) || !v.is_number_integer() ||
                v.get<std::int64_t>() < 1) {
                reject(Kind::BadHistogram, "byte_hist entry " + k);
                break;
            }
            e.byte_hist[b] = v.get<std::uint64_t>();
        }
        if (!ok) continue;
        for (auto& [k, v] : j["inst_hist"].items()) {
            if (k.empty() || !v.is_number_integer() || v.get<std::int64_t>() < 1) {
                reject(Kind::BadHistogram, "inst_hist entry " + k);
                break;
            }
            e.inst_hist[k] = v.get<std::uint64_t>();
        }
        if (!ok) continue;
        result.events.push_back(std::move(e));
    }
    return result;
}

}  // namespace ctfa
