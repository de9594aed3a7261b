#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ctfa/event.hpp"

namespace ctfa {

// Role of an event within its (to_team, payload_hash) group:
//   Original              earliest use of the payload against the target
//   NonDeceptiveDuplicate later use by the initiating team
//   DeceptiveFirst        first use by a team that did not initiate
//   DeceptiveDuplicate    later use by a non-initiating team
enum class Role : std::uint8_t {
    Original,
    NonDeceptiveDuplicate,
    DeceptiveFirst,
    DeceptiveDuplicate,
};

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Original: return "Original";
        case Role::NonDeceptiveDuplicate: return "NonDeceptiveDuplicate";
        case Role::DeceptiveFirst: return "DeceptiveFirst";
        case Role::DeceptiveDuplicate: return "DeceptiveDuplicate";
    }
    return "?";
}

inline std::optional<Role> role_from_name(std::string_view s) {
    for (Role r : {Role::Original, Role::NonDeceptiveDuplicate, Role::DeceptiveFirst,
                   Role::DeceptiveDuplicate})
        if (s == role_name(r)) return r;
    return std::nullopt;
}

struct DeceptionAnnotation {
    Role role = Role::Original;
    std::string initiator;  // team whose attack in the group is earliest

    friend bool operator==(const DeceptionAnnotation&, const DeceptionAnnotation&) = default;
};

// Annotations parallel to the input sequence. Within a group the earliest
// event is ordered by (time, team name, input position); the stable position
// only matters for events that tie on both time and team.
inline std::vector<DeceptionAnnotation> annotate(std::span<const AttackEvent> events) {
    std::unordered_map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        groups[e.to_team + '\x1f' + e.payload_hash].push_back(i);
    }
    std::vector<DeceptionAnnotation> ann(events.size());
    for (auto& [key, idx] : groups) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (events[a].time != events[b].time) return events[a].time < events[b].time;
            return events[a].from_team < events[b].from_team;
        });
        const std::string& initiator = events[idx.front()].from_team;
        std::set<std::string> seen;
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            const std::string& team = events[idx[pos]].from_team;
            bool first_of_team = seen.insert(team).second;
            Role role;
            if (team == initiator)
                role = (pos == 0) ? Role::Original : Role::NonDeceptiveDuplicate;
            else
                role = first_of_team ? Role::DeceptiveFirst : Role::DeceptiveDuplicate;
            ann[idx[pos]] = {role, initiator};
        }
    }
    return ann;
}

struct TargetDeceptionStats {
    std::uint64_t unique_payloads = 0;
    std::uint64_t unique_deceptive_payloads = 0;  // >= 2 distinct attacker teams
    std::uint64_t unique_hash_attacker_pairs = 0;
    std::uint64_t total_attacks = 0;
    std::uint64_t nondeceptive_duplicates = 0;
    std::uint64_t deceptive_duplicates = 0;
};

using DeceptionSummary = std::map<std::string, TargetDeceptionStats>;

inline DeceptionSummary summarize(std::span<const AttackEvent> events,
                                  std::span<const DeceptionAnnotation> annotations) {
    DeceptionSummary summary;
    std::map<std::pair<std::string, std::string>, std::set<std::string>> group_teams;
    std::set<std::tuple<std::string, std::string, std::string>> hash_attacker;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        auto& s = summary[e.to_team];
        ++s.total_attacks;
        if (annotations[i].role == Role::NonDeceptiveDuplicate) ++s.nondeceptive_duplicates;
        if (annotations[i].role == Role::DeceptiveDuplicate) ++s.deceptive_duplicates;
        group_teams[{e.to_team, e.payload_hash}].insert(e.from_team);
        hash_attacker.insert({e.to_team, e.payload_hash, e.from_team});
    }
    for (const auto& [key, teams] : group_teams) {
        auto& s = summary[key.first];
        ++s.unique_payloads;
        if (teams.size() >= 2) ++s.unique_deceptive_payloads;
    }
    for (const auto& [to, hash, from] : hash_attacker) ++summary[to].unique_hash_attacker_pairs;
    return summary;
}

// The data behind the per-target deception figures, one row per target team.
inline void write_deception_csv(std::ostream& out, const DeceptionSummary& summary) {
    out << "to_team,unique_payloads,unique_deceptive_payloads,unique_hash_attacker_pairs,"
           "total_attacks,nondeceptive_duplicates,deceptive_duplicates\n";
    for (const auto& [team, s] : summary)
        out << csv_field(team) << ',' << s.unique_payloads << ',' << s.unique_deceptive_payloads
            << ',' << s.unique_hash_attacker_pairs << ',' << s.total_attacks << ','
            << s.nondeceptive_duplicates << ',' << s.deceptive_duplicates << '\n';
}

}  // namespace ctfa
