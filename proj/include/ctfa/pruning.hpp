#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctfa/deception.hpp"
#include "ctfa/event.hpp"

namespace ctfa {

enum class PruneKind {
    None,
    AllButMajority,    // P-1
    AllButKMajority,   // P-2
    AllButEarliest,    // P-3
    AllButMostRecent,  // P-4
};

struct PruningStrategy {
    PruneKind kind = PruneKind::None;
    int k = 1;  // AllButKMajority only; must be >= 1

    std::string name() const {
        switch (kind) {
            case PruneKind::None: return "none";
            case PruneKind::AllButMajority: return "p1";
            case PruneKind::AllButKMajority: return "p2:" + std::to_string(k);
            case PruneKind::AllButEarliest: return "p3";
            case PruneKind::AllButMostRecent: return "p4";
        }
        return "?";
    }

    // Accepts none | p1 | p2:<k> | p3 | p4.
    static std::optional<PruningStrategy> parse(std::string_view s) {
        if (s == "none") return PruningStrategy{PruneKind::None};
        if (s == "p1") return PruningStrategy{PruneKind::AllButMajority};
        if (s == "p3") return PruningStrategy{PruneKind::AllButEarliest};
        if (s == "p4") return PruningStrategy{PruneKind::AllButMostRecent};
        if (s.rfind("p2:", 0) == 0) {
            try {
                int k = std::stoi(std::string(s.substr(3)));
                if (k < 1) return std::nullopt;
                return PruningStrategy{PruneKind::AllButKMajority, k};
            } catch (...) {
                return std::nullopt;
            }
        }
        return std::nullopt;
    }
};

struct UnannotatedEvents : std::runtime_error {
    UnannotatedEvents() : std::runtime_error("events and annotations differ in length") {}
};

// Indices (ascending, so relative order is preserved) of the training events
// kept by a strategy. Applied per (to_team, payload_hash) group:
//   P-1 keeps the most frequent attacking team (ties: earliest first attack,
//       then team name), P-2 the k most frequent, P-3 the initiator's events,
//   P-4 the team owning the group's latest event.
inline std::vector<std::size_t> prune_indices(std::span<const AttackEvent> events,
                                              std::span<const DeceptionAnnotation> annotations,
                                              const PruningStrategy& strategy) {
    if (events.size() != annotations.size()) throw UnannotatedEvents{};
    if (strategy.kind == PruneKind::AllButKMajority && strategy.k < 1)
        throw std::invalid_argument("AllButKMajority requires k >= 1");

    std::vector<std::size_t> kept;
    if (events.empty()) return kept;
    if (strategy.kind == PruneKind::None) {
        kept.resize(events.size());
        for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
        return kept;
    }
    if (strategy.kind == PruneKind::AllButEarliest) {
        for (std::size_t i = 0; i < events.size(); ++i)
            if (events[i].from_team == annotations[i].initiator) kept.push_back(i);
        return kept;
    }

    std::unordered_map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < events.size(); ++i)
        groups[events[i].to_team + '\x1f' + events[i].payload_hash].push_back(i);

    std::vector<bool> keep(events.size(), false);
    for (const auto& [key, idx] : groups) {
        struct TeamStat {
            std::size_t count = 0;
            std::int64_t first_time = 0;
            std::int64_t last_time = 0;
        };
        std::map<std::string, TeamStat> teams;
        for (std::size_t i : idx) {
            const auto& e = events[i];
            auto [it, fresh] = teams.try_emplace(e.from_team);
            auto& t = it->second;
            if (fresh || e.time < t.first_time) t.first_time = e.time;
            if (fresh || e.time > t.last_time) t.last_time = e.time;
            ++t.count;
        }
        std::vector<std::string> selected;
        if (strategy.kind == PruneKind::AllButMostRecent) {
            // Team of the maximal event under (time, team name).
            const std::string* best = nullptr;
            std::int64_t best_time = 0;
            for (const auto& [team, t] : teams) {
                if (!best || t.last_time > best_time ||
                    (t.last_time == best_time && team > *best)) {
                    best = &team;
                    best_time = t.last_time;
                }
            }
            selected.push_back(*best);
        } else {  // P-1 / P-2 by descending frequency
            std::vector<std::pair<std::string, TeamStat>> ranked(teams.begin(), teams.end());
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                if (a.second.count != b.second.count) return a.second.count > b.second.count;
                if (a.second.first_time != b.second.first_time)
                    return a.second.first_time < b.second.first_time;
                return a.first < b.first;
            });
            std::size_t take = strategy.kind == PruneKind::AllButMajority
                                   ? 1
                                   : static_cast<std::size_t>(strategy.k);
            for (std::size_t r = 0; r < ranked.size() && r < take; ++r)
                selected.push_back(ranked[r].first);
        }
        for (std::size_t i : idx)
            if (std::find(selected.begin(), selected.end(), events[i].from_team) !=
                selected.end())
                keep[i] = true;
    }
    for (std::size_t i = 0; i < events.size(); ++i)
        if (keep[i]) kept.push_back(i);
    return kept;
}

inline std::vector<AttackEvent> prune(std::span<const AttackEvent> events,
                                      std::span<const DeceptionAnnotation> annotations,
                                      const PruningStrategy& strategy) {
    std::vector<AttackEvent> out;
    for (std::size_t i : prune_indices(events, annotations, strategy)) out.push_back(events[i]);
    return out;
}

}  // namespace ctfa
