#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctfa/event.hpp"
#include "ctfa/features.hpp"
#include "ctfa/reassembly.hpp"
#include "ctfa/teammap.hpp"

namespace ctfa {

struct IngestStats {
    std::uint64_t events = 0;
    std::uint64_t intra_team_dropped = 0;
    std::uint64_t unmapped_address = 0;
};

// Flow -> event: endpoints resolve through the team map, payload features
// come from the payload bytes. Intra-team traffic and unmappable endpoints
// are dropped and counted. Event time is the flow start, floored to seconds.
inline std::vector<AttackEvent> flows_to_events(std::span<const Flow> flows, const TeamMap& map,
                                                IngestStats* stats_out = nullptr) {
    IngestStats stats;
    std::vector<AttackEvent> events;
    for (const Flow& f : flows) {
        auto from = map.team_of(f.key.src_addr);
        auto to = map.team_of(f.key.dst_addr);
        if (!from || !to) {
            ++stats.unmapped_address;
            continue;
        }
        if (*from == *to) {
            ++stats.intra_team_dropped;
            continue;
        }
        AttackEvent e;
        e.time = f.first_time_us >= 0 ? f.first_time_us / 1'000'000
                                      : (f.first_time_us - 999'999) / 1'000'000;
        e.from_team = *from;
        e.to_team = *to;
        e.svc = map.service_of(f.key.dst_port);
        e.payload_hash = md5_digest(ByteView{f.payload});
        e.byte_hist = sparse_byte_histogram(ByteView{f.payload});
        e.inst_hist = arm_instruction_histogram(ByteView{f.payload});
        events.push_back(std::move(e));
        ++stats.events;
    }
    if (stats_out) *stats_out = stats;
    return events;
}

}  // namespace ctfa
