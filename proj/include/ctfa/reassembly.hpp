#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "ctfa/common.hpp"
#include "ctfa/pcap.hpp"

namespace ctfa {

struct FlowKey {
    std::uint32_t src_addr = 0;
    std::uint32_t dst_addr = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;

    friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

// One directed payload stream: the in-sequence-order concatenation of unique
// segment data for a 4-tuple session. Holes left by missing segments stay
// zero-filled (best effort) and are counted as anomalies.
struct Flow {
    FlowKey key;
    std::int64_t first_time_us = 0;
    std::int64_t last_time_us = 0;
    Bytes payload;
};

struct ReassemblyStats {
    std::uint64_t flows = 0;
    std::uint64_t anomalies = 0;  // overlaps, pre-stream segments, gaps, oversize
};

// A SYN on an existing key, or a quiet gap of more than 60 s, closes the
// current flow and opens a new one.
constexpr std::int64_t kFlowIdleGapUs = 60'000'000;

// Per-flow payload cap; segments that would grow a stream past this are
// dropped and counted rather than exhausting memory on garbage sequence
// numbers.
constexpr std::uint64_t kMaxFlowBytes = std::uint64_t{1} << 28;

// Without a SYN the first-seen segment defines the stream start; a later
// segment slightly before it (out-of-order arrival) rebases the stream
// instead of being dropped, up to this window.
constexpr std::uint32_t kRebaseWindow = 1u << 20;

class StreamReassembler {
public:
    void add(const Packet& p) {
        FlowKey key{p.src_addr, p.dst_addr, p.src_port, p.dst_port};
        auto it = sessions_.find(key);
        if (it != sessions_.end() &&
            ((p.flags & tcpflag::kSyn) || p.capture_time_us - it->second.last_us > kFlowIdleGapUs)) {
            emit(key, it->second);
            sessions_.erase(it);
            it = sessions_.end();
        }
        if (it == sessions_.end()) {
            Session s;
            s.first_us = s.last_us = p.capture_time_us;
            s.init_seq = (p.flags & tcpflag::kSyn) ? p.seq + 1 : p.seq;
            s.syn_anchored = (p.flags & tcpflag::kSyn) != 0;
            s.open_order = next_open_order_++;
            it = sessions_.emplace(key, std::move(s)).first;
        }
        Session& s = it->second;
        if (p.capture_time_us > s.last_us) s.last_us = p.capture_time_us;
        place(s, p);
    }

    // Closes every open session, in session-open order, and returns all flows.
    std::vector<Flow> finish() {
        std::vector<std::pair<std::uint64_t, FlowKey>> open;
        open.reserve(sessions_.size());
        for (const auto& [key, s] : sessions_) open.emplace_back(s.open_order, key);
        std::sort(open.begin(), open.end());
        for (const auto& [order, key] : open) emit(key, sessions_.at(key));
        sessions_.clear();
        return std::move(done_);
    }

    const ReassemblyStats& stats() const { return stats_; }

private:
    struct Session {
        std::int64_t first_us = 0;
        std::int64_t last_us = 0;
        std::uint32_t init_seq = 0;
        bool syn_anchored = false;
        std::uint64_t open_order = 0;
        Bytes data;
        std::vector<bool> filled;
    };

    void place(Session& s, const Packet& p) {
        if (p.payload.empty()) return;
        std::uint32_t diff = p.seq - s.init_seq;
        if (diff >= 0x80000000u) {  // segment claims to start before the stream
            std::uint32_t back = s.init_seq - p.seq;
            if (s.syn_anchored || back > kRebaseWindow ||
                s.data.size() + back > kMaxFlowBytes) {
                ++stats_.anomalies;
                return;
            }
            s.data.insert(s.data.begin(), back, 0);
            s.filled.insert(s.filled.begin(), back, false);
            s.init_seq = p.seq;
            diff = 0;
        }
        std::uint64_t off = diff;
        std::uint64_t end = off + p.payload.size();
        if (end > kMaxFlowBytes) {
            ++stats_.anomalies;
            return;
        }
        if (end > s.data.size()) {
            s.data.resize(end, 0);
            s.filled.resize(end, false);
        }
        bool overlap = false;
        for (std::size_t i = 0; i < p.payload.size(); ++i) {
            if (s.filled[off + i]) {
                overlap = true;  // first copy wins
            } else {
                s.data[off + i] = p.payload[i];
                s.filled[off + i] = true;
            }
        }
        if (overlap) ++stats_.anomalies;
    }

    void emit(const FlowKey& key, Session& s) {
        for (bool f : s.filled)
            if (!f) {
                ++stats_.anomalies;  // unfilled hole
                break;
            }
        Flow flow;
        flow.key = key;
        flow.first_time_us = s.first_us;
        flow.last_time_us = s.last_us;
        flow.payload = std::move(s.data);
        done_.push_back(std::move(flow));
        ++stats_.flows;
    }

    std::map<FlowKey, Session> sessions_;
    std::uint64_t next_open_order_ = 0;
    std::vector<Flow> done_;
    ReassemblyStats stats_;
};

inline std::vector<Flow> reassemble_streams(std::span<const Packet> packets,
                                            ReassemblyStats* stats_out = nullptr) {
    StreamReassembler r;
    for (const Packet& p : packets) r.add(p);
    auto flows = r.finish();
    if (stats_out) *stats_out = r.stats();
    return flows;
}

}  // namespace ctfa
