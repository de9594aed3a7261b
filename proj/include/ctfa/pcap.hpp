#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctfa/common.hpp"

namespace ctfa {

namespace tcpflag {
constexpr std::uint8_t kFin = 0x01;
constexpr std::uint8_t kSyn = 0x02;
constexpr std::uint8_t kRst = 0x04;
constexpr std::uint8_t kPsh = 0x08;
constexpr std::uint8_t kAck = 0x10;
}  // namespace tcpflag

struct Packet {
    std::int64_t capture_time_us = 0;
    std::uint32_t src_addr = 0;
    std::uint32_t dst_addr = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint32_t seq = 0;
    std::uint8_t flags = 0;
    Bytes payload;
};

enum class PcapErrorKind { BadMagic, TruncatedHeader, BadLinkType };

struct PcapError : std::runtime_error {
    PcapErrorKind kind;
    PcapError(PcapErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct PcapStats {
    std::uint64_t records = 0;
    std::uint64_t tcp_packets = 0;
    std::uint64_t skipped_non_ipv4 = 0;
    std::uint64_t skipped_non_tcp = 0;
    std::uint64_t skipped_fragment = 0;
    std::uint64_t skipped_truncated = 0;
};

namespace detail {

struct PcapReader {
    ByteView data;
    std::size_t pos = 0;
    bool big_endian = false;

    std::size_t remaining() const { return data.size() - pos; }

    std::uint16_t u16() {
        std::uint16_t v = big_endian
                              ? static_cast<std::uint16_t>((data[pos] << 8) | data[pos + 1])
                              : static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8));
        pos += 2;
        return v;
    }

    std::uint32_t u32() {
        std::uint32_t v;
        if (big_endian)
            v = (std::uint32_t{data[pos]} << 24) | (std::uint32_t{data[pos + 1]} << 16) |
                (std::uint32_t{data[pos + 2]} << 8) | data[pos + 3];
        else
            v = std::uint32_t{data[pos]} | (std::uint32_t{data[pos + 1]} << 8) |
                (std::uint32_t{data[pos + 2]} << 16) | (std::uint32_t{data[pos + 3]} << 24);
        pos += 4;
        return v;
    }
};

inline std::uint16_t net16(ByteView p, std::size_t off) {
    return static_cast<std::uint16_t>((p[off] << 8) | p[off + 1]);
}

inline std::uint32_t net32(ByteView p, std::size_t off) {
    return (std::uint32_t{p[off]} << 24) | (std::uint32_t{p[off + 1]} << 16) |
           (std::uint32_t{p[off + 2]} << 8) | p[off + 3];
}

}  // namespace detail

// Classic pcap only (not pcapng), Ethernet link type, TCP over IPv4.
// Non-TCP / non-IPv4 / fragmented / truncated records are skipped and
// counted, never fatal; a malformed global header rejects the whole file.
inline std::vector<Packet> parse_pcap(ByteView file, PcapStats* stats_out = nullptr) {
    PcapStats stats;
    if (file.size() < 24)
        throw PcapError(PcapErrorKind::TruncatedHeader, "file shorter than pcap global header");

    detail::PcapReader r{file};
    std::uint32_t magic_le = std::uint32_t{file[0]} | (std::uint32_t{file[1]} << 8) |
                             (std::uint32_t{file[2]} << 16) | (std::uint32_t{file[3]} << 24);
    bool nanos = false;
    switch (magic_le) {
        case 0xa1b2c3d4u: r.big_endian = false; break;
        case 0xd4c3b2a1u: r.big_endian = true; break;
        case 0xa1b23c4du: r.big_endian = false; nanos = true; break;
        case 0x4d3cb2a1u: r.big_endian = true; nanos = true; break;
        default: throw PcapError(PcapErrorKind::BadMagic, "not a pcap file");
    }
    r.pos = 4;
    r.u16();  // version major
    r.u16();  // version minor
    r.u32();  // thiszone
    r.u32();  // sigfigs
    r.u32();  // snaplen
    std::uint32_t linktype = r.u32();
    if (linktype != 1)
        throw PcapError(PcapErrorKind::BadLinkType,
                        "unsupported link type " + std::to_string(linktype));

    std::vector<Packet> packets;
    while (r.remaining() > 0) {
        if (r.remaining() < 16) {
            ++stats.skipped_truncated;
            break;
        }
        std::uint32_t ts_sec = r.u32();
        std::uint32_t ts_sub = r.u32();
        std::uint32_t incl_len = r.u32();
        std::uint32_t orig_len = r.u32();
        ++stats.records;
        if (incl_len > r.remaining()) {
            ++stats.skipped_truncated;
            break;
        }
        ByteView rec = file.subspan(r.pos, incl_len);
        r.pos += incl_len;
        if (incl_len < orig_len) {
            ++stats.skipped_truncated;
            continue;
        }
        // Ethernet
        if (rec.size() < 14) {
            ++stats.skipped_truncated;
            continue;
        }
        if (detail::net16(rec, 12) != 0x0800) {
            ++stats.skipped_non_ipv4;
            continue;
        }
        ByteView ip = rec.subspan(14);
        if (ip.size() < 20 || (ip[0] >> 4) != 4) {
            ++stats.skipped_non_ipv4;
            continue;
        }
        std::size_t ihl = (ip[0] & 0xF) * 4u;
        std::uint16_t total_len = detail::net16(ip, 2);
        if (ihl < 20 || total_len < ihl || total_len > ip.size()) {
            ++stats.skipped_truncated;
            continue;
        }
        std::uint16_t frag = detail::net16(ip, 6);
        if ((frag & 0x2000) || (frag & 0x1FFF)) {
            ++stats.skipped_fragment;
            continue;
        }
        if (ip[9] != 6) {
            ++stats.skipped_non_tcp;
            continue;
        }
        ByteView tcp = ip.subspan(ihl, total_len - ihl);
        if (tcp.size() < 20) {
            ++stats.skipped_truncated;
            continue;
        }
        std::size_t tcp_hdr = (tcp[12] >> 4) * 4u;
        if (tcp_hdr < 20 || tcp_hdr > tcp.size()) {
            ++stats.skipped_truncated;
            continue;
        }
        Packet p;
        p.capture_time_us = static_cast<std::int64_t>(ts_sec) * 1'000'000 +
                            (nanos ? ts_sub / 1000 : ts_sub);
        p.src_addr = detail::net32(ip, 12);
        p.dst_addr = detail::net32(ip, 16);
        p.src_port = detail::net16(tcp, 0);
        p.dst_port = detail::net16(tcp, 2);
        p.seq = (std::uint32_t{tcp[4]} << 24) | (std::uint32_t{tcp[5]} << 16) |
                (std::uint32_t{tcp[6]} << 8) | tcp[7];
        p.flags = tcp[13];
        p.payload.assign(tcp.begin() + static_cast<std::ptrdiff_t>(tcp_hdr), tcp.end());
        ++stats.tcp_packets;
        packets.push_back(std::move(p));
    }
    if (stats_out) *stats_out = stats;
    return packets;
}

}  // namespace ctfa
