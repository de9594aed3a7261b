#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ctfa/ingest.hpp"
#include "ctfa/pcap.hpp"
#include "ctfa/reassembly.hpp"
#include "ctfa/rng.hpp"
#include "ctfa/teammap.hpp"
#include "support/pcap_builder.hpp"

using namespace ctfa;
using namespace fixture;

static TeamMap test_map() {
    std::istringstream in(teammap_text());
    return TeamMap::parse(in);
}

TEST_CASE("pcap: header-only file parses to nothing") {
    PcapStats stats;
    auto packets = parse_pcap(pcap_header(), &stats);
    CHECK(packets.empty());
    CHECK(stats.records == 0);
    CHECK(stats.skipped_truncated == 0);
}

TEST_CASE("pcap: one hand-built TCP record round-trips") {
    Bytes file = pcap_header();
    TcpFrameSpec spec;
    spec.payload = "AB";
    append_record(file, 1375573517, 250000, tcp_frame(spec));
    PcapStats stats;
    auto packets = parse_pcap(file, &stats);
    REQUIRE(packets.size() == 1);
    CHECK(stats.tcp_packets == 1);
    const Packet& p = packets[0];
    CHECK(p.capture_time_us == 1375573517'250000LL);
    CHECK(p.src_addr == 0x0A010005);
    CHECK(p.dst_addr == 0x0A020007);
    CHECK(p.src_port == 40000);
    CHECK(p.dst_port == 2345);
    CHECK(p.seq == 1000);
    CHECK(p.payload == to_bytes("AB"));
}

TEST_CASE("pcap: corrupt magic rejects the file") {
    Bytes file = pcap_header();
    file[0] = file[1] = file[2] = file[3] = 0;
    CHECK_THROWS_AS(parse_pcap(file), PcapError);
    try {
        parse_pcap(file);
    } catch (const PcapError& e) {
        CHECK(e.kind == PcapErrorKind::BadMagic);
    }
}

TEST_CASE("pcap: short file rejects, non-TCP and fragments skip") {
    Bytes tiny{0xd4, 0xc3, 0xb2, 0xa1, 0x00};
    CHECK_THROWS_AS(parse_pcap(tiny), PcapError);

    Bytes file = pcap_header();
    TcpFrameSpec spec;
    spec.payload = "X";
    Bytes udp = tcp_frame(spec);
    udp[14 + 9] = 17;  // protocol: udp
    append_record(file, 1, 0, udp);
    Bytes frag = tcp_frame(spec);
    frag[14 + 6] = 0x20;  // more-fragments
    append_record(file, 2, 0, frag);
    Bytes arp = tcp_frame(spec);
    arp[12] = 0x08;
    arp[13] = 0x06;  // ethertype: arp
    append_record(file, 3, 0, arp);
    append_record(file, 4, 0, tcp_frame(spec));
    PcapStats stats;
    auto packets = parse_pcap(file, &stats);
    CHECK(packets.size() == 1);
    CHECK(stats.skipped_non_tcp == 1);
    CHECK(stats.skipped_fragment == 1);
    CHECK(stats.skipped_non_ipv4 == 1);
}

TEST_CASE("pcap: big-endian and nanosecond variants") {
    // Big-endian file: header fields and record headers byte-swapped.
    Bytes file;
    put_u32be(file, 0xa1b2c3d4);
    put_u16be(file, 2);
    put_u16be(file, 4);
    put_u32be(file, 0);
    put_u32be(file, 0);
    put_u32be(file, 65535);
    put_u32be(file, 1);
    TcpFrameSpec spec;
    spec.payload = "AB";
    Bytes frame = tcp_frame(spec);
    put_u32be(file, 100);
    put_u32be(file, 7);
    put_u32be(file, static_cast<std::uint32_t>(frame.size()));
    put_u32be(file, static_cast<std::uint32_t>(frame.size()));
    file.insert(file.end(), frame.begin(), frame.end());
    auto packets = parse_pcap(file);
    REQUIRE(packets.size() == 1);
    CHECK(packets[0].capture_time_us == 100'000'007);

    Bytes nano;
    put_u32le(nano, 0xa1b23c4d);
    put_u16le(nano, 2);
    put_u16le(nano, 4);
    put_u32le(nano, 0);
    put_u32le(nano, 0);
    put_u32le(nano, 65535);
    put_u32le(nano, 1);
    append_record(nano, 100, 7999, tcp_frame(spec));  // 7999 ns -> 7 us
    auto npackets = parse_pcap(nano);
    REQUIRE(npackets.size() == 1);
    CHECK(npackets[0].capture_time_us == 100'000'007);
}

TEST_CASE("reassembly: in-order overlap-free segments concatenate") {
    Packet a, b;
    a.capture_time_us = 1'000'000;
    a.src_addr = 1;
    a.dst_addr = 2;
    a.src_port = 10;
    a.dst_port = 20;
    a.seq = 1000;
    a.payload = to_bytes("AT");
    b = a;
    b.capture_time_us = 2'000'000;
    b.seq = 1002;
    b.payload = to_bytes("TACK");
    ReassemblyStats stats;
    auto flows = reassemble_streams(std::vector<Packet>{a, b}, &stats);
    REQUIRE(flows.size() == 1);
    CHECK(flows[0].payload == to_bytes("ATTACK"));
    CHECK(flows[0].first_time_us == 1'000'000);
    CHECK(flows[0].last_time_us == 2'000'000);
    CHECK(stats.anomalies == 0);
}

TEST_CASE("reassembly: out-of-order segments land by sequence offset") {
    Packet a, b;
    a.capture_time_us = 1'000'000;
    a.src_addr = 1;
    a.dst_addr = 2;
    a.src_port = 10;
    a.dst_port = 20;
    a.seq = 1002;
    a.payload = to_bytes("TACK");
    b = a;
    b.capture_time_us = 2'000'000;
    b.seq = 1000;
    b.payload = to_bytes("AT");
    auto flows = reassemble_streams(std::vector<Packet>{a, b});
    REQUIRE(flows.size() == 1);
    CHECK(flows[0].payload == to_bytes("ATTACK"));
}

TEST_CASE("reassembly: retransmission keeps first copy and counts an anomaly") {
    Packet a;
    a.capture_time_us = 1'000'000;
    a.src_addr = 1;
    a.dst_addr = 2;
    a.src_port = 10;
    a.dst_port = 20;
    a.seq = 1000;
    a.payload = to_bytes("ATTACK");
    ReassemblyStats stats;
    auto flows = reassemble_streams(std::vector<Packet>{a, a}, &stats);
    REQUIRE(flows.size() == 1);
    CHECK(flows[0].payload == to_bytes("ATTACK"));
    CHECK(stats.anomalies == 1);
}

TEST_CASE("reassembly: distinct 4-tuples become distinct flows") {
    Packet a;
    a.capture_time_us = 1'000'000;
    a.src_addr = 1;
    a.dst_addr = 2;
    a.src_port = 10;
    a.dst_port = 20;
    a.seq = 0;
    a.payload = to_bytes("HELLO");
    Packet b = a;
    b.src_port = 11;
    b.payload = to_bytes("WORLD");
    auto flows = reassemble_streams(std::vector<Packet>{a, b});
    REQUIRE(flows.size() == 2);
    CHECK(flows[0].payload == to_bytes("HELLO"));
    CHECK(flows[1].payload == to_bytes("WORLD"));
}

TEST_CASE("reassembly: SYN restart and idle gap split sessions") {
    Packet a;
    a.capture_time_us = 1'000'000;
    a.src_addr = 1;
    a.dst_addr = 2;
    a.src_port = 10;
    a.dst_port = 20;
    a.seq = 100;
    a.payload = to_bytes("AT");

    Packet syn = a;
    syn.capture_time_us = 2'000'000;
    syn.flags = tcpflag::kSyn;
    syn.seq = 5000;
    syn.payload.clear();
    Packet data = a;
    data.capture_time_us = 3'000'000;
    data.seq = 5001;  // SYN consumes one sequence number
    data.payload = to_bytes("TACK");
    auto flows = reassemble_streams(std::vector<Packet>{a, syn, data});
    REQUIRE(flows.size() == 2);
    CHECK(flows[0].payload == to_bytes("AT"));
    CHECK(flows[1].payload == to_bytes("TACK"));

    Packet late = a;
    late.capture_time_us = a.capture_time_us + kFlowIdleGapUs + 1;
    auto flows2 = reassemble_streams(std::vector<Packet>{a, late});
    CHECK(flows2.size() == 2);
}

TEST_CASE("reassembly: determinism and payload conservation") {
    Rng rng(99);
    std::vector<Packet> packets;
    std::uint32_t seq = 1;
    for (int i = 0; i < 300; ++i) {
        Packet p;
        p.capture_time_us = 1'000'000 + i * 1000;
        p.src_addr = 1 + static_cast<std::uint32_t>(rng.below(2));
        p.dst_addr = 9;
        p.src_port = 10;
        p.dst_port = 20;
        p.seq = seq;
        std::size_t len = 1 + rng.below(9);
        for (std::size_t j = 0; j < len; ++j)
            p.payload.push_back(static_cast<std::uint8_t>(rng.below(256)));
        packets.push_back(p);
        seq += static_cast<std::uint32_t>(len);  // shared counter: gap-free per key union
    }
    auto once = reassemble_streams(packets);
    auto twice = reassemble_streams(packets);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].key == twice[i].key);
        CHECK(once[i].payload == twice[i].payload);
    }
}

TEST_CASE("gap-free in-order stream conserves payload length") {
    Rng rng(100);
    std::vector<Packet> packets;
    std::uint32_t seq = 77;
    std::size_t total = 0;
    for (int i = 0; i < 200; ++i) {
        Packet p;
        p.capture_time_us = 1'000'000 + i * 1000;
        p.src_addr = 1;
        p.dst_addr = 2;
        p.src_port = 10;
        p.dst_port = 20;
        p.seq = seq;
        std::size_t len = 1 + rng.below(50);
        for (std::size_t j = 0; j < len; ++j)
            p.payload.push_back(static_cast<std::uint8_t>(rng.below(256)));
        seq += static_cast<std::uint32_t>(len);
        total += len;
        packets.push_back(std::move(p));
    }
    ReassemblyStats stats;
    auto flows = reassemble_streams(packets, &stats);
    REQUIRE(flows.size() == 1);
    CHECK(flows[0].payload.size() == total);
    CHECK(stats.anomalies == 0);
}

TEST_CASE("teammap parses networks, services, and validates overlap") {
    TeamMap map = test_map();
    CHECK(map.team_of(0x0A010005).value() == "teamA");
    CHECK(map.team_of(0x0A020007).value() == "teamB");
    CHECK(!map.team_of(0x7F000001).has_value());
    CHECK(map.service_of(2345) == "02345");
    CHECK(map.service_of(80) == "80");

    std::istringstream overlapping("10.1.0.0/16 a\n10.1.2.0/24 b\n");
    CHECK_THROWS_AS(TeamMap::parse(overlapping), TeamMapError);
    std::istringstream dup("10.1.0.0/16 a\n10.2.0.0/16 a\n");
    CHECK_THROWS_AS(TeamMap::parse(dup), TeamMapError);
}

TEST_CASE("flows_to_events maps endpoints and services") {
    TeamMap map = test_map();
    Flow f;
    f.key = {0x0A010005, 0x0A020007, 40000, 2345};
    f.first_time_us = 1375573517'250000LL;
    f.last_time_us = f.first_time_us;
    f.payload = to_bytes("AB");
    IngestStats stats;
    auto events = flows_to_events(std::vector<Flow>{f}, map, &stats);
    REQUIRE(events.size() == 1);
    CHECK(events[0].from_team == "teamA");
    CHECK(events[0].to_team == "teamB");
    CHECK(events[0].svc == "02345");
    CHECK(events[0].time == 1375573517);
    CHECK(events[0].payload_hash == "b86fc6b051f63d73de262d4c34e3a0a9");
    CHECK(events[0].byte_hist == std::map<std::uint8_t, std::uint64_t>{{0x41, 1}, {0x42, 1}});
    CHECK(events[0].inst_hist.empty());

    Flow unmapped = f;
    unmapped.key.dst_port = 9999;
    auto events2 = flows_to_events(std::vector<Flow>{unmapped}, map);
    REQUIRE(events2.size() == 1);
    CHECK(events2[0].svc == "9999");
}

TEST_CASE("intra-team and unmapped flows are dropped and counted") {
    TeamMap map = test_map();
    Flow intra;
    intra.key = {0x0A010005, 0x0A010009, 1, 2};
    Flow outside;
    outside.key = {0x7F000001, 0x0A010005, 1, 2};
    IngestStats stats;
    auto events = flows_to_events(std::vector<Flow>{intra, outside}, map, &stats);
    CHECK(events.empty());
    CHECK(stats.intra_team_dropped == 1);
    CHECK(stats.unmapped_address == 1);
}

TEST_CASE("empty-payload flow produces the empty-digest event") {
    TeamMap map = test_map();
    Flow f;
    f.key = {0x0A010005, 0x0A020007, 40000, 2345};
    auto events = flows_to_events(std::vector<Flow>{f}, map);
    REQUIRE(events.size() == 1);
    CHECK(events[0].payload_hash == "d41d8cd98f00b204e9800998ecf8427e");
    CHECK(events[0].byte_hist.empty());
    CHECK(events[0].inst_hist.empty());
}

TEST_CASE("event byte histogram sums to flow payload length") {
    Rng rng(5);
    TeamMap map = test_map();
    for (int trial = 0; trial < 20; ++trial) {
        Flow f;
        f.key = {0x0A010005, 0x0A020007, 40000, 2345};
        std::size_t len = rng.below(300);
        for (std::size_t i = 0; i < len; ++i)
            f.payload.push_back(static_cast<std::uint8_t>(rng.below(256)));
        auto events = flows_to_events(std::vector<Flow>{f}, map);
        REQUIRE(events.size() == 1);
        std::uint64_t total = 0;
        for (const auto& [b, n] : events[0].byte_hist) total += n;
        CHECK(total == len);
    }
}
