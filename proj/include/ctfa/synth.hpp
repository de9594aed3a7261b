#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctfa/arm.hpp"
#include "ctfa/deception.hpp"
#include "ctfa/event.hpp"
#include "ctfa/features.hpp"
#include "ctfa/md5.hpp"
#include "ctfa/rng.hpp"
#include "ctfa/time.hpp"

namespace ctfa {

struct InvalidConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seeded generator of CTF-style attack corpora with ground-truth deception
// structure. Teams originate payloads in waves; foreign teams copy a payload
// byte-exactly after a positive delay and launch their own (heavier) waves.
struct SynthConfig {
    int n_teams = 20;                 // >= 3
    int n_services = 6;
    std::size_t events_target = 50000;
    std::size_t payload_len_min = 64;
    std::size_t payload_len_max = 512;

    double mean_group_gap_s = 7.0;     // exponential gap between group starts
    double group_lifetime_s = 5400.0;  // exponential mean of a group's activity span
    double wave_geo_p = 0.5;           // originator wave: 1 + Geom(p), capped
    double deceptive_wave_geo_p = 0.06;
    double p_deceive = 0.9;
    int deceiver_min = 1;
    int deceiver_max = 4;
    double copy_delay_mean_s = 30.0;   // strictly positive delay before a copy
    double copy_concentration = 1.0;   // geometric skew of who copies: team at rank
                                       // k draws with weight copy_concentration^k;
                                       // 1.0 means every team copies equally often

    double style_strength = 6.0;       // byte-distribution bias per team
    int style_bytes = 8;
    int style_mnemonics = 4;           // preferred instruction templates per team
    double instr_fraction = 0.5;       // share of payload words that are instructions
    int tools_per_team = 3;            // payload templates a team mutates and reuses
    double mutation_rate = 0.15;       // per-word rewrite probability on origination

    std::uint64_t seed = 1;

    static constexpr std::uint64_t kWaveCap = 64;  // bounds events_target overshoot

    void validate() const {
        if (n_teams < 3) throw InvalidConfig("n_teams must be >= 3");
        if (n_teams > 99) throw InvalidConfig("n_teams must be <= 99");
        if (n_services < 1) throw InvalidConfig("n_services must be >= 1");
        if (events_target < 1) throw InvalidConfig("events_target must be >= 1");
        if (payload_len_min < 16 || payload_len_max < payload_len_min)
            throw InvalidConfig("payload length range invalid (min >= 16)");
        for (double p : {wave_geo_p, deceptive_wave_geo_p})
            if (!(p > 0.0 && p <= 1.0)) throw InvalidConfig("wave parameters must be in (0,1]");
        if (!(p_deceive >= 0.0 && p_deceive <= 1.0))
            throw InvalidConfig("p_deceive must be in [0,1]");
        if (deceiver_min < 1 || deceiver_max < deceiver_min)
            throw InvalidConfig("deceiver count range invalid");
        if (!(instr_fraction >= 0.0 && instr_fraction <= 1.0))
            throw InvalidConfig("instr_fraction must be in [0,1]");
        if (mean_group_gap_s <= 0 || group_lifetime_s <= 0 || copy_delay_mean_s <= 0)
            throw InvalidConfig("time parameters must be positive");
        if (style_bytes < 1 || style_bytes > 64 || style_mnemonics < 1)
            throw InvalidConfig("style parameters out of range");
        if (tools_per_team < 1) throw InvalidConfig("tools_per_team must be >= 1");
        if (!(mutation_rate > 0.0 && mutation_rate <= 1.0))
            throw InvalidConfig("mutation_rate must be in (0,1]");
        if (!(copy_concentration > 0.0 && copy_concentration <= 1.0))
            throw InvalidConfig("copy_concentration must be in (0,1]");
    }

    // The heavy-deception regime: roughly nine of ten events are deceptive
    // duplicates, groups overlap the temporal split boundary, a fifth of the
    // test payloads are unseen, and copying propensity is mildly skewed.
    static SynthConfig paper_like(std::uint64_t seed, std::size_t events_target) {
        SynthConfig c;
        c.seed = seed;
        c.events_target = events_target;
        c.p_deceive = 0.9;
        c.deceiver_min = 4;
        c.deceiver_max = 10;
        c.wave_geo_p = 0.5;
        c.deceptive_wave_geo_p = 0.10;
        c.mean_group_gap_s = 150.0;
        // Group activity spans scale with the corpus horizon so the share of
        // test payloads unseen in training stays near one fifth at any size.
        c.group_lifetime_s = std::max(600.0, 0.4 * static_cast<double>(events_target));
        c.style_bytes = 48;
        c.style_strength = 2.0;
        c.mutation_rate = 0.15;
        c.tools_per_team = 3;
        c.copy_concentration = 0.85;
        return c;
    }
};

struct SynthCorpus {
    std::vector<AttackEvent> events;  // canonically ordered
    std::vector<Role> truth;          // parallel to events
};

namespace detail {

struct InstrTemplate {
    std::uint32_t base;
    std::uint32_t rand_mask;  // operand bits free to randomize
};

// Encodings hand-assembled against the A32 tables; randomizing the masked
// operand bits never changes the decoded mnemonic.
inline const std::vector<InstrTemplate>& instr_pool() {
    static const std::vector<InstrTemplate> pool = {
        {0xE3A00000, 0x000FFFFF},  // mov
        {0xE3B00000, 0x000FFFFF},  // movs
        {0xE3500000, 0x000FFFFF},  // cmp
        {0xE2800000, 0x000FFFFF},  // add
        {0xE2500000, 0x000FFFFF},  // subs
        {0xE3800000, 0x000FFFFF},  // orr
        {0xE2200000, 0x000FFFFF},  // eor
        {0xE2000000, 0x000FFFFF},  // and
        {0xE3E00000, 0x000FFFFF},  // mvn
        {0xE3000000, 0x000FFFFF},  // movw
        {0xE3400000, 0x000FFFFF},  // movt
        {0x43400000, 0x000FFFFF},  // movtmi
        {0x02800000, 0x000FFFFF},  // addeq
        {0x12400000, 0x000FFFFF},  // subne
        {0xA3500000, 0x000FFFFF},  // cmpge
        {0xE5900000, 0x000FFFFF},  // ldr
        {0xE5800000, 0x000FFFFF},  // str
        {0xE5D00000, 0x000FFFFF},  // ldrb
        {0xE5C00000, 0x000FFFFF},  // strb
        {0xE8900000, 0x000FFFFF},  // ldm
        {0xE8800000, 0x000FFFFF},  // stm
        {0xEA000000, 0x00FFFFFF},  // b
        {0xEB000000, 0x00FFFFFF},  // bl
        {0xE12FFF10, 0x0000000F},  // bx
        {0xEF000000, 0x00FFFFFF},  // svc
        {0x4F000000, 0x00FFFFFF},  // svcmi
        {0xE0000090, 0x000F0F0F},  // mul
    };
    return pool;
}

struct TeamStyle {
    std::vector<std::uint32_t> byte_cdf;       // 256 cumulative weights
    std::vector<std::size_t> templates;        // indices into instr_pool()

    std::uint8_t sample_byte(Rng& rng) const {
        std::uint32_t r = static_cast<std::uint32_t>(rng.below(byte_cdf.back()));
        return static_cast<std::uint8_t>(
            std::upper_bound(byte_cdf.begin(), byte_cdf.end(), r) - byte_cdf.begin());
    }

    std::uint32_t sample_word(Rng& rng) const {
        const auto& t = instr_pool()[templates[rng.index(templates.size())]];
        return t.base | (static_cast<std::uint32_t>(rng.next()) & t.rand_mask);
    }
};

inline TeamStyle make_style(const SynthConfig& cfg, int team) {
    Rng rng(derive_seed(cfg.seed ^ 0x7ea357u, static_cast<std::uint64_t>(team)));
    std::vector<std::uint32_t> weights(256, 10);
    std::set<std::uint8_t> chosen;
    while (chosen.size() < static_cast<std::size_t>(cfg.style_bytes))
        chosen.insert(static_cast<std::uint8_t>(rng.index(256)));
    for (std::uint8_t b : chosen)
        weights[b] += static_cast<std::uint32_t>(10 * cfg.style_strength);
    TeamStyle style;
    style.byte_cdf.resize(256);
    std::partial_sum(weights.begin(), weights.end(), style.byte_cdf.begin());
    std::set<std::size_t> picks;
    while (picks.size() < std::min<std::size_t>(static_cast<std::size_t>(cfg.style_mnemonics),
                                                instr_pool().size()))
        picks.insert(rng.index(instr_pool().size()));
    style.templates.assign(picks.begin(), picks.end());
    return style;
}

inline Bytes make_payload(const SynthConfig& cfg, const TeamStyle& style, Rng& rng) {
    std::size_t len = cfg.payload_len_min +
                      rng.index(cfg.payload_len_max - cfg.payload_len_min + 1);
    Bytes payload;
    payload.reserve(len);
    while (payload.size() + 4 <= len) {
        if (rng.unit() < cfg.instr_fraction) {
            std::uint32_t w = style.sample_word(rng);
            for (int i = 0; i < 4; ++i)
                payload.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
        } else {
            for (int i = 0; i < 4; ++i) payload.push_back(style.sample_byte(rng));
        }
    }
    while (payload.size() < len) payload.push_back(style.sample_byte(rng));
    return payload;
}

// Originations reuse a team tool with per-word rewrites: payloads of the same
// team stay similar without ever colliding on the exact digest.
inline Bytes mutate_payload(const SynthConfig& cfg, const TeamStyle& style, const Bytes& tool,
                            Rng& rng) {
    Bytes payload = tool;
    std::size_t off = 0;
    for (; off + 4 <= payload.size(); off += 4) {
        if (rng.unit() >= cfg.mutation_rate) continue;
        if (rng.unit() < cfg.instr_fraction) {
            std::uint32_t w = style.sample_word(rng);
            for (int i = 0; i < 4; ++i)
                payload[off + static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>(w >> (8 * i));
        } else {
            for (int i = 0; i < 4; ++i)
                payload[off + static_cast<std::size_t>(i)] = style.sample_byte(rng);
        }
    }
    for (; off < payload.size(); ++off)
        if (rng.unit() < cfg.mutation_rate) payload[off] = style.sample_byte(rng);
    return payload;
}

// Strictly increasing second offsets for one actor's wave.
inline std::vector<std::int64_t> wave_offsets(Rng& rng, std::uint64_t count, std::int64_t lo,
                                              std::int64_t hi) {
    std::vector<std::int64_t> offs(count);
    for (auto& o : offs) o = lo + static_cast<std::int64_t>(rng.below(
                                      static_cast<std::uint64_t>(std::max<std::int64_t>(1, hi - lo + 1))));
    std::sort(offs.begin(), offs.end());
    for (std::size_t i = 1; i < offs.size(); ++i)
        if (offs[i] <= offs[i - 1]) offs[i] = offs[i - 1] + 1;
    return offs;
}

}  // namespace detail

inline SynthCorpus generate(const SynthConfig& cfg) {
    cfg.validate();

    std::vector<std::string> teams;
    for (int t = 1; t <= cfg.n_teams; ++t) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "T-%02d", t);
        teams.emplace_back(buf);
    }
    std::vector<std::string> services;
    for (int s = 0; s < cfg.n_services; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%05d", (2345 + 1111 * s) % 100000);
        services.emplace_back(buf);
    }
    std::vector<detail::TeamStyle> styles;
    for (int t = 0; t < cfg.n_teams; ++t) styles.push_back(detail::make_style(cfg, t));
    std::vector<std::vector<Bytes>> tools(static_cast<std::size_t>(cfg.n_teams));
    for (int t = 0; t < cfg.n_teams; ++t) {
        Rng tool_rng(derive_seed(cfg.seed ^ 0x700150ull, static_cast<std::uint64_t>(t)));
        for (int k = 0; k < cfg.tools_per_team; ++k)
            tools[static_cast<std::size_t>(t)].push_back(
                detail::make_payload(cfg, styles[static_cast<std::size_t>(t)], tool_rng));
    }

    // Teams differ in how aggressively they copy: a seed-derived ranking with
    // geometrically decaying weights. Heavy copiers dominate the deceptive
    // mass corpus-wide, which is a learnable regularity.
    std::vector<double> copy_weight(static_cast<std::size_t>(cfg.n_teams));
    {
        std::vector<int> ranking(static_cast<std::size_t>(cfg.n_teams));
        std::iota(ranking.begin(), ranking.end(), 0);
        Rng rank_rng(derive_seed(cfg.seed ^ 0x5CA7ull, 1));
        rank_rng.shuffle(ranking.begin(), ranking.end());
        double w = 1.0;
        for (int team : ranking) {
            copy_weight[static_cast<std::size_t>(team)] = w;
            w *= cfg.copy_concentration;
        }
    }

    Rng rng(derive_seed(cfg.seed, 0xC0305EEDull));
    std::int64_t clock = days_from_civil(2013, 8, 2) * 86400;
    std::set<std::pair<int, std::string>> used;  // (target, payload hash)

    std::vector<AttackEvent> events;
    std::vector<Role> truth;
    events.reserve(cfg.events_target + 512);

    auto sample_wave = [&](double p) {
        return 1 + std::min<std::uint64_t>(rng.geometric(p), SynthConfig::kWaveCap - 1);
    };

    while (events.size() < cfg.events_target) {
        const int orig = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.n_teams)));
        int target = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.n_teams - 1)));
        if (target >= orig) ++target;
        const std::string& svc = services[rng.index(services.size())];

        const Bytes& tool = tools[static_cast<std::size_t>(orig)]
                                 [rng.index(tools[static_cast<std::size_t>(orig)].size())];
        Bytes payload;
        std::string hash;
        for (;;) {
            payload = detail::mutate_payload(cfg, styles[static_cast<std::size_t>(orig)], tool, rng);
            hash = md5_digest(ByteView{payload});
            if (used.emplace(target, hash).second) break;
        }
        const auto byte_h = sparse_byte_histogram(ByteView{payload});
        const auto inst_h = arm_instruction_histogram(ByteView{payload});

        const std::int64_t start = clock;
        clock += std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(rng.exponential(cfg.mean_group_gap_s))));
        const std::int64_t lifetime = std::max<std::int64_t>(
            60, static_cast<std::int64_t>(std::llround(rng.exponential(cfg.group_lifetime_s))));

        auto emit_actor = [&](int team, const std::vector<std::int64_t>& offsets, bool deceptive) {
            for (std::size_t i = 0; i < offsets.size(); ++i) {
                AttackEvent e;
                e.time = start + offsets[i];
                e.from_team = teams[static_cast<std::size_t>(team)];
                e.to_team = teams[static_cast<std::size_t>(target)];
                e.svc = svc;
                e.payload_hash = hash;
                e.byte_hist = byte_h;
                e.inst_hist = inst_h;
                events.push_back(std::move(e));
                truth.push_back(deceptive
                                    ? (i == 0 ? Role::DeceptiveFirst : Role::DeceptiveDuplicate)
                                    : (i == 0 ? Role::Original : Role::NonDeceptiveDuplicate));
            }
        };

        // Originator wave: the group's first event, then follow-ups spread
        // over the group's lifetime. Copies always start strictly later.
        std::uint64_t w = sample_wave(cfg.wave_geo_p);
        std::vector<std::int64_t> offs{0};
        if (w > 1) {
            auto rest = detail::wave_offsets(rng, w - 1, 1, lifetime);
            offs.insert(offs.end(), rest.begin(), rest.end());
        }
        emit_actor(orig, offs, false);

        if (rng.unit() < cfg.p_deceive) {
            const int avail = cfg.n_teams - 2;
            const int max_d = std::min(cfg.deceiver_max, avail);
            const int min_d = std::min(cfg.deceiver_min, max_d);
            const int d = rng.uniform_int(min_d, max_d);
            std::vector<int> candidates;
            std::vector<double> weights;
            for (int t = 0; t < cfg.n_teams; ++t) {
                if (t == orig || t == target) continue;
                candidates.push_back(t);
                weights.push_back(copy_weight[static_cast<std::size_t>(t)]);
            }
            for (int j = 0; j < d; ++j) {  // weighted draw without replacement
                double total = 0.0;
                for (double w : weights) total += w;
                double x = rng.unit() * total;
                std::size_t pick = 0;
                while (pick + 1 < candidates.size() && x >= weights[pick]) {
                    x -= weights[pick];
                    ++pick;
                }
                const int deceiver = candidates[pick];
                weights[pick] = 0.0;
                const std::int64_t delay =
                    1 + static_cast<std::int64_t>(std::llround(rng.exponential(cfg.copy_delay_mean_s)));
                const std::uint64_t wd = sample_wave(cfg.deceptive_wave_geo_p);
                emit_actor(deceiver, detail::wave_offsets(rng, wd, delay, delay + lifetime), true);
            }
        }
    }

    std::vector<std::size_t> order(events.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return event_before(events[a], events[b]);
    });
    SynthCorpus corpus;
    corpus.events.reserve(events.size());
    corpus.truth.reserve(events.size());
    for (std::size_t i : order) {
        corpus.events.push_back(std::move(events[i]));
        corpus.truth.push_back(truth[i]);
    }
    return corpus;
}

}  // namespace ctfa

