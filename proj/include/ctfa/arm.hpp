#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ctfa/common.hpp"

namespace ctfa {

// A32 word -> mnemonic token, the vocabulary used by instruction histograms.
// Tokens are base opcode + condition suffix (empty for AL) + "s" when the S
// bit is set on a data-processing or multiply form, e.g. "movtmi", "subs".
// Coverage is deliberately narrow: data-processing, movw/movt, multiply,
// ldr/str/ldrb/strb, ldm/stm, b/bl/bx, svc. Anything else, including the
// cond=1111 space, decodes as "unknown".
inline std::string decode_arm_word(std::uint32_t w) {
    static const char* kCond[] = {"eq", "ne", "cs", "cc", "mi", "pl", "vs", "vc",
                                  "hi", "ls", "ge", "lt", "gt", "le", "",   "nv"};
    static const char* kDataOp[] = {"and", "eor", "sub", "rsb", "add", "adc", "sbc", "rsc",
                                    "tst", "teq", "cmp", "cmn", "orr", "mov", "bic", "mvn"};
    const unsigned cond = w >> 28;
    if (cond == 0xF) return "unknown";
    const std::string suffix = kCond[cond];
    const unsigned op3 = (w >> 25) & 0x7;

    if ((w & 0x0F000000u) == 0x0F000000u) return "svc" + suffix;
    if (op3 == 0b101) return ((w >> 24) & 1 ? "bl" : "b") + suffix;
    if ((w & 0x0FFFFFF0u) == 0x012FFF10u) return "bx" + suffix;
    if (op3 == 0b100) return ((w >> 20) & 1 ? "ldm" : "stm") + suffix;
    if (op3 == 0b011 || op3 == 0b010) {
        if (op3 == 0b011 && (w & 0x10)) return "unknown";  // media space
        const bool load = (w >> 20) & 1;
        const bool byte = (w >> 22) & 1;
        return std::string(load ? "ldr" : "str") + (byte ? "b" : "") + suffix;
    }
    if (op3 == 0b000 || op3 == 0b001) {
        // movw/movt occupy the imm slots where tst/cmp would have S=0.
        if ((w & 0x0FF00000u) == 0x03000000u) return "movw" + suffix;
        if ((w & 0x0FF00000u) == 0x03400000u) return "movt" + suffix;
        const bool s_bit = (w >> 20) & 1;
        if (op3 == 0b000 && (w & 0x0F0000F0u) == 0x00000090u) {
            static const char* kMul[] = {"mul", "mla", "unknown", "unknown",
                                         "umull", "umlal", "smull", "smlal"};
            std::string base = kMul[(w >> 21) & 0x7];
            if (base == "unknown") return base;
            return base + suffix + (s_bit ? "s" : "");
        }
        if (op3 == 0b000 && (w & 0x90) == 0x90) return "unknown";  // extra load/store, swp
        const unsigned op = (w >> 21) & 0xF;
        if (op >= 8 && op <= 11) {  // tst/teq/cmp/cmn; S=0 here is the misc space
            if (!s_bit) return "unknown";
            return kDataOp[op] + suffix;
        }
        return kDataOp[op] + suffix + (s_bit ? "s" : "");
    }
    return "unknown";  // coprocessor space
}

// Little-endian 32-bit words at offsets 0,4,8,...; a trailing partial word is
// ignored. Every scanned word contributes exactly one count.
inline std::map<std::string, std::uint64_t> arm_instruction_histogram(ByteView payload) {
    std::map<std::string, std::uint64_t> hist;
    for (std::size_t off = 0; off + 4 <= payload.size(); off += 4) {
        std::uint32_t w = static_cast<std::uint32_t>(payload[off]) |
                          (std::uint32_t{payload[off + 1]} << 8) |
                          (std::uint32_t{payload[off + 2]} << 16) |
                          (std::uint32_t{payload[off + 3]} << 24);
        ++hist[decode_arm_word(w)];
    }
    return hist;
}

}  // namespace ctfa
