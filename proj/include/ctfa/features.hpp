#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctfa/arm.hpp"
#include "ctfa/common.hpp"
#include "ctfa/event.hpp"
#include "ctfa/md5.hpp"

namespace ctfa {

inline std::array<std::uint64_t, 256> byte_histogram(ByteView payload) {
    std::array<std::uint64_t, 256> counts{};
    for (std::uint8_t b : payload) ++counts[b];
    return counts;
}

inline std::map<std::uint8_t, std::uint64_t> sparse_byte_histogram(ByteView payload) {
    auto dense = byte_histogram(payload);
    std::map<std::uint8_t, std::uint64_t> sparse;
    for (int b = 0; b < 256; ++b)
        if (dense[b] > 0) sparse[static_cast<std::uint8_t>(b)] = dense[b];
    return sparse;
}

struct EmptyTrainingSet : std::runtime_error {
    EmptyTrainingSet() : std::runtime_error("empty training set") {}
};

// Fixed encoding for the classifiers: 256 byte bins, then the instruction
// vocabulary (trailing out-of-vocabulary slot), then a one-hot service block.
// Built from training data only; test-time mnemonics outside the vocabulary
// pool into the OOV slot, unseen services encode as all-zero.
struct FeatureSpace {
    static constexpr const char* kOovSlot = "(oov)";

    std::vector<std::string> mnemonic_vocab;  // sorted, last entry is kOovSlot
    std::vector<std::string> svc_vocab;       // sorted
    bool normalize = true;

    std::size_t dimension() const { return 256 + mnemonic_vocab.size() + svc_vocab.size(); }

    static FeatureSpace build(std::span<const AttackEvent> training, bool normalize = true) {
        if (training.empty()) throw EmptyTrainingSet{};
        std::set<std::string> mnemonics;
        std::set<std::string> services;
        for (const auto& e : training) {
            for (const auto& [m, n] : e.inst_hist) mnemonics.insert(m);
            services.insert(e.svc);
        }
        FeatureSpace space;
        space.mnemonic_vocab.assign(mnemonics.begin(), mnemonics.end());
        space.mnemonic_vocab.push_back(kOovSlot);
        space.svc_vocab.assign(services.begin(), services.end());
        space.normalize = normalize;
        return space;
    }
};

struct FeatureVector {
    std::vector<double> values;
    std::string label;  // from_team
};

inline FeatureVector vectorize(const AttackEvent& e, const FeatureSpace& space) {
    FeatureVector v;
    v.values.assign(space.dimension(), 0.0);
    v.label = e.from_team;

    double byte_total = 0;
    for (const auto& [b, n] : e.byte_hist) byte_total += static_cast<double>(n);
    for (const auto& [b, n] : e.byte_hist)
        v.values[b] = space.normalize ? n / byte_total : static_cast<double>(n);

    const std::size_t inst_base = 256;
    const std::size_t oov = inst_base + space.mnemonic_vocab.size() - 1;
    double inst_total = 0;
    for (const auto& [m, n] : e.inst_hist) inst_total += static_cast<double>(n);
    for (const auto& [m, n] : e.inst_hist) {
        auto it = std::lower_bound(space.mnemonic_vocab.begin(), space.mnemonic_vocab.end() - 1, m);
        std::size_t slot = (it != space.mnemonic_vocab.end() - 1 && *it == m)
                               ? inst_base + static_cast<std::size_t>(it - space.mnemonic_vocab.begin())
                               : oov;
        v.values[slot] += space.normalize ? n / inst_total : static_cast<double>(n);
    }

    auto sit = std::lower_bound(space.svc_vocab.begin(), space.svc_vocab.end(), e.svc);
    if (sit != space.svc_vocab.end() && *sit == e.svc)
        v.values[inst_base + space.mnemonic_vocab.size() +
                 static_cast<std::size_t>(sit - space.svc_vocab.begin())] = 1.0;
    return v;
}

}  // namespace ctfa
