#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ctfa/version.hpp"

namespace ctfa {

// Recorded alongside every command's outputs. Contains no wall-clock state:
// reruns with equal inputs and flags serialize byte-identically.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> flags;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, md5)
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = kToolName;
        j["tool_version"] = kToolVersion;
        j["command"] = command;
        j["flags"] = flags;
        nlohmann::json inputs = nlohmann::json::array();
        for (const auto& [path, digest] : input_digests)
            inputs.push_back({{"path", path}, {"md5", digest}});
        j["inputs"] = std::move(inputs);
        j["seed"] = seed;
        j["outputs"] = outputs;
        return j;
    }
};

}  // namespace ctfa
