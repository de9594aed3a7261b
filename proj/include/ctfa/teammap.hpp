#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctfa {

struct TeamMapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CTF network layout: which prefix belongs to which team, which port runs
// which service. Text format, one entry per line:
//   <a.b.c.d>/<len> <team name>
//   port <number> <service id>
struct TeamMap {
    struct Network {
        std::uint32_t prefix = 0;
        int length = 0;
        std::string team;
    };

    std::vector<Network> networks;
    std::map<std::uint16_t, std::string> services;

    std::optional<std::string> team_of(std::uint32_t addr) const {
        for (const auto& n : networks) {
            std::uint32_t mask = n.length == 0 ? 0 : ~std::uint32_t{0} << (32 - n.length);
            if ((addr & mask) == n.prefix) return n.team;
        }
        return std::nullopt;
    }

    // Mapped service id, or the port's decimal string when unmapped.
    std::string service_of(std::uint16_t port) const {
        auto it = services.find(port);
        return it != services.end() ? it->second : std::to_string(port);
    }

    static TeamMap parse(std::istream& in) {
        TeamMap map;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string trimmed = line.substr(0, line.find('#'));
            std::istringstream ls(trimmed);
            std::string first;
            if (!(ls >> first)) continue;
            auto fail = [&](const std::string& msg) {
                throw TeamMapError("teammap line " + std::to_string(lineno) + ": " + msg);
            };
            if (first == "port") {
                long port;
                std::string svc;
                if (!(ls >> port >> svc) || port < 0 || port > 65535)
                    fail("expected 'port <0..65535> <svc id>'");
                map.services[static_cast<std::uint16_t>(port)] = svc;
                continue;
            }
            auto slash = first.find('/');
            if (slash == std::string::npos) fail("expected '<cidr> <team name>'");
            int length = 0;
            try {
                length = std::stoi(first.substr(slash + 1));
            } catch (...) {
                fail("bad prefix length");
            }
            if (length < 0 || length > 32) fail("prefix length out of range");
            std::uint32_t addr = 0;
            int octets = 0;
            std::istringstream as(first.substr(0, slash));
            std::string part;
            while (std::getline(as, part, '.')) {
                long v = -1;
                try {
                    v = std::stol(part);
                } catch (...) {
                }
                if (v < 0 || v > 255 || octets >= 4) fail("bad IPv4 address");
                addr = (addr << 8) | static_cast<std::uint32_t>(v);
                ++octets;
            }
            if (octets != 4) fail("bad IPv4 address");
            std::string team;
            std::getline(ls, team);
            auto start = team.find_first_not_of(" \t");
            auto end = team.find_last_not_of(" \t\r");
            if (start == std::string::npos) fail("missing team name");
            team = team.substr(start, end - start + 1);
            std::uint32_t mask = length == 0 ? 0 : ~std::uint32_t{0} << (32 - length);
            map.networks.push_back({addr & mask, length, team});
        }
        map.validate();
        return map;
    }

    void validate() const {
        for (std::size_t i = 0; i < networks.size(); ++i) {
            for (std::size_t j = i + 1; j < networks.size(); ++j) {
                const auto& a = networks[i];
                const auto& b = networks[j];
                if (a.team == b.team)
                    throw TeamMapError("duplicate team name: " + a.team);
                int shorter = std::min(a.length, b.length);
                std::uint32_t mask = shorter == 0 ? 0 : ~std::uint32_t{0} << (32 - shorter);
                if ((a.prefix & mask) == (b.prefix & mask))
                    throw TeamMapError("overlapping prefixes for teams " + a.team + " and " +
                                       b.team);
            }
        }
    }
};

}  // namespace ctfa
