#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ctfa/common.hpp"
#include "ctfa/md5.hpp"

namespace ctfa {

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Bytes read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string& s = ss.str();
    return Bytes(s.begin(), s.end());
}

inline std::string read_file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path);
    out << content;
    if (!out) throw FileError("short write to " + path);
}

inline std::string md5_of_file(const std::string& path) {
    return md5_digest(ByteView{read_file_bytes(path)});
}

}  // namespace ctfa
