#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "ctfa/md5.hpp"
#include "ctfa/rng.hpp"

using ctfa::md5_digest;

TEST_CASE("md5 matches the RFC 1321 test suite") {
    CHECK(md5_digest("") == "d41d8cd98f00b204e9800998ecf8427e");
    CHECK(md5_digest("a") == "0cc175b9c0f1b6a831c399e269772661");
    CHECK(md5_digest("abc") == "900150983cd24fb0d6963f7d28e17f72");
    CHECK(md5_digest("message digest") == "f96b697d7cb7938d525a2f31aaf161d0");
    CHECK(md5_digest("abcdefghijklmnopqrstuvwxyz") == "c3fcd3d76192e4007dfb496cca67e13b");
    CHECK(md5_digest("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789") ==
          "d174ab98d277d9f5a5611c2c9f419d9f");
    CHECK(md5_digest("1234567890123456789012345678901234567890123456789012345678901234567890123456"
                     "7890") == "57edf4a22be3c955ac49da2e2107b67a");
}

TEST_CASE("md5 streaming equals one-shot across block boundaries") {
    ctfa::Rng rng(7);
    std::string msg;
    for (int i = 0; i < 1000; ++i) msg += static_cast<char>('a' + rng.index(26));
    for (std::size_t cut : {std::size_t{1}, std::size_t{55}, std::size_t{64}, std::size_t{65},
                            std::size_t{128}, std::size_t{999}}) {
        ctfa::Md5 h;
        h.update(msg.data(), cut);
        h.update(msg.data() + cut, msg.size() - cut);
        auto raw = h.finish();
        std::string hex;
        for (auto b : raw) hex += ctfa::hex_byte(b);
        CHECK(hex == md5_digest(msg));
    }
}

TEST_CASE("megabyte payloads differing in one byte hash differently") {
    std::string a(1 << 20, 'x');
    std::string b = a;
    b[123456] = 'y';
    CHECK(md5_digest(a) != md5_digest(b));
}
