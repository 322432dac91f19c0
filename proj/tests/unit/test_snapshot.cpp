#include <cstring>
#include <sstream>

#include "doctest.h"
#include "snb/errors.hpp"
#include "snb/snapshot.hpp"

using namespace snb;

namespace {

Snapshot sample() {
    const ModelParams p{2.0, 0.25, 0.75, Neighborhood::FourCell, Boundary::Reflecting};
    LatticeState s = seed_random(3, 4, p, 0.05, 7);
    s.generation = 123456789012ULL;
    return {s, p};
}

}  // namespace

TEST_CASE("snapshot round trip is exact") {
    const Snapshot in = sample();
    std::stringstream buf;
    write_snapshot(buf, in.state, in.params);
    const Snapshot out = read_snapshot(buf);
    CHECK(out.state == in.state);
    CHECK(out.params == in.params);
}

TEST_CASE("snapshot header layout") {
    const Snapshot in = sample();
    std::stringstream buf;
    write_snapshot(buf, in.state, in.params);
    const std::string bytes = buf.str();
    REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 8 + 3 * 8 + 1 + 1 + 12 * 16);
    CHECK(bytes.substr(0, 4) == "NBSP");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
    CHECK(static_cast<unsigned char>(bytes[8]) == 3);  // rows
    CHECK(static_cast<unsigned char>(bytes[12]) == 4); // cols
    CHECK(static_cast<unsigned char>(bytes[48]) == 4); // neighborhood byte
    CHECK(static_cast<unsigned char>(bytes[49]) == 1); // reflecting
    double lambda = 0.0;
    std::memcpy(&lambda, bytes.data() + 24, 8);
    CHECK(lambda == 2.0);
}

TEST_CASE("malformed snapshots") {
    const Snapshot in = sample();
    std::stringstream buf;
    write_snapshot(buf, in.state, in.params);
    const std::string bytes = buf.str();

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    std::stringstream a(bad_magic);
    CHECK_THROWS_AS(read_snapshot(a), FormatError);

    std::string bad_version = bytes;
    bad_version[4] = 9;
    std::stringstream b(bad_version);
    CHECK_THROWS_AS(read_snapshot(b), FormatError);

    std::stringstream c(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_snapshot(c), FormatError);

    std::string bad_boundary = bytes;
    bad_boundary[49] = 7;
    std::stringstream d(bad_boundary);
    CHECK_THROWS_AS(read_snapshot(d), FormatError);
}
