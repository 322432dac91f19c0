#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "snb/errors.hpp"
#include "snb/render.hpp"

using namespace snb;

TEST_CASE("percentiles interpolate linearly") {
    CHECK(percentile({3, 1, 2, 4, 5}, 50) == 3.0);
    CHECK(percentile({1, 2, 3, 4, 5}, 0) == 1.0);
    CHECK(percentile({1, 2, 3, 4, 5}, 100) == 5.0);
    CHECK(percentile({0, 10}, 25) == 2.5);
    CHECK_THROWS_AS(percentile({}, 50), DomainError);
}

TEST_CASE("one pixel per cell") {
    const ModelParams p{2.0, 0.5, 0.5, Neighborhood::EightCell, Boundary::Toroidal};
    const LatticeState s = seed_random(7, 13, p, 0.05, 1);
    const Image img = render(s);
    CHECK(img.width == 13);
    CHECK(img.height == 7);
    CHECK(img.rgb.size() == 3 * 7 * 13);
    CHECK(render(s) == img);
}

TEST_CASE("homogeneous lattice renders one colour") {
    const LatticeState s(9, 9, nb_fixed_point(2.0));
    const Image img = render(s);
    for (std::size_t i = 0; i < 81; ++i) {
        CHECK(img.rgb[3 * i] == img.rgb[0]);
        CHECK(img.rgb[3 * i + 1] == img.rgb[1]);
        CHECK(img.rgb[3 * i + 2] == img.rgb[2]);
    }
}

TEST_CASE("colour semantics") {
    LatticeState s(3, 3, {0.0, 0.0});
    s.at(0, 0) = {10.0, 0.0};  // high x only: purple, green low
    s.at(2, 2) = {0.0, 10.0};  // high y only: gray
    const Image img = render(s, {0.0, 100.0});
    const auto px = [&](std::size_t i) {
        return std::array<int, 3>{img.rgb[3 * i], img.rgb[3 * i + 1], img.rgb[3 * i + 2]};
    };
    const auto purple = px(0);
    CHECK(purple[0] > 100);
    CHECK(purple[2] > 100);
    CHECK(purple[1] < 50);
    const auto gray = px(8);
    CHECK(gray[0] == 255);
    CHECK(gray[1] == 255);
    CHECK(gray[2] == 255);
    CHECK(px(4) == std::array<int, 3>{0, 0, 0});
}

TEST_CASE("ppm encoding") {
    Image img{2, 1, {1, 2, 3, 4, 5, 6}};
    std::ostringstream out;
    write_ppm(out, img);
    CHECK(out.str() == std::string("P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06", 17));
    CHECK_THROWS_AS(render(LatticeState(3, 3), {50.0, 10.0}), DomainError);
}
