#include <doctest.h>

#include <set>

#include "wpl/rng.hpp"

using wpl::Philox4x32;

TEST_SUITE("rng") {
    TEST_CASE("Philox4x32-10 known answers") {
        CHECK(Philox4x32::apply({0, 0, 0, 0}, {0, 0}) ==
              Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
        CHECK(Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
              Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
        CHECK(Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
              Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    }

    TEST_CASE("streams are reproducible and distinct") {
        wpl::CounterStream a(1, 0), b(1, 0), c(1, 1), d(2, 0);
        std::set<std::uint64_t> seen;
        for (int i = 0; i < 100; ++i) {
            const auto x = a.next_u64();
            CHECK(x == b.next_u64());
            seen.insert(x);
            seen.insert(c.next_u64());
            seen.insert(d.next_u64());
        }
        CHECK(seen.size() == 300);
    }

    TEST_CASE("unit and bounded ranges") {
        wpl::CounterStream s(9, 4);
        for (int i = 0; i < 10000; ++i) {
            const double u = s.unit();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
            CHECK(s.bounded(6) < 6u);
        }
        CHECK(s.bounded(1) == 0u);
    }
}
