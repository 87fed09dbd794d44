#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "metacdn/model.hpp"
#include "metacdn/net.hpp"

using namespace metacdn;

TEST_CASE("id grammar accepts exactly 4 hex chars and normalizes case", "[model]") {
    CHECK(validate_id("446B") == "446b");
    CHECK(validate_id("0001") == "0001");
    CHECK(validate_id("ffff") == "ffff");
    CHECK(validate_id("ABCD") == "abcd");

    CHECK_FALSE(validate_id("44g1").has_value());
    CHECK_FALSE(validate_id("123").has_value());
    CHECK_FALSE(validate_id("12345").has_value());
    CHECK_FALSE(validate_id("").has_value());
    CHECK_FALSE(validate_id("12 4").has_value());
    CHECK_FALSE(validate_id("-123").has_value());
}

TEST_CASE("validate_id succeeds iff the string matches [0-9a-fA-F]{4}", "[model]") {
    std::mt19937 gen(7);
    auto is_hex = [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    };
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t len = gen() % 7;
        std::string s;
        for (std::size_t i = 0; i < len; ++i)
            s.push_back(static_cast<char>(' ' + gen() % 95));  // printable ascii
        bool expected = s.size() == 4 && is_hex(s[0]) && is_hex(s[1]) && is_hex(s[2]) &&
                        is_hex(s[3]);
        CHECK(validate_id(s).has_value() == expected);
    }
}

TEST_CASE("id index roundtrip covers the whole 16^4 space", "[model]") {
    std::set<std::string> seen;
    for (std::uint32_t i = 0; i < CustomerId::space_size; i += 257) {
        auto id = CustomerId::from_index(static_cast<std::uint16_t>(i));
        CHECK(id.index() == i);
        seen.insert(id.to_string());
    }
    CHECK(seen.size() == (CustomerId::space_size + 256) / 257);
    CHECK(CustomerId::from_index(0).to_string() == "0000");
    CHECK(CustomerId::from_index(0xffff).to_string() == "ffff");
    CHECK(CustomerId::from_index(0x446b).to_string() == "446b");
}

TEST_CASE("metric value ranges", "[model]") {
    CHECK(value_in_range(Metric::latency_ms, 0.1));
    CHECK_FALSE(value_in_range(Metric::latency_ms, 0.0));
    CHECK_FALSE(value_in_range(Metric::latency_ms, -5.0));
    CHECK(value_in_range(Metric::throughput_kbps, 9000));
    CHECK_FALSE(value_in_range(Metric::throughput_kbps, 0));
    CHECK(value_in_range(Metric::availability, 0.0));
    CHECK(value_in_range(Metric::availability, 1.0));
    CHECK_FALSE(value_in_range(Metric::availability, 1.7));
}

TEST_CASE("ipv4 and cidr parsing", "[model]") {
    auto ip = IPv4::parse("203.0.113.9");
    REQUIRE(ip.has_value());
    CHECK(ip->to_string() == "203.0.113.9");
    CHECK(ip->octet(0) == 203);
    CHECK(ip->octet(3) == 9);

    CHECK_FALSE(IPv4::parse("203.0.113").has_value());
    CHECK_FALSE(IPv4::parse("203.0.113.256").has_value());
    CHECK_FALSE(IPv4::parse("a.b.c.d").has_value());
    CHECK_FALSE(IPv4::parse("1.2.3.4.5").has_value());

    auto cidr = Cidr::parse("203.0.113.0/24");
    REQUIRE(cidr.has_value());
    CHECK(cidr->contains(*IPv4::parse("203.0.113.77")));
    CHECK_FALSE(cidr->contains(*IPv4::parse("203.0.114.1")));
    CHECK(cidr->to_string() == "203.0.113.0/24");
    CHECK_FALSE(Cidr::parse("203.0.113.0/33").has_value());

    auto all = Cidr::parse("0.0.0.0/0");
    REQUIRE(all.has_value());
    CHECK(all->contains(*IPv4::parse("255.255.255.255")));
}
