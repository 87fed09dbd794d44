#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "metacdn/dns/wire.hpp"

#include "dns_golden_vectors.hpp"

using namespace metacdn;
using namespace metacdn::dns;

namespace {

std::vector<std::uint8_t> bytes(std::span<const std::uint8_t> s) {
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("name encoding", "[dns-wire]") {
    std::vector<std::uint8_t> out;
    REQUIRE(detail::encode_name(out, "gw.cdna.test"));
    std::vector<std::uint8_t> expected = {2, 'g', 'w', 4, 'c', 'd', 'n', 'a',
                                          4, 't', 'e', 's', 't', 0};
    CHECK(out == expected);

    out.clear();
    REQUIRE(detail::encode_name(out, ""));
    CHECK(out == std::vector<std::uint8_t>{0});

    out.clear();
    REQUIRE(detail::encode_name(out, "trailing.dot."));
    CHECK(out.size() == 1 + 8 + 1 + 3 + 1);

    out.clear();
    CHECK_FALSE(detail::encode_name(out, "a..b"));  // empty label
    std::string long_label(64, 'x');
    out.clear();
    CHECK_FALSE(detail::encode_name(out, long_label + ".test"));
}

TEST_CASE("message roundtrip through encode/parse", "[dns-wire]") {
    Message m;
    m.id = 0xabcd;
    m.qr = true;
    m.aa = true;
    m.rd = true;
    m.questions.push_back({"www.Example.test", TYPE_A, CLASS_IN});
    m.answers.push_back(ResourceRecord::cname("www.Example.test", 20, "edge.cdn.test"));
    m.answers.push_back(ResourceRecord::a("edge.cdn.test", 60, *IPv4::parse("192.0.2.1")));

    auto wire = encode(m);
    auto parsed = parse(wire);
    REQUIRE(parsed.ok());
    CHECK(parsed->id == m.id);
    CHECK(parsed->qr);
    CHECK(parsed->aa);
    CHECK(parsed->rd);
    REQUIRE(parsed->questions.size() == 1);
    CHECK(parsed->questions[0].name == "www.Example.test");  // casing preserved
    REQUIRE(parsed->answers.size() == 2);
    CHECK(parsed->answers[0].name == "www.Example.test");  // compression resolved
    CHECK(std::get<std::string>(parsed->answers[0].data) == "edge.cdn.test");
    CHECK(parsed->answers[0].ttl == 20);
    CHECK(std::get<IPv4>(parsed->answers[1].data).to_string() == "192.0.2.1");
}

TEST_CASE("parse rejects malformed packets", "[dns-wire]") {
    std::vector<std::uint8_t> empty;
    CHECK_FALSE(parse(empty).ok());

    std::vector<std::uint8_t> short_header = {0x12, 0x34, 0x00};
    CHECK_FALSE(parse(short_header).ok());

    // header promises a question that is not there
    std::vector<std::uint8_t> no_question = {0x12, 0x34, 0x01, 0x00, 0x00, 0x01,
                                             0x00, 0x00, 0x00, 0x00, 0x00, 0x00};
    CHECK_FALSE(parse(no_question).ok());

    // compression pointer loop
    std::vector<std::uint8_t> loop = {0x12, 0x34, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00,
                                      0x00, 0x00, 0x00, 0x00, 0xc0, 0x0c, 0x00, 0x01,
                                      0x00, 0x01};
    CHECK_FALSE(parse(loop).ok());
}

TEST_CASE("ecs option roundtrip", "[dns-wire]") {
    Message m;
    m.id = 7;
    m.questions.push_back({"x.test", TYPE_A, CLASS_IN});
    m.has_opt = true;
    m.opt_udp_size = 4096;
    m.ecs = EcsOption{1, 24, 0, *IPv4::parse("203.0.113.0")};

    auto wire = encode(m);
    auto parsed = parse(wire);
    REQUIRE(parsed.ok());
    REQUIRE(parsed->has_opt);
    CHECK(parsed->opt_udp_size == 4096);
    REQUIRE(parsed->ecs.has_value());
    CHECK(parsed->ecs->family == 1);
    CHECK(parsed->ecs->source_prefix == 24);
    CHECK(parsed->ecs->scope_prefix == 0);
    CHECK(parsed->ecs->address.to_string() == "203.0.113.0");
}

TEST_CASE("encoder output matches the frozen reference vectors", "[dns-wire]") {
    // query side: our encoder must reproduce the reference queries
    {
        Message q;
        q.id = 0x1234;
        q.rd = true;
        q.questions.push_back({"2-01-446b-0004.cdx.metacdn.test", TYPE_A, CLASS_IN});
        CHECK(encode(q) == bytes(golden::cname_query));
    }
    {
        Message q;
        q.id = 0x4242;
        q.rd = true;
        q.questions.push_back({"2-01-446b-0004.cdx.metacdn.test", TYPE_A, CLASS_IN});
        q.has_opt = true;
        q.opt_udp_size = 4096;
        q.ecs = EcsOption{1, 24, 0, *IPv4::parse("203.0.113.0")};
        CHECK(encode(q) == bytes(golden::ecs_query));
    }
    // response side: structural encode matches the reference responses
    {
        Message r;
        r.id = 0x1234;
        r.qr = r.aa = r.rd = true;
        r.questions.push_back({"2-01-446b-0004.cdx.metacdn.test", TYPE_A, CLASS_IN});
        r.answers.push_back(
            ResourceRecord::cname("2-01-446b-0004.cdx.metacdn.test", 20, "gw.cdna.test"));
        CHECK(encode(r) == bytes(golden::cname_response));
    }
    {
        Message r;
        r.id = 0xbeef;
        r.qr = r.aa = r.rd = true;
        r.rcode = RCode::nxdomain;
        r.questions.push_back({"nope.cdx.metacdn.test", TYPE_A, CLASS_IN});
        ResourceRecord soa;
        soa.name = "cdx.metacdn.test";
        soa.rtype = TYPE_SOA;
        soa.ttl = 30;
        soa.data = SoaData{"ns.cdx.metacdn.test", "hostmaster.cdx.metacdn.test",
                           1, 3600, 600, 86400, 30};
        r.authorities.push_back(std::move(soa));
        CHECK(encode(r) == bytes(golden::nxdomain_response));
    }
}
