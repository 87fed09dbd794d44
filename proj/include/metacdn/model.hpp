#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metacdn/net.hpp"
#include "metacdn/rules.hpp"
#include "metacdn/time.hpp"

namespace metacdn {

namespace detail {
inline std::optional<char> hex_lower(char c) {
    if (c >= '0' && c <= '9') return c;
    if (c >= 'a' && c <= 'f') return c;
    if (c >= 'A' && c <= 'F') return static_cast<char>(c - 'A' + 'a');
    return std::nullopt;
}
}  // namespace detail

/// Four lowercase hex characters. Customer and application identifiers share
/// this grammar but are distinct types (the Tag parameter keeps them from
/// being mixed up).
template <class Tag>
class HexId {
public:
    static constexpr std::size_t length = 4;
    static constexpr std::uint32_t space_size = 65'536;  // 16^4

    /// Normalizes case; rejects anything that is not exactly 4 hex chars.
    static std::optional<HexId> parse(std::string_view raw) {
        if (raw.size() != length) return std::nullopt;
        HexId id;
        for (std::size_t i = 0; i < length; ++i) {
            auto c = detail::hex_lower(raw[i]);
            if (!c) return std::nullopt;
            id.chars_[i] = *c;
        }
        return id;
    }

    static HexId from_index(std::uint16_t index) {
        static constexpr char digits[] = "0123456789abcdef";
        HexId id;
        for (std::size_t i = 0; i < length; ++i)
            id.chars_[i] = digits[(index >> (12 - 4 * i)) & 0xf];
        return id;
    }

    std::uint16_t index() const {
        std::uint16_t v = 0;
        for (char c : chars_) {
            v = static_cast<std::uint16_t>(v << 4);
            v = static_cast<std::uint16_t>(v | (c <= '9' ? c - '0' : c - 'a' + 10));
        }
        return v;
    }

    std::string_view str() const { return {chars_.data(), length}; }
    std::string to_string() const { return std::string(str()); }

    friend auto operator<=>(const HexId&, const HexId&) = default;

private:
    std::array<char, length> chars_{'0', '0', '0', '0'};
};

using CustomerId = HexId<struct CustomerIdTag>;
using AppId = HexId<struct AppIdTag>;

enum class PlatformKind { cdn, cloud, origin };

inline std::string_view to_string(PlatformKind k) {
    switch (k) {
        case PlatformKind::cdn: return "cdn";
        case PlatformKind::cloud: return "cloud";
        case PlatformKind::origin: return "origin";
    }
    return "?";
}

inline std::optional<PlatformKind> platform_kind_from(std::string_view s) {
    if (s == "cdn") return PlatformKind::cdn;
    if (s == "cloud") return PlatformKind::cloud;
    if (s == "origin") return PlatformKind::origin;
    return std::nullopt;
}

/// A delivery backend: either a hostname we hand out via CNAME or a set of
/// addresses answered directly.
struct Platform {
    std::string alias;
    PlatformKind kind = PlatformKind::cdn;
    std::variant<std::string, std::vector<IPv4>> target;  // cname target | A set
    std::uint32_t answer_ttl_s = 60;

    bool is_cname() const { return target.index() == 0; }
    const std::string& cname_target() const { return std::get<0>(target); }
    const std::vector<IPv4>& addresses() const { return std::get<1>(target); }
};

enum class PolicyKind { optimal_rtt, round_robin, throughput, static_route, rules };

inline std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::optimal_rtt: return "optimal_rtt";
        case PolicyKind::round_robin: return "round_robin";
        case PolicyKind::throughput: return "throughput";
        case PolicyKind::static_route: return "static";
        case PolicyKind::rules: return "rules";
    }
    return "?";
}

inline std::optional<PolicyKind> policy_kind_from(std::string_view s) {
    if (s == "optimal_rtt") return PolicyKind::optimal_rtt;
    if (s == "round_robin") return PolicyKind::round_robin;
    if (s == "throughput") return PolicyKind::throughput;
    if (s == "static") return PolicyKind::static_route;
    if (s == "rules") return PolicyKind::rules;
    return std::nullopt;
}

struct PolicySpec {
    PolicyKind kind = PolicyKind::static_route;
    std::optional<rules::RuleProgram> rules;  // present iff kind == rules
};

/// One routing profile of a customer: candidate platforms plus the policy
/// choosing among them. cname_ttl_s is the TTL of our own answer.
struct AppConfig {
    CustomerId customer;
    AppId app;
    PolicySpec policy;
    std::vector<std::string> candidates;
    std::uint32_t cname_ttl_s = 20;
};

/// Where a query or report came from, as far as we can tell.
struct ClientContext {
    IPv4 resolver_ip;
    std::optional<Cidr> ecs_subnet;
    std::uint32_t asn = 0;
    std::string country;
};

enum class Metric { latency_ms, throughput_kbps, availability };

inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::latency_ms: return "latency_ms";
        case Metric::throughput_kbps: return "throughput_kbps";
        case Metric::availability: return "availability";
    }
    return "?";
}

inline std::optional<Metric> metric_from(std::string_view s) {
    if (s == "latency_ms") return Metric::latency_ms;
    if (s == "throughput_kbps") return Metric::throughput_kbps;
    if (s == "availability") return Metric::availability;
    return std::nullopt;
}

/// One real-user measurement sample.
struct ProbeReport {
    std::string platform;
    Metric metric = Metric::latency_ms;
    double value = 0;
    ClientContext client;
    Instant timestamp;
};

/// Range check per metric: latency and throughput strictly positive,
/// availability within [0,1].
inline bool value_in_range(Metric metric, double value) {
    switch (metric) {
        case Metric::latency_ms:
        case Metric::throughput_kbps: return value > 0;
        case Metric::availability: return value >= 0 && value <= 1;
    }
    return false;
}

/// validate_id: accepts a raw string for either id kind, returning the
/// normalized lowercase form. Both ids share the grammar, so validation is
/// expressed once here.
inline std::optional<std::string> validate_id(std::string_view raw) {
    auto id = CustomerId::parse(raw);
    if (!id) return std::nullopt;
    return id->to_string();
}

}  // namespace metacdn
