#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metacdn/config.hpp"
#include "metacdn/dns/wire.hpp"
#include "metacdn/fusion.hpp"
#include "metacdn/model.hpp"
#include "metacdn/openmix.hpp"

namespace metacdn::dns {

inline constexpr std::string_view PORTAL_PREFIX = "2-01";

/// "2-01-{customer}-{app}.{zone}", always lowercase.
inline std::string encode_portal_name(const CustomerId& customer, const AppId& app,
                                      std::string_view zone) {
    std::string out;
    out.reserve(PORTAL_PREFIX.size() + 10 + zone.size() + 2);
    out += PORTAL_PREFIX;
    out += '-';
    out += customer.str();
    out += '-';
    out += app.str();
    out += '.';
    out += to_lower(zone);
    if (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

enum class PortalError { not_ours, malformed };

/// Inverse of encode_portal_name for the given zone. Matching is
/// case-insensitive; ids come back normalized.
inline Expected<std::pair<CustomerId, AppId>, PortalError> decode_portal_name(
    std::string_view name, std::string_view zone) {
    using Fail = Expected<std::pair<CustomerId, AppId>, PortalError>;
    std::string lname = to_lower(name);
    std::string lzone = to_lower(zone);
    if (!lname.empty() && lname.back() == '.') lname.pop_back();
    if (!lzone.empty() && lzone.back() == '.') lzone.pop_back();
    if (lname.size() <= lzone.size() + 1 || !lname.ends_with(lzone) ||
        lname[lname.size() - lzone.size() - 1] != '.')
        return Fail::failure(PortalError::not_ours);
    std::string_view label(lname.data(), lname.size() - lzone.size() - 1);
    if (label.find('.') != std::string_view::npos) return Fail::failure(PortalError::malformed);
    // label must be exactly 2-01-xxxx-yyyy
    auto parts = split(label, '-');
    if (parts.size() != 4 || parts[0] != "2" || parts[1] != "01")
        return Fail::failure(PortalError::malformed);
    auto customer = CustomerId::parse(parts[2]);
    auto app = AppId::parse(parts[3]);
    if (!customer || !app) return Fail::failure(PortalError::malformed);
    return std::make_pair(*customer, *app);
}

/// Structured answer before wire encoding: CNAME when the platform target is
/// a hostname, A set otherwise. TTL is always the app's own cname_ttl_s.
struct DnsAnswer {
    std::string name;
    std::uint16_t rtype = TYPE_A;
    std::uint32_t ttl_s = 0;
    std::variant<std::string, std::vector<IPv4>> data;
    RCode rcode = RCode::noerror;
};

inline Expected<DnsAnswer, std::string> build_answer(const std::string& decision,
                                                     const AppConfig& app,
                                                     const std::map<std::string, Platform>& registry) {
    using Fail = Expected<DnsAnswer, std::string>;
    auto it = registry.find(decision);
    if (it == registry.end())
        return Fail::failure("decision '" + decision + "' not in platform registry");
    const Platform& platform = it->second;
    DnsAnswer answer;
    answer.ttl_s = app.cname_ttl_s;
    if (platform.is_cname()) {
        answer.rtype = TYPE_CNAME;
        answer.data = platform.cname_target();
    } else {
        answer.rtype = TYPE_A;
        answer.data = platform.addresses();
    }
    return answer;
}

/// Fired once per answered portal query; lets a harness trace routing
/// decisions without re-parsing wire bytes.
struct DecisionTrace {
    Instant at;
    ClientContext ctx;
    CustomerId customer;
    AppId app;
    openmix::Decision decision;
};
using DecisionObserver = std::function<void(const DecisionTrace&)>;

/// Authoritative server for the meta-CDN zone. Holds an immutable deployment
/// snapshot; all mutable routing state lives in the policy engine and the
/// stats providers, so handle_query is safe to call concurrently.
class DnsEdge {
public:
    using StatsProvider = std::function<std::shared_ptr<const openmix::StatsView>()>;
    using FusionProvider = std::function<std::shared_ptr<const fusion::FusionView>()>;

    explicit DnsEdge(std::shared_ptr<const Deployment> deployment,
                     StatsProvider stats = nullptr, FusionProvider fusion = nullptr)
        : deployment_(std::move(deployment)),
          engine_(openmix::EngineConfig{}),
          stats_(std::move(stats)),
          fusion_(std::move(fusion)) {}

    void set_decision_observer(DecisionObserver observer) { observer_ = std::move(observer); }

    /// Swap in a new config snapshot; in-flight queries keep the old one.
    void reload(std::shared_ptr<const Deployment> deployment) {
        std::atomic_store(&deployment_, std::move(deployment));
    }

    /// One response datagram per query datagram, always.
    std::vector<std::uint8_t> handle_query(std::span<const std::uint8_t> packet, IPv4 source,
                                           Instant now) {
        auto deployment = std::atomic_load(&deployment_);
        auto parsed = parse(packet);
        if (!parsed) return error_response(packet, RCode::formerr);
        Message& query = *parsed;
        if (query.qr || query.opcode != 0)
            return encode(make_response(query, query.opcode ? RCode::notimp : RCode::formerr));
        if (query.questions.size() != 1)
            return encode(make_response(query, RCode::formerr));
        const Question& q = query.questions[0];
        if (q.qclass != CLASS_IN) return encode(make_response(query, RCode::refused));

        auto decoded = decode_portal_name(q.name, deployment->zone);
        if (!decoded) {
            if (decoded.error() == PortalError::not_ours &&
                !in_zone(q.name, deployment->zone))
                return encode(make_response(query, RCode::refused));
            return encode(nxdomain(query, *deployment));
        }
        const AppConfig* app = deployment->find_app(decoded->first, decoded->second);
        if (!app) return encode(nxdomain(query, *deployment));

        Message response = make_response(query, RCode::noerror);
        response.aa = true;
        if (q.qtype != TYPE_A && q.qtype != TYPE_AAAA && q.qtype != TYPE_CNAME)
            return encode(response);  // known name, no data for that type

        ClientContext ctx = derive_context(query, source, *deployment);
        auto stats = stats_ ? stats_() : nullptr;
        auto fusion_view = fusion_ ? fusion_() : nullptr;
        static const openmix::StatsView empty_stats;
        static const fusion::FusionView empty_fusion;
        openmix::Decision decision =
            engine_.evaluate(*app, ctx, stats ? *stats : empty_stats,
                             fusion_view ? *fusion_view : empty_fusion, now);

        auto answer = build_answer(decision.chosen, *app, deployment->platforms);
        if (!answer) return encode(make_response(query, RCode::servfail));

        if (answer->rtype == TYPE_CNAME) {
            response.answers.push_back(
                ResourceRecord::cname(q.name, answer->ttl_s, std::get<std::string>(answer->data)));
        } else if (q.qtype == TYPE_A || q.qtype == TYPE_CNAME) {
            // address-list platform answers A queries; a CNAME query for it
            // yields NODATA below
            if (q.qtype == TYPE_A)
                for (IPv4 ip : std::get<std::vector<IPv4>>(answer->data))
                    response.answers.push_back(ResourceRecord::a(q.name, answer->ttl_s, ip));
        }
        // AAAA for an address-list platform: NODATA (v4-only zone)

        if (observer_)
            observer_({now, ctx, decoded->first, decoded->second, decision});

        return encode_bounded(response);
    }

    openmix::Engine& engine() { return engine_; }
    std::shared_ptr<const Deployment> deployment() const {
        return std::atomic_load(&deployment_);
    }

private:
    static bool in_zone(std::string_view name, std::string_view zone) {
        std::string lname = to_lower(name);
        if (!lname.empty() && lname.back() == '.') lname.pop_back();
        if (lname == zone) return true;
        return lname.size() > zone.size() && lname.ends_with(zone) &&
               lname[lname.size() - zone.size() - 1] == '.';
    }

    static Message make_response(const Message& query, RCode rcode) {
        Message r;
        r.id = query.id;
        r.qr = true;
        r.rd = query.rd;
        r.rcode = rcode;
        r.questions = query.questions;
        if (query.has_opt) {
            r.has_opt = true;
            r.opt_udp_size = MAX_UDP_PAYLOAD;
            if (query.ecs) {
                EcsOption echo = *query.ecs;
                echo.scope_prefix = 24;  // fixed response scope for IPv4
                r.ecs = echo;
            }
        }
        return r;
    }

    Message nxdomain(const Message& query, const Deployment& deployment) const {
        Message r = make_response(query, RCode::nxdomain);
        r.aa = true;
        SoaData soa;
        soa.mname = "ns." + deployment.zone;
        soa.rname = "hostmaster." + deployment.zone;
        soa.minimum = deployment.negative_ttl_s;
        ResourceRecord rr;
        rr.name = deployment.zone;
        rr.rtype = TYPE_SOA;
        rr.ttl = deployment.negative_ttl_s;
        rr.data = soa;
        r.authorities.push_back(std::move(rr));
        return r;
    }

    static ClientContext derive_context(const Message& query, IPv4 source,
                                        const Deployment& deployment) {
        ClientContext ctx;
        ctx.resolver_ip = source;
        IPv4 locate = source;
        if (query.ecs && query.ecs->family == 1 && query.ecs->source_prefix > 0) {
            Cidr subnet{query.ecs->address, query.ecs->source_prefix};
            ctx.ecs_subnet = subnet;
            locate = query.ecs->address;
        }
        if (auto entry = deployment.geo.lookup(locate)) {
            ctx.asn = entry->asn;
            ctx.country = entry->country;
        }
        return ctx;
    }

    /// Keeps responses within the UDP payload bound: oversized answers are
    /// emptied and flagged truncated.
    static std::vector<std::uint8_t> encode_bounded(Message& response) {
        auto wire = encode(response);
        if (wire.size() <= MAX_UDP_PAYLOAD) return wire;
        response.tc = true;
        response.answers.clear();
        response.authorities.clear();
        return encode(response);
    }

    /// Unparseable input: echo the id if at least the header prefix arrived.
    static std::vector<std::uint8_t> error_response(std::span<const std::uint8_t> packet,
                                                    RCode rcode) {
        Message r;
        if (packet.size() >= 2)
            r.id = static_cast<std::uint16_t>((packet[0] << 8) | packet[1]);
        r.qr = true;
        r.rcode = rcode;
        return encode(r);
    }

    std::shared_ptr<const Deployment> deployment_;
    openmix::Engine engine_;
    StatsProvider stats_;
    FusionProvider fusion_;
    DecisionObserver observer_;
};

}  // namespace metacdn::dns
