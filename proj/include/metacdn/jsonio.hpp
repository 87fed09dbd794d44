#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "metacdn/model.hpp"

namespace metacdn {

// Line-oriented JSON shapes shared by the report log, the probe beacon body,
// and the simulator log.

inline nlohmann::json to_json(const ClientContext& ctx) {
    nlohmann::json j{{"resolver_ip", ctx.resolver_ip.to_string()},
                     {"asn", ctx.asn},
                     {"country", ctx.country}};
    if (ctx.ecs_subnet) j["ecs"] = ctx.ecs_subnet->to_string();
    return j;
}

inline Expected<ClientContext, std::string> client_context_from_json(const nlohmann::json& j) {
    using Fail = Expected<ClientContext, std::string>;
    ClientContext ctx;
    try {
        auto ip = IPv4::parse(j.at("resolver_ip").get<std::string>());
        if (!ip) return Fail::failure("bad resolver_ip");
        ctx.resolver_ip = *ip;
        ctx.asn = j.value("asn", 0u);
        ctx.country = j.value("country", std::string{});
        if (j.contains("ecs")) {
            auto cidr = Cidr::parse(j.at("ecs").get<std::string>());
            if (!cidr) return Fail::failure("bad ecs subnet");
            ctx.ecs_subnet = *cidr;
        }
    } catch (const nlohmann::json::exception& e) {
        return Fail::failure(e.what());
    }
    return ctx;
}

inline nlohmann::json to_json(const ProbeReport& report) {
    return {{"platform", report.platform},
            {"metric", std::string(to_string(report.metric))},
            {"value", report.value},
            {"client", to_json(report.client)},
            {"ts", report.timestamp.ms}};
}

inline Expected<ProbeReport, std::string> probe_report_from_json(const nlohmann::json& j) {
    using Fail = Expected<ProbeReport, std::string>;
    ProbeReport report;
    try {
        report.platform = j.at("platform").get<std::string>();
        auto metric = metric_from(j.at("metric").get<std::string>());
        if (!metric) return Fail::failure("unknown metric");
        report.metric = *metric;
        report.value = j.at("value").get<double>();
        auto ctx = client_context_from_json(j.at("client"));
        if (!ctx) return Fail::failure(ctx.error());
        report.client = *ctx;
        report.timestamp = Instant{j.value("ts", std::int64_t{0})};
    } catch (const nlohmann::json::exception& e) {
        return Fail::failure(e.what());
    }
    return report;
}

}  // namespace metacdn
