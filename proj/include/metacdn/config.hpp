#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metacdn/geo.hpp"
#include "metacdn/model.hpp"
#include "metacdn/radar.hpp"
#include "metacdn/sentinel.hpp"
#include "metacdn/util.hpp"

namespace metacdn {

/// Everything the edge needs to answer queries for one zone: platform
/// registry, per-app routing configs, and the client-location table.
/// Immutable once loaded; reloads swap the whole snapshot.
struct Deployment {
    std::string zone;  // lowercase, no trailing dot
    std::map<std::string, Platform> platforms;
    std::map<std::pair<CustomerId, AppId>, AppConfig> apps;
    GeoTable geo;
    std::uint32_t negative_ttl_s = 30;
    radar::RadarConfig radar;
    sentinel::SentinelConfig sentinel;
    std::string fusion_feed_path;

    const AppConfig* find_app(const CustomerId& customer, const AppId& app) const {
        auto it = apps.find({customer, app});
        return it == apps.end() ? nullptr : &it->second;
    }
};

namespace config_detail {

using Fail = Expected<Deployment, std::string>;

inline Expected<Platform, std::string> parse_platform(const nlohmann::json& j) {
    using PFail = Expected<Platform, std::string>;
    Platform p;
    p.alias = j.value("alias", std::string{});
    if (p.alias.empty()) return PFail::failure("platform alias must be non-empty");
    auto kind = platform_kind_from(j.value("kind", "cdn"));
    if (!kind) return PFail::failure("platform '" + p.alias + "': unknown kind");
    p.kind = *kind;
    p.answer_ttl_s = j.value("answer_ttl_s", 60u);
    if (j.contains("cname_target")) {
        auto target = j.at("cname_target").get<std::string>();
        if (target.empty()) return PFail::failure("platform '" + p.alias + "': empty target");
        p.target = to_lower(target);
    } else if (j.contains("a_records")) {
        std::vector<IPv4> ips;
        for (const auto& s : j.at("a_records")) {
            auto ip = IPv4::parse(s.get<std::string>());
            if (!ip) return PFail::failure("platform '" + p.alias + "': bad address");
            ips.push_back(*ip);
        }
        if (ips.empty()) return PFail::failure("platform '" + p.alias + "': empty target");
        p.target = std::move(ips);
    } else {
        return PFail::failure("platform '" + p.alias + "': needs cname_target or a_records");
    }
    return p;
}

inline Expected<PolicySpec, std::string> parse_policy(const nlohmann::json& j) {
    using PFail = Expected<PolicySpec, std::string>;
    PolicySpec spec;
    auto kind = policy_kind_from(j.value("kind", ""));
    if (!kind) return PFail::failure("unknown policy kind '" + j.value("kind", "") + "'");
    spec.kind = *kind;
    if (spec.kind == PolicyKind::rules) {
        if (!j.contains("rules")) return PFail::failure("rules policy needs a 'rules' array");
        auto prog = rules::RuleProgram::from_json(j.at("rules"));
        if (!prog) return PFail::failure(prog.error());
        spec.rules = std::move(*prog);
    } else if (j.contains("rules")) {
        return PFail::failure("'rules' only allowed with kind=rules");
    }
    return spec;
}

inline std::optional<std::string> parse_radar(const nlohmann::json& j, radar::RadarConfig& out) {
    out.delay_ms = j.value("delay_ms", radar::DEFAULT_PROBE_DELAY_MS);
    out.community = j.value("community", true);
    out.window = seconds(j.value("window_s", 600));
    out.min_count = j.value("min_count", std::size_t{3});
    if (j.contains("probes")) {
        out.probes.clear();
        for (const auto& pj : j.at("probes")) {
            radar::ProbeSpec spec;
            spec.platform = pj.at("platform").get<std::string>();
            if (pj.contains("owner")) {
                auto owner = CustomerId::parse(pj.at("owner").get<std::string>());
                if (!owner) return "radar probe for '" + spec.platform + "': bad owner id";
                spec.owner = *owner;
            }
            if (pj.contains("kinds")) {
                spec.kinds.clear();
                for (const auto& kj : pj.at("kinds")) {
                    auto kind = radar::probe_kind_from(kj.get<std::string>());
                    if (!kind) return "radar probe for '" + spec.platform + "': unknown kind";
                    spec.kinds.push_back(*kind);
                }
            }
            out.probes.push_back(std::move(spec));
        }
    }
    return std::nullopt;
}

inline void parse_sentinel(const nlohmann::json& j, sentinel::SentinelConfig& out) {
    out.baseline_window = seconds(j.value("baseline_window_s", out.baseline_window.ms / 1000));
    out.current_window = seconds(j.value("current_window_s", out.current_window.ms / 1000));
    out.confirm_after = seconds(j.value("confirm_after_s", out.confirm_after.ms / 1000));
    out.close_after = seconds(j.value("close_after_s", out.close_after.ms / 1000));
    out.min_corroboration = j.value("min_corroboration", out.min_corroboration);
    out.min_baseline_count = j.value("min_baseline_count", out.min_baseline_count);
    auto ladder = [&](const char* key, sentinel::SeverityLadder& l) {
        if (!j.contains(key)) return;
        const auto& lj = j.at(key);
        l.minor = lj.value("minor", l.minor);
        l.medium = lj.value("medium", l.medium);
        l.major = lj.value("major", l.major);
    };
    ladder("rtt_ladder", out.rtt_ladder);
    ladder("throughput_ladder", out.throughput_ladder);
    ladder("availability_ladder", out.availability_ladder);
    auto variance = [&](const char* key, sentinel::VarianceThresholds& v) {
        if (!j.contains(key)) return;
        const auto& vj = j.at(key);
        v.minor = vj.value("minor", v.minor);
        v.medium = vj.value("medium", v.medium);
        v.major = vj.value("major", v.major);
    };
    variance("rtt_variance", out.rtt_variance);
    variance("throughput_variance", out.throughput_variance);
    variance("availability_variance", out.availability_variance);
}

}  // namespace config_detail

inline Expected<Deployment, std::string> load_deployment(const nlohmann::json& j,
                                                         const std::string& base_dir = ".") {
    using config_detail::Fail;
    Deployment d;
    try {
        d.zone = to_lower(j.at("zone").get<std::string>());
        if (d.zone.empty()) return Fail::failure("zone must be non-empty");
        if (d.zone.back() == '.') d.zone.pop_back();
        d.negative_ttl_s = j.value("negative_ttl_s", 30u);

        for (const auto& pj : j.value("platforms", nlohmann::json::array())) {
            auto platform = config_detail::parse_platform(pj);
            if (!platform) return Fail::failure(platform.error());
            if (d.platforms.contains(platform->alias))
                return Fail::failure("duplicate platform alias '" + platform->alias + "'");
            d.platforms.emplace(platform->alias, std::move(*platform));
        }

        for (const auto& cj : j.value("customers", nlohmann::json::array())) {
            auto cid = CustomerId::parse(cj.at("id").get<std::string>());
            if (!cid) return Fail::failure("bad customer id '" + cj.at("id").get<std::string>() + "'");
            for (const auto& aj : cj.value("apps", nlohmann::json::array())) {
                auto aid = AppId::parse(aj.at("id").get<std::string>());
                if (!aid) return Fail::failure("bad app id for customer " + cid->to_string());
                AppConfig app;
                app.customer = *cid;
                app.app = *aid;
                auto policy = config_detail::parse_policy(aj.at("policy"));
                if (!policy)
                    return Fail::failure("app " + cid->to_string() + "-" + aid->to_string() +
                                         ": " + policy.error());
                app.policy = std::move(*policy);
                app.cname_ttl_s = aj.value("cname_ttl_s", 20u);
                if (app.cname_ttl_s < 1)
                    return Fail::failure("app " + cid->to_string() + "-" + aid->to_string() +
                                         ": cname_ttl_s must be >= 1");
                std::set<std::string> seen;
                for (const auto& cand : aj.at("candidates")) {
                    auto alias = cand.get<std::string>();
                    if (!d.platforms.contains(alias))
                        return Fail::failure("app " + cid->to_string() + "-" + aid->to_string() +
                                             ": unknown candidate '" + alias + "'");
                    if (!seen.insert(alias).second)
                        return Fail::failure("app " + cid->to_string() + "-" + aid->to_string() +
                                             ": duplicate candidate '" + alias + "'");
                    app.candidates.push_back(alias);
                }
                if (app.candidates.empty())
                    return Fail::failure("app " + cid->to_string() + "-" + aid->to_string() +
                                         ": candidates must be non-empty");
                if (app.policy.rules) {
                    if (auto err = app.policy.rules->check_against(app.candidates))
                        return Fail::failure("app " + cid->to_string() + "-" +
                                             aid->to_string() + ": " + *err);
                }
                auto key = std::make_pair(*cid, *aid);
                if (d.apps.contains(key))
                    return Fail::failure("duplicate app " + cid->to_string() + "-" +
                                         aid->to_string());
                d.apps.emplace(key, std::move(app));
            }
        }

        if (j.contains("geo_table")) {
            auto path = j.at("geo_table").get<std::string>();
            if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
            auto table = GeoTable::load(path);
            if (!table) return Fail::failure(table.error());
            d.geo = std::move(*table);
        }
        for (const auto& gj : j.value("geo", nlohmann::json::array())) {
            auto cidr = Cidr::parse(gj.at("cidr").get<std::string>());
            if (!cidr) return Fail::failure("bad geo cidr");
            d.geo.add(*cidr, gj.value("asn", 0u), gj.value("country", std::string{}));
        }

        if (j.contains("radar")) {
            if (auto err = config_detail::parse_radar(j.at("radar"), d.radar))
                return Fail::failure(*err);
        }
        if (d.radar.probes.empty()) {
            for (const auto& [alias, platform] : d.platforms)
                d.radar.probes.push_back({alias, std::nullopt, {radar::ProbeKind::latency}});
        }
        for (const auto& spec : d.radar.probes)
            if (!d.platforms.contains(spec.platform))
                return Fail::failure("radar probe references unknown platform '" +
                                     spec.platform + "'");

        if (j.contains("sentinel")) config_detail::parse_sentinel(j.at("sentinel"), d.sentinel);
        if (j.contains("fusion_feed")) {
            d.fusion_feed_path = j.at("fusion_feed").get<std::string>();
            if (!d.fusion_feed_path.empty() && d.fusion_feed_path.front() != '/')
                d.fusion_feed_path = base_dir + "/" + d.fusion_feed_path;
        }
    } catch (const nlohmann::json::exception& e) {
        return Fail::failure(std::string("config: ") + e.what());
    }
    return d;
}

inline Expected<Deployment, std::string> load_deployment_file(const std::string& path) {
    using config_detail::Fail;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const std::exception& e) {
        return Fail::failure(path + ": " + e.what());
    }
    auto slash = path.find_last_of('/');
    std::string base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
    return load_deployment(j, base_dir);
}

}  // namespace metacdn
