#pragma once

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "metacdn/jsonio.hpp"
#include "metacdn/model.hpp"
#include "metacdn/openmix.hpp"
#include "metacdn/util.hpp"

namespace metacdn::radar {

// Community measurement pipeline: instructions out, beacons in, rolling
// medians out. The probe objects mirror the real protocol: a tiny fixed-size
// object times the request path, a larger one exercises throughput.

inline constexpr std::size_t LATENCY_OBJECT_BYTES = 43;
inline constexpr std::size_t THROUGHPUT_OBJECT_BYTES = 100'000;
inline constexpr int DEFAULT_PROBE_DELAY_MS = 2'000;

enum class ProbeKind { latency, throughput, availability };

inline std::string_view to_string(ProbeKind k) {
    switch (k) {
        case ProbeKind::latency: return "latency";
        case ProbeKind::throughput: return "throughput";
        case ProbeKind::availability: return "availability";
    }
    return "?";
}

inline std::optional<ProbeKind> probe_kind_from(std::string_view s) {
    if (s == "latency") return ProbeKind::latency;
    if (s == "throughput") return ProbeKind::throughput;
    if (s == "availability") return ProbeKind::availability;
    return std::nullopt;
}

/// Deterministic probe payload; latency probes are exactly 43 bytes,
/// throughput probes exactly 100 000 bytes. Availability probes reuse the
/// latency object (success/failure is the signal).
inline const std::string& probe_object(ProbeKind kind) {
    static const std::string latency_body = [] {
        std::string b = "metacdn-radar-latency-probe-object-v1";
        while (b.size() < LATENCY_OBJECT_BYTES) b.push_back('.');
        return b.substr(0, LATENCY_OBJECT_BYTES);
    }();
    static const std::string throughput_body = [] {
        std::string b;
        b.reserve(THROUGHPUT_OBJECT_BYTES);
        const std::string chunk = "metacdn-radar-throughput-probe-object-v1........";
        while (b.size() < THROUGHPUT_OBJECT_BYTES) b += chunk;
        return b.substr(0, THROUGHPUT_OBJECT_BYTES);
    }();
    return kind == ProbeKind::throughput ? throughput_body : latency_body;
}

/// One probe a visitor's client is asked to run.
struct ProbeInstruction {
    std::string platform;
    ProbeKind kind = ProbeKind::latency;
    std::string url;
    int delay_ms = DEFAULT_PROBE_DELAY_MS;
};

struct ProbeSpec {
    std::string platform;
    std::optional<CustomerId> owner;
    std::vector<ProbeKind> kinds{ProbeKind::latency};
};

struct RadarConfig {
    int delay_ms = DEFAULT_PROBE_DELAY_MS;  // wait after page load
    bool community = true;                  // probe platforms of other customers too
    Duration window = minutes(10);          // aggregation window
    std::size_t min_count = 3;              // samples needed per aggregate
    std::vector<ProbeSpec> probes;
};

struct Session {
    std::optional<CustomerId> customer;
    ClientContext ctx;
};

inline std::string probe_url(const std::string& platform, ProbeKind kind) {
    std::string path = kind == ProbeKind::throughput ? "/probe/throughput" : "/probe/latency";
    return path + "?platform=" + platform;
}

/// The configured probe set for one visitor session. With community probes
/// disabled, only platforms owned by the session's customer are handed out.
inline std::vector<ProbeInstruction> issue_instructions(const Session& session,
                                                        const RadarConfig& config) {
    std::vector<ProbeInstruction> out;
    for (const auto& spec : config.probes) {
        if (!config.community) {
            if (!session.customer || !spec.owner || !(*spec.owner == *session.customer))
                continue;
        }
        for (auto kind : spec.kinds)
            out.push_back({spec.platform, kind, probe_url(spec.platform, kind),
                           config.delay_ms});
    }
    return out;
}

/// Ingestion, persistence, and rolling aggregation of probe reports.
/// One writer appends; readers take immutable StatsView snapshots.
class Service {
public:
    explicit Service(RadarConfig config = {}, std::set<std::string> known_platforms = {})
        : config_(std::move(config)), known_platforms_(std::move(known_platforms)) {
        for (const auto& spec : config_.probes) known_platforms_.insert(spec.platform);
    }

    /// Mirror every accepted report to a line-delimited JSON file.
    void open_log_sink(const std::string& path) {
        std::scoped_lock lock(mutex_);
        sink_.emplace(path, std::ios::binary | std::ios::trunc);
        if (!*sink_) throw std::runtime_error("cannot open report log: " + path);
    }

    void set_report_hook(std::function<void(const ProbeReport&)> hook) {
        report_hook_ = std::move(hook);
    }

    Expected<Unit, std::string> ingest(const ProbeReport& report) {
        if (!known_platforms_.empty() && !known_platforms_.contains(report.platform))
            return Expected<Unit, std::string>::failure("unknown platform: " + report.platform);
        if (!value_in_range(report.metric, report.value))
            return Expected<Unit, std::string>::failure("value out of range for metric");
        {
            std::scoped_lock lock(mutex_);
            log_.push_back(report);
            samples_[{report.platform, report.metric}].push_back(
                Sample{report.timestamp, report.value, report.client.asn,
                       report.client.country});
            prune(report.timestamp);
            if (sink_) {
                *sink_ << to_json(report).dump() << "\n";
                sink_->flush();
            }
        }
        if (report_hook_) report_hook_(report);
        return Unit{};
    }

    /// Rolling median over (now - window, now] at the given scope; absent
    /// when fewer than min_count samples fall in the window.
    std::optional<openmix::Aggregate> aggregate(const std::string& platform,
                                                const openmix::Scope& scope, Metric metric,
                                                Duration window, Instant now) const {
        std::scoped_lock lock(mutex_);
        auto it = samples_.find({platform, metric});
        if (it == samples_.end()) return std::nullopt;
        std::vector<double> values;
        Instant newest{std::numeric_limits<std::int64_t>::min()};
        for (const auto& s : it->second) {
            if (s.at.ms <= now.ms - window.ms || s.at > now) continue;
            if (scope.kind == openmix::Scope::Kind::asn && s.asn != scope.asn) continue;
            if (scope.kind == openmix::Scope::Kind::country && s.country != scope.country)
                continue;
            values.push_back(s.value);
            newest = std::max(newest, s.at);
        }
        if (values.size() < config_.min_count || values.empty()) return std::nullopt;
        return openmix::Aggregate{median(values), values.size(), now - newest};
    }

    /// Consistent snapshot over every (platform, scope, metric) with enough
    /// samples in the configured window.
    std::shared_ptr<const openmix::StatsView> stats_view(Instant now) const {
        auto view = std::make_shared<openmix::StatsView>(now);
        std::scoped_lock lock(mutex_);
        for (const auto& [key, deque] : samples_) {
            const auto& [platform, metric] = key;
            struct Bucket {
                std::vector<double> values;
                Instant newest{std::numeric_limits<std::int64_t>::min()};
            };
            std::map<openmix::Scope, Bucket> buckets;
            for (const auto& s : deque) {
                if (s.at.ms <= now.ms - config_.window.ms || s.at > now) continue;
                auto add = [&](const openmix::Scope& scope) {
                    auto& b = buckets[scope];
                    b.values.push_back(s.value);
                    b.newest = std::max(b.newest, s.at);
                };
                add(openmix::Scope::global());
                if (s.asn != 0) add(openmix::Scope::for_asn(s.asn));
                if (!s.country.empty()) add(openmix::Scope::for_country(s.country));
            }
            for (auto& [scope, bucket] : buckets) {
                if (bucket.values.size() < config_.min_count) continue;
                view->put(platform, scope, metric,
                          openmix::Aggregate{median(bucket.values), bucket.values.size(),
                                             now - bucket.newest});
            }
        }
        return view;
    }

    std::vector<ProbeReport> log_snapshot() const {
        std::scoped_lock lock(mutex_);
        return log_;
    }

    std::size_t log_size() const {
        std::scoped_lock lock(mutex_);
        return log_.size();
    }

    /// Re-ingests a persisted report log (one JSON object per line).
    Expected<std::size_t, std::string> replay(const std::string& path) {
        using Fail = Expected<std::size_t, std::string>;
        std::size_t accepted = 0;
        std::string error;
        try {
            for_each_line(path, [&](std::size_t lineno, std::string_view line) {
                if (!error.empty()) return;
                auto j = nlohmann::json::parse(line, nullptr, false);
                if (j.is_discarded()) {
                    error = path + ":" + std::to_string(lineno) + ": malformed JSON";
                    return;
                }
                auto report = probe_report_from_json(j);
                if (!report) {
                    error = path + ":" + std::to_string(lineno) + ": " + report.error();
                    return;
                }
                if (ingest(*report)) ++accepted;
            });
        } catch (const std::exception& e) {
            return Fail::failure(e.what());
        }
        if (!error.empty()) return Fail::failure(error);
        return accepted;
    }

    const RadarConfig& config() const { return config_; }

    static double median(std::vector<double>& values) {
        std::sort(values.begin(), values.end());
        std::size_t n = values.size();
        if (n % 2 == 1) return values[n / 2];
        return (values[n / 2 - 1] + values[n / 2]) / 2.0;
    }

private:
    struct Sample {
        Instant at;
        double value = 0;
        std::uint32_t asn = 0;
        std::string country;
    };

    void prune(Instant now) {
        // retain enough history for any reasonable ad-hoc window
        const Duration retention = std::max(Duration{config_.window.ms * 4}, hours(6));
        for (auto& [key, deque] : samples_) {
            while (!deque.empty() && deque.front().at.ms < now.ms - retention.ms)
                deque.pop_front();
        }
    }

    RadarConfig config_;
    std::set<std::string> known_platforms_;
    mutable std::mutex mutex_;
    std::vector<ProbeReport> log_;
    std::map<std::pair<std::string, Metric>, std::deque<Sample>> samples_;
    std::optional<std::ofstream> sink_;
    std::function<void(const ProbeReport&)> report_hook_;
};

}  // namespace metacdn::radar
