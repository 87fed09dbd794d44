#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "metacdn/model.hpp"
#include "metacdn/time.hpp"

namespace metacdn::sentinel {

// Network-event engine over the probe report stream. A platform (cdn/cloud)
// event needs corroboration from 5 distinct reporter ASes; an AS event needs
// 5 distinct affected platforms. An event is confirmed once it has been
// reported for 9 minutes and the 5-hour rolling variance clears the
// per-(class, severity) threshold; both knobs are configuration.

enum class SubjectKind { cdn, cloud, asn };
enum class MetricClass { availability, rtt, throughput };
enum class Direction { degradation, improvement };
enum class Severity { minor, medium, major };
enum class EventStatus { unconfirmed, confirmed };

inline std::string_view to_string(SubjectKind k) {
    switch (k) {
        case SubjectKind::cdn: return "cdn";
        case SubjectKind::cloud: return "cloud";
        case SubjectKind::asn: return "asn";
    }
    return "?";
}

inline std::string_view to_string(MetricClass m) {
    switch (m) {
        case MetricClass::availability: return "availability";
        case MetricClass::rtt: return "rtt";
        case MetricClass::throughput: return "throughput";
    }
    return "?";
}

inline std::string_view to_string(Direction d) {
    return d == Direction::degradation ? "degradation" : "improvement";
}

inline std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::minor: return "minor";
        case Severity::medium: return "medium";
        case Severity::major: return "major";
    }
    return "?";
}

inline std::string_view to_string(EventStatus s) {
    return s == EventStatus::confirmed ? "confirmed" : "unconfirmed";
}

inline MetricClass metric_class_of(Metric m) {
    switch (m) {
        case Metric::latency_ms: return MetricClass::rtt;
        case Metric::throughput_kbps: return MetricClass::throughput;
        case Metric::availability: return MetricClass::availability;
    }
    return MetricClass::rtt;
}

/// Lower magnitude bounds per severity step.
struct SeverityLadder {
    double minor = 1.0;
    double medium = 2.0;
    double major = 5.0;
};

/// Relative-variance thresholds (variance of value/baseline over the rolling
/// window) that an event must clear to be confirmed, per severity.
struct VarianceThresholds {
    double minor = 0.05;
    double medium = 0.2;
    double major = 0.5;

    double at(Severity s) const {
        switch (s) {
            case Severity::minor: return minor;
            case Severity::medium: return medium;
            case Severity::major: return major;
        }
        return major;
    }
};

struct SentinelConfig {
    Duration baseline_window = hours(5);  // rolling history driving baseline + variance
    Duration current_window = minutes(1); // "right now" condition window
    Duration confirm_after = minutes(9);
    Duration close_after = minutes(15);   // condition absent this long closes the event
    std::size_t min_corroboration = 5;    // distinct ASes (platform) / platforms (AS)
    std::size_t min_baseline_count = 5;
    double availability_degraded_below = 0.9;
    SeverityLadder rtt_ladder{1.0, 2.0, 5.0};
    SeverityLadder throughput_ladder{1.0, 2.0, 5.0};
    SeverityLadder availability_ladder{0.1, 0.5, 0.9};
    VarianceThresholds rtt_variance{};
    VarianceThresholds throughput_variance{};
    VarianceThresholds availability_variance{};

    const SeverityLadder& ladder(MetricClass m) const {
        switch (m) {
            case MetricClass::rtt: return rtt_ladder;
            case MetricClass::throughput: return throughput_ladder;
            case MetricClass::availability: return availability_ladder;
        }
        return rtt_ladder;
    }

    const VarianceThresholds& variance(MetricClass m) const {
        switch (m) {
            case MetricClass::rtt: return rtt_variance;
            case MetricClass::throughput: return throughput_variance;
            case MetricClass::availability: return availability_variance;
        }
        return rtt_variance;
    }
};

struct NetworkEvent {
    SubjectKind subject_kind = SubjectKind::cdn;
    std::string subject;  // platform alias, or ASN rendered as decimal
    MetricClass metric_class = MetricClass::rtt;
    Direction direction = Direction::degradation;
    double magnitude = 0;  // peak relative change, e.g. 3.0 == +300 %
    Severity severity = Severity::minor;
    EventStatus status = EventStatus::unconfirmed;
    Instant started_at;
    Instant last_seen;
    std::set<std::string> reporters;  // ASes for platform events, platforms for AS events
    bool closed = false;
};

/// Magnitude -> severity, per the configured ladder. nullopt below the minor
/// bound (no event-worthy change).
inline std::optional<Severity> classify_severity(double magnitude, MetricClass metric_class,
                                                 SubjectKind /*subject_kind*/,
                                                 const SentinelConfig& cfg = {}) {
    const auto& ladder = cfg.ladder(metric_class);
    if (magnitude >= ladder.major) return Severity::major;
    if (magnitude >= ladder.medium) return Severity::medium;
    if (magnitude >= ladder.minor) return Severity::minor;
    return std::nullopt;
}

class Sentinel {
public:
    explicit Sentinel(SentinelConfig cfg = {},
                      std::map<std::string, PlatformKind> platform_kinds = {})
        : cfg_(cfg), platform_kinds_(std::move(platform_kinds)) {}

    /// Reports must be applied in timestamp order by a single consumer.
    void update(const ProbeReport& report, Instant now) {
        auto kind_it = platform_kinds_.find(report.platform);
        // only cdn/cloud platforms participate in event detection
        if (kind_it == platform_kinds_.end() || kind_it->second == PlatformKind::origin) return;
        if (report.client.asn == 0) return;

        MetricClass cls = metric_class_of(report.metric);
        auto& subj = platform_samples_[{report.platform, cls}];
        subj.push_back({report.timestamp, report.value});
        prune(subj, now);
        auto& cell = cell_samples_[{report.platform, report.client.asn, cls}];
        cell.push_back({report.timestamp, report.value});
        prune(cell, now);

        evaluate_platform(report.platform, kind_it->second, cls, now);
        evaluate_asn(report.client.asn, cls, now);
        sweep_closures(now);
    }

    /// Candidate condition for a subject right now, if corroborated.
    struct Detection {
        Direction direction;
        double magnitude = 0;
        Severity severity = Severity::minor;
        std::set<std::string> reporters;
    };

    std::vector<NetworkEvent> emit_feed(Instant since) const {
        std::vector<NetworkEvent> out;
        for (const auto& ev : events_)
            if (ev.last_seen >= since) out.push_back(ev);
        std::stable_sort(out.begin(), out.end(), [](const NetworkEvent& a, const NetworkEvent& b) {
            return std::tie(a.started_at.ms, a.subject, a.metric_class, a.direction) <
                   std::tie(b.started_at.ms, b.subject, b.metric_class, b.direction);
        });
        return out;
    }

    const std::vector<NetworkEvent>& events() const { return events_; }
    const SentinelConfig& config() const { return cfg_; }

private:
    struct Sample {
        Instant at;
        double value = 0;
    };
    using Series = std::deque<Sample>;

    void prune(Series& s, Instant now) {
        while (!s.empty() && s.front().at.ms < now.ms - cfg_.baseline_window.ms) s.pop_front();
    }

    static double median_of(std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    }

    /// Median over (now-baseline_window, now-current_window]; the open
    /// condition window never contaminates its own reference.
    std::optional<double> baseline_median(const Series& s, Instant now) const {
        std::vector<double> v;
        for (const auto& smp : s) {
            if (smp.at.ms <= now.ms - cfg_.baseline_window.ms) continue;
            if (smp.at.ms > now.ms - cfg_.current_window.ms) continue;
            v.push_back(smp.value);
        }
        if (v.size() < cfg_.min_baseline_count) return std::nullopt;
        return median_of(v);
    }

    std::optional<double> current_median(const Series& s, Instant now) const {
        std::vector<double> v;
        for (const auto& smp : s)
            if (smp.at.ms > now.ms - cfg_.current_window.ms && smp.at <= now)
                v.push_back(smp.value);
        if (v.empty()) return std::nullopt;
        return median_of(v);
    }

    /// Relative change of current vs baseline for one metric class, and the
    /// direction it moves in. nullopt when the change is not event-worthy.
    std::optional<std::pair<Direction, double>> change_of(MetricClass cls, double baseline,
                                                          double current) const {
        if (baseline <= 0) return std::nullopt;
        switch (cls) {
            case MetricClass::rtt:
                if (current > baseline)
                    return std::pair{Direction::degradation, current / baseline - 1.0};
                if (current < baseline && current > 0)
                    return std::pair{Direction::improvement, baseline / current - 1.0};
                return std::nullopt;
            case MetricClass::throughput:
                if (current < baseline && current > 0)
                    return std::pair{Direction::degradation, baseline / current - 1.0};
                if (current > baseline)
                    return std::pair{Direction::improvement, current / baseline - 1.0};
                return std::nullopt;
            case MetricClass::availability:
                if (current < cfg_.availability_degraded_below && current < baseline)
                    return std::pair{Direction::degradation, (baseline - current) / baseline};
                return std::nullopt;
        }
        return std::nullopt;
    }

    void evaluate_platform(const std::string& platform, PlatformKind kind, MetricClass cls,
                           Instant now) {
        auto subj_it = platform_samples_.find({platform, cls});
        if (subj_it == platform_samples_.end()) return;
        auto baseline = baseline_median(subj_it->second, now);
        if (!baseline) return;
        auto current = current_median(subj_it->second, now);
        if (!current) return;
        auto change = change_of(cls, *baseline, *current);
        if (!change) return;
        auto severity = classify_severity(change->second, cls, SubjectKind::cdn, cfg_);
        if (!severity) return;

        // corroboration: distinct ASes whose own current view crosses the
        // minor bound in the same direction, against the platform baseline
        std::set<std::string> reporters;
        for (const auto& [key, cell] : cell_samples_) {
            const auto& [cell_platform, cell_asn, cell_cls] = key;
            if (cell_platform != platform || cell_cls != cls) continue;
            auto cell_current = current_median(cell, now);
            if (!cell_current) continue;
            auto cell_change = change_of(cls, *baseline, *cell_current);
            if (!cell_change || cell_change->first != change->first) continue;
            if (classify_severity(cell_change->second, cls, SubjectKind::cdn, cfg_))
                reporters.insert(std::to_string(cell_asn));
        }
        if (reporters.size() < cfg_.min_corroboration) return;

        SubjectKind skind = kind == PlatformKind::cloud ? SubjectKind::cloud : SubjectKind::cdn;
        double variance = relative_variance(subj_it->second, *baseline, now);
        touch_event(skind, platform, cls, change->first, change->second, *severity, reporters,
                    variance, now);
    }

    void evaluate_asn(std::uint32_t asn, MetricClass cls, Instant now) {
        // an AS is the subject when 5+ cdn/cloud platforms look anomalous
        // from that AS's vantage
        std::map<Direction, std::pair<std::set<std::string>, std::vector<double>>> hits;
        for (const auto& [key, cell] : cell_samples_) {
            const auto& [platform, cell_asn, cell_cls] = key;
            if (cell_asn != asn || cell_cls != cls) continue;
            auto subj_it = platform_samples_.find({platform, cls});
            if (subj_it == platform_samples_.end()) continue;
            auto baseline = baseline_median(subj_it->second, now);
            if (!baseline) continue;
            auto cell_current = current_median(cell, now);
            if (!cell_current) continue;
            auto change = change_of(cls, *baseline, *cell_current);
            if (!change) continue;
            if (!classify_severity(change->second, cls, SubjectKind::asn, cfg_)) continue;
            hits[change->first].first.insert(platform);
            hits[change->first].second.push_back(change->second);
        }
        for (auto& [direction, entry] : hits) {
            auto& [platforms, magnitudes] = entry;
            if (platforms.size() < cfg_.min_corroboration) continue;
            double magnitude = median_of(magnitudes);
            auto severity = classify_severity(magnitude, cls, SubjectKind::asn, cfg_);
            if (!severity) continue;
            double variance = asn_relative_variance(asn, cls, now);
            touch_event(SubjectKind::asn, std::to_string(asn), cls, direction, magnitude,
                        *severity, platforms, variance, now);
        }
    }

    /// Population variance of value/baseline over the rolling window.
    double relative_variance(const Series& s, double baseline, Instant now) const {
        if (baseline <= 0) return 0;
        double sum = 0, sum_sq = 0;
        std::size_t n = 0;
        for (const auto& smp : s) {
            if (smp.at.ms <= now.ms - cfg_.baseline_window.ms || smp.at > now) continue;
            double r = smp.value / baseline;
            sum += r;
            sum_sq += r * r;
            ++n;
        }
        if (n == 0) return 0;
        double mean = sum / static_cast<double>(n);
        return sum_sq / static_cast<double>(n) - mean * mean;
    }

    double asn_relative_variance(std::uint32_t asn, MetricClass cls, Instant now) const {
        double sum = 0, sum_sq = 0;
        std::size_t n = 0;
        for (const auto& [key, cell] : cell_samples_) {
            const auto& [platform, cell_asn, cell_cls] = key;
            if (cell_asn != asn || cell_cls != cls) continue;
            auto subj_it = platform_samples_.find({platform, cls});
            if (subj_it == platform_samples_.end()) continue;
            auto baseline = baseline_median(subj_it->second, now);
            if (!baseline || *baseline <= 0) continue;
            for (const auto& smp : cell) {
                if (smp.at.ms <= now.ms - cfg_.baseline_window.ms || smp.at > now) continue;
                double r = smp.value / *baseline;
                sum += r;
                sum_sq += r * r;
                ++n;
            }
        }
        if (n == 0) return 0;
        double mean = sum / static_cast<double>(n);
        return sum_sq / static_cast<double>(n) - mean * mean;
    }

    void touch_event(SubjectKind skind, const std::string& subject, MetricClass cls,
                     Direction direction, double magnitude, Severity severity,
                     const std::set<std::string>& reporters, double variance, Instant now) {
        auto key = std::make_tuple(skind, subject, cls, direction);
        auto it = open_events_.find(key);
        if (it == open_events_.end()) {
            NetworkEvent ev;
            ev.subject_kind = skind;
            ev.subject = subject;
            ev.metric_class = cls;
            ev.direction = direction;
            ev.magnitude = magnitude;
            ev.severity = severity;
            ev.status = EventStatus::unconfirmed;
            ev.started_at = now;
            ev.last_seen = now;
            ev.reporters = reporters;
            events_.push_back(ev);
            open_events_[key] = events_.size() - 1;
            it = open_events_.find(key);
        }
        NetworkEvent& ev = events_[it->second];
        ev.last_seen = now;
        ev.reporters.insert(reporters.begin(), reporters.end());
        if (magnitude > ev.magnitude) {
            ev.magnitude = magnitude;  // severity escalates in place with the peak
            if (auto esc = classify_severity(ev.magnitude, cls, skind, cfg_)) ev.severity = *esc;
        }
        if (ev.status == EventStatus::unconfirmed && now - ev.started_at >= cfg_.confirm_after &&
            variance > cfg_.variance(cls).at(ev.severity)) {
            assert(now - ev.started_at >= cfg_.confirm_after);
            ev.status = EventStatus::confirmed;
        }
    }

    void sweep_closures(Instant now) {
        for (auto it = open_events_.begin(); it != open_events_.end();) {
            NetworkEvent& ev = events_[it->second];
            if (now - ev.last_seen >= cfg_.close_after) {
                ev.closed = true;
                it = open_events_.erase(it);
            } else {
                ++it;
            }
        }
    }

    SentinelConfig cfg_;
    std::map<std::string, PlatformKind> platform_kinds_;
    std::map<std::pair<std::string, MetricClass>, Series> platform_samples_;
    std::map<std::tuple<std::string, std::uint32_t, MetricClass>, Series> cell_samples_;
    std::vector<NetworkEvent> events_;
    std::map<std::tuple<SubjectKind, std::string, MetricClass, Direction>, std::size_t>
        open_events_;
};

/// Feed line shape (one JSON object per event).
inline nlohmann::json to_json(const NetworkEvent& ev) {
    nlohmann::json j{{"subject_kind", std::string(to_string(ev.subject_kind))},
                     {"subject", ev.subject},
                     {"metric_class", std::string(to_string(ev.metric_class))},
                     {"direction", std::string(to_string(ev.direction))},
                     {"magnitude", ev.magnitude},
                     {"severity", std::string(to_string(ev.severity))},
                     {"status", std::string(to_string(ev.status))},
                     {"started_at", ev.started_at.ms},
                     {"last_seen", ev.last_seen.ms},
                     {"closed", ev.closed}};
    auto reporters = nlohmann::json::array();
    for (const auto& r : ev.reporters) reporters.push_back(r);
    j[ev.subject_kind == SubjectKind::asn ? "reporting_subjects" : "reporting_asns"] = reporters;
    return j;
}

inline std::string feed_to_jsonl(const std::vector<NetworkEvent>& events) {
    std::string out;
    for (const auto& ev : events) {
        out += to_json(ev).dump();
        out += '\n';
    }
    return out;
}

}  // namespace metacdn::sentinel
