#pragma once

#include <algorithm>
#include <atomic>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "metacdn/fusion.hpp"
#include "metacdn/model.hpp"
#include "metacdn/time.hpp"

namespace metacdn::openmix {

/// Aggregation scope of a stats entry, from most to least specific.
struct Scope {
    enum class Kind { asn, country, global };
    Kind kind = Kind::global;
    std::uint32_t asn = 0;
    std::string country;

    static Scope for_asn(std::uint32_t a) { return {Kind::asn, a, {}}; }
    static Scope for_country(std::string c) { return {Kind::country, 0, std::move(c)}; }
    static Scope global() { return {}; }

    friend auto operator<=>(const Scope&, const Scope&) = default;

    std::string to_string() const {
        switch (kind) {
            case Kind::asn: return "asn:" + std::to_string(asn);
            case Kind::country: return "country:" + country;
            case Kind::global: return "global";
        }
        return "?";
    }
};

struct Aggregate {
    double value = 0;
    std::size_t count = 0;
    Duration age;  // now - newest contributing sample
};

/// Immutable (platform, scope, metric) -> aggregate snapshot taken at one
/// logical time. Decisions only ever see a consistent view.
class StatsView {
public:
    using Key = std::tuple<std::string, Scope, Metric>;

    StatsView() = default;
    explicit StatsView(Instant as_of) : as_of_(as_of) {}

    void put(const std::string& platform, const Scope& scope, Metric metric, Aggregate agg) {
        items_[Key{platform, scope, metric}] = agg;
    }

    std::optional<Aggregate> get(const std::string& platform, const Scope& scope,
                                 Metric metric) const {
        auto it = items_.find(Key{platform, scope, metric});
        if (it == items_.end()) return std::nullopt;
        return it->second;
    }

    Instant as_of() const { return as_of_; }
    std::size_t size() const { return items_.size(); }
    const std::map<Key, Aggregate>& items() const { return items_; }

private:
    std::map<Key, Aggregate> items_;
    Instant as_of_;
};

enum class DecisionReason { policy, fallback_no_data, fallback_all_unavailable };

inline std::string_view to_string(DecisionReason r) {
    switch (r) {
        case DecisionReason::policy: return "policy";
        case DecisionReason::fallback_no_data: return "fallback_no_data";
        case DecisionReason::fallback_all_unavailable: return "fallback_all_unavailable";
    }
    return "?";
}

/// Outcome of one evaluation, with the value each candidate was judged on
/// (absent when no usable data existed).
struct Decision {
    std::string chosen;
    DecisionReason reason = DecisionReason::policy;
    std::vector<std::pair<std::string, std::optional<double>>> considered;
};

struct EngineConfig {
    double min_availability = 0.5;      // gate for optimal_rtt / throughput
    Duration staleness = minutes(10);   // older aggregates are treated as absent
};

namespace detail {

inline std::optional<double> usable_value(const StatsView& stats, const std::string& platform,
                                          const Scope& scope, Metric metric,
                                          Duration staleness) {
    auto agg = stats.get(platform, scope, metric);
    if (!agg || agg->age > staleness) return std::nullopt;
    return agg->value;
}

inline std::vector<Scope> scope_chain(const ClientContext& ctx) {
    std::vector<Scope> chain;
    if (ctx.asn != 0) chain.push_back(Scope::for_asn(ctx.asn));
    if (!ctx.country.empty()) chain.push_back(Scope::for_country(ctx.country));
    chain.push_back(Scope::global());
    return chain;
}

/// Values for all candidates at the most specific scope where at least one
/// candidate has usable data. Empty when no scope has any.
inline std::map<std::string, double> values_at_best_scope(
    const std::vector<std::string>& candidates, const StatsView& stats,
    const ClientContext& ctx, Metric metric, Duration staleness) {
    for (const auto& scope : scope_chain(ctx)) {
        std::map<std::string, double> values;
        for (const auto& alias : candidates)
            if (auto v = usable_value(stats, alias, scope, metric, staleness)) values[alias] = *v;
        if (!values.empty()) return values;
    }
    return {};
}

/// Per-candidate value at its own most specific scope (used for the
/// availability gate and for rule accessors).
inline std::optional<double> value_any_scope(const StatsView& stats, const std::string& platform,
                                             const ClientContext& ctx, Metric metric,
                                             Duration staleness) {
    for (const auto& scope : scope_chain(ctx))
        if (auto v = usable_value(stats, platform, scope, metric, staleness)) return v;
    return std::nullopt;
}

}  // namespace detail

/// candidates[counter mod N]; the counter is advanced atomically.
inline std::string policy_round_robin(std::atomic<std::uint64_t>& counter,
                                      const std::vector<std::string>& candidates) {
    auto n = counter.fetch_add(1, std::memory_order_relaxed);
    return candidates[n % candidates.size()];
}

namespace detail {

struct Ranked {
    Decision decision;
};

/// Shared body of optimal_rtt (minimize) and throughput (maximize).
inline Decision pick_by_metric(const std::vector<std::string>& candidates,
                               const StatsView& stats, const ClientContext& ctx, Metric metric,
                               bool maximize, const EngineConfig& cfg) {
    Decision d;
    // availability gate: drop candidates known to be unavailable, unless that
    // would drop everything
    std::vector<std::string> usable;
    for (const auto& alias : candidates) {
        auto avail = value_any_scope(stats, alias, ctx, Metric::availability, cfg.staleness);
        if (avail && *avail < cfg.min_availability) continue;
        usable.push_back(alias);
    }
    bool all_unavailable = usable.empty();
    if (all_unavailable) usable = candidates;

    auto values = values_at_best_scope(usable, stats, ctx, metric, cfg.staleness);
    for (const auto& alias : candidates) {
        auto it = values.find(alias);
        d.considered.emplace_back(alias, it == values.end()
                                             ? std::nullopt
                                             : std::optional<double>(it->second));
    }

    if (values.empty()) {
        d.chosen = candidates.front();
        d.reason = all_unavailable ? DecisionReason::fallback_all_unavailable
                                   : DecisionReason::fallback_no_data;
        return d;
    }
    // maps iterate in alias order, so strict comparison yields the
    // lexicographically smallest alias on ties
    auto best = values.begin();
    for (auto it = std::next(values.begin()); it != values.end(); ++it) {
        if (maximize ? it->second > best->second : it->second < best->second) best = it;
    }
    d.chosen = best->first;
    d.reason = all_unavailable ? DecisionReason::fallback_all_unavailable
                               : DecisionReason::policy;
    return d;
}

}  // namespace detail

/// Lowest-latency candidate at the best available scope; ties break to the
/// lexicographically smallest alias; no data falls back to the first
/// candidate.
inline Decision policy_optimal_rtt(const std::vector<std::string>& candidates,
                                   const StatsView& stats, const ClientContext& ctx,
                                   const EngineConfig& cfg = {}) {
    return detail::pick_by_metric(candidates, stats, ctx, Metric::latency_ms, false, cfg);
}

/// Highest-throughput candidate; same scope and tie rules as optimal_rtt.
inline Decision policy_throughput(const std::vector<std::string>& candidates,
                                  const StatsView& stats, const ClientContext& ctx,
                                  const EngineConfig& cfg = {}) {
    return detail::pick_by_metric(candidates, stats, ctx, Metric::throughput_kbps, true, cfg);
}

/// First rule whose filter admits at least one candidate picks the admitted
/// candidate with the lowest score. Falling through all rules returns the
/// last rule's fallback.
inline Decision eval_rules(const rules::RuleProgram& prog,
                           const std::vector<std::string>& candidates, const StatsView& stats,
                           const fusion::FusionView& fusion_view, const ClientContext& ctx,
                           const EngineConfig& cfg = {}) {
    Decision d;
    auto context_for = [&](const std::string& alias) {
        return [&, alias](std::string_view root, std::string_view key) -> std::optional<double> {
            if (root == "radar") {
                auto metric = metric_from(key);
                if (!metric) return std::nullopt;
                return detail::value_any_scope(stats, alias, ctx, *metric, cfg.staleness);
            }
            if (root == "fusion") {
                if (key == "quota_headroom") return fusion::quota_headroom(alias, fusion_view);
                return fusion_view.get(alias, std::string(key));
            }
            if (root == "client" && key == "asn") return static_cast<double>(ctx.asn);
            return std::nullopt;
        };
    };

    for (const auto& alias : candidates) d.considered.emplace_back(alias, std::nullopt);

    for (const auto& rule : prog.rules()) {
        std::string best;
        double best_score = std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto& alias = candidates[i];
            auto ctx_fn = context_for(alias);
            if (!rule.filter.eval_bool(ctx_fn)) continue;
            auto score = rule.score.eval(ctx_fn);
            double s = score ? *score : std::numeric_limits<double>::infinity();
            d.considered[i].second = score;
            if (!any || s < best_score || (s == best_score && alias < best)) {
                best = alias;
                best_score = s;
                any = true;
            }
        }
        if (any) {
            d.chosen = best;
            d.reason = DecisionReason::policy;
            return d;
        }
        // next rule; considered values reset to absent for non-admitted
        for (auto& c : d.considered) c.second.reset();
    }
    d.chosen = prog.rules().back().fallback;
    d.reason = DecisionReason::policy;
    return d;
}

/// Policy engine. The round-robin counters are the only mutable state;
/// everything else is taken from immutable snapshots, so evaluate is safe to
/// call concurrently.
class Engine {
public:
    explicit Engine(EngineConfig cfg = {}) : cfg_(cfg) {}

    Decision evaluate(const AppConfig& app, const ClientContext& ctx, const StatsView& stats,
                      const fusion::FusionView& fusion_view, Instant /*now*/) {
        if (app.candidates.empty()) return {};
        switch (app.policy.kind) {
            case PolicyKind::static_route: {
                Decision d;
                d.chosen = app.candidates.front();
                for (const auto& alias : app.candidates)
                    d.considered.emplace_back(alias, std::nullopt);
                return d;
            }
            case PolicyKind::round_robin: {
                Decision d;
                d.chosen = policy_round_robin(counter_for(app), app.candidates);
                for (const auto& alias : app.candidates)
                    d.considered.emplace_back(alias, std::nullopt);
                return d;
            }
            case PolicyKind::optimal_rtt:
                return policy_optimal_rtt(app.candidates, stats, ctx, cfg_);
            case PolicyKind::throughput:
                return policy_throughput(app.candidates, stats, ctx, cfg_);
            case PolicyKind::rules:
                if (!app.policy.rules) break;
                return eval_rules(*app.policy.rules, app.candidates, stats, fusion_view, ctx,
                                  cfg_);
        }
        Decision d;
        d.chosen = app.candidates.front();
        d.reason = DecisionReason::fallback_no_data;
        return d;
    }

    const EngineConfig& config() const { return cfg_; }

    std::atomic<std::uint64_t>& counter_for(const AppConfig& app) {
        std::uint32_t key = (std::uint32_t{app.customer.index()} << 16) | app.app.index();
        std::scoped_lock lock(mutex_);
        auto it = counters_.find(key);
        if (it == counters_.end())
            it = counters_.emplace(key, std::make_unique<std::atomic<std::uint64_t>>(0)).first;
        return *it->second;
    }

private:
    EngineConfig cfg_;
    std::mutex mutex_;
    std::map<std::uint32_t, std::unique_ptr<std::atomic<std::uint64_t>>> counters_;
};

}  // namespace metacdn::openmix
