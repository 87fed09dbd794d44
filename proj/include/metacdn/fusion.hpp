#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "metacdn/time.hpp"
#include "metacdn/util.hpp"

namespace metacdn::fusion {

/// One operational statistic pulled from a platform's side (quota counters,
/// health flags, traffic totals). Keys are an open vocabulary.
struct FusionRecord {
    std::string platform;
    std::string metric;
    std::variant<double, bool> value;
    Instant as_of;

    double as_number() const {
        if (const auto* d = std::get_if<double>(&value)) return *d;
        return std::get<bool>(value) ? 1.0 : 0.0;
    }
};

/// Immutable snapshot: latest record per (platform, metric).
class FusionView {
public:
    FusionView() = default;

    static FusionView from_records(const std::vector<FusionRecord>& records) {
        FusionView view;
        for (const auto& rec : records) {
            auto key = std::make_pair(rec.platform, rec.metric);
            auto it = view.latest_.find(key);
            if (it == view.latest_.end() || rec.as_of >= it->second.as_of)
                view.latest_.insert_or_assign(key, rec);
        }
        return view;
    }

    std::optional<double> get(const std::string& platform, const std::string& metric) const {
        auto it = latest_.find(std::make_pair(platform, metric));
        if (it == latest_.end()) return std::nullopt;
        return it->second.as_number();
    }

    std::size_t size() const { return latest_.size(); }

private:
    std::map<std::pair<std::string, std::string>, FusionRecord> latest_;
};

/// Feed file: one JSON object per line, {"platform", "metric", "value",
/// "as_of"}. value may be a number or a boolean; as_of is epoch milliseconds.
inline Expected<std::vector<FusionRecord>, std::string> load_feed(const std::string& path) {
    using Fail = Expected<std::vector<FusionRecord>, std::string>;
    std::vector<FusionRecord> records;
    std::string error;
    try {
        for_each_line(path, [&](std::size_t lineno, std::string_view line) {
            if (!error.empty()) return;
            auto where = path + ":" + std::to_string(lineno) + ": ";
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                error = where + "malformed JSON record";
                return;
            }
            FusionRecord rec;
            try {
                rec.platform = j.at("platform").get<std::string>();
                rec.metric = j.at("metric").get<std::string>();
                rec.as_of = Instant{j.at("as_of").get<std::int64_t>()};
                const auto& v = j.at("value");
                if (v.is_boolean())
                    rec.value = v.get<bool>();
                else if (v.is_number())
                    rec.value = v.get<double>();
                else {
                    error = where + "value must be a number or boolean";
                    return;
                }
            } catch (const nlohmann::json::exception& e) {
                error = where + e.what();
                return;
            }
            if (rec.metric.starts_with("quota") && rec.as_number() < 0) {
                error = where + "quota metrics must be non-negative";
                return;
            }
            records.push_back(std::move(rec));
        });
    } catch (const std::exception& e) {
        return Fail::failure(e.what());
    }
    if (!error.empty()) return Fail::failure(error);
    return records;
}

/// Fraction of the monthly quota still unused: 1 - monthly_bytes/quota_bytes,
/// clamped to [0, 1]. nullopt when either metric is missing or the quota is 0.
inline std::optional<double> quota_headroom(const std::string& platform, const FusionView& view) {
    auto used = view.get(platform, "monthly_bytes");
    auto quota = view.get(platform, "quota_bytes");
    if (!used || !quota || *quota == 0) return std::nullopt;
    double headroom = 1.0 - *used / *quota;
    return std::clamp(headroom, 0.0, 1.0);
}

}  // namespace metacdn::fusion
