#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metacdn/net.hpp"
#include "metacdn/util.hpp"

namespace metacdn {

/// Static CIDR -> (ASN, country) mapping used to derive a client context from
/// a resolver address or ECS prefix. Longest prefix wins.
class GeoTable {
public:
    struct Entry {
        Cidr cidr;
        std::uint32_t asn = 0;
        std::string country;
    };

    void add(Cidr cidr, std::uint32_t asn, std::string country) {
        entries_.push_back({cidr, asn, std::move(country)});
        sorted_ = false;
    }

    /// File format: one "cidr,asn,country" per line, '#' comments allowed.
    static Expected<GeoTable, std::string> load(const std::string& path) {
        using Fail = Expected<GeoTable, std::string>;
        GeoTable table;
        std::string error;
        try {
            for_each_line(path, [&](std::size_t lineno, std::string_view line) {
                if (!error.empty() || line[0] == '#') return;
                auto fields = split(line, ',');
                std::optional<Cidr> cidr;
                std::uint32_t asn = 0;
                if (fields.size() == 3) {
                    cidr = Cidr::parse(fields[0]);
                    try {
                        asn = static_cast<std::uint32_t>(std::stoul(std::string(fields[1])));
                    } catch (...) {
                        cidr.reset();
                    }
                }
                if (!cidr) {
                    error = path + ":" + std::to_string(lineno) + ": expected cidr,asn,country";
                    return;
                }
                table.add(*cidr, asn, std::string(fields[2]));
            });
        } catch (const std::exception& e) {
            return Fail::failure(e.what());
        }
        if (!error.empty()) return Fail::failure(error);
        return table;
    }

    std::optional<Entry> lookup(IPv4 ip) const {
        ensure_sorted();
        for (const auto& e : entries_)  // sorted by prefix length, longest first
            if (e.cidr.contains(ip)) return e;
        return std::nullopt;
    }

    std::size_t size() const { return entries_.size(); }

private:
    void ensure_sorted() const {
        if (sorted_) return;
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry& a, const Entry& b) {
                             return a.cidr.prefix_len > b.cidr.prefix_len;
                         });
        sorted_ = true;
    }

    mutable std::vector<Entry> entries_;
    mutable bool sorted_ = true;
};

}  // namespace metacdn
