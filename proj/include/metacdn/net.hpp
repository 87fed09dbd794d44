#pragma once

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace metacdn {

/// IPv4 address, stored in host byte order.
struct IPv4 {
    std::uint32_t addr = 0;

    static std::optional<IPv4> parse(std::string_view text) {
        std::array<std::uint32_t, 4> octets{};
        std::size_t pos = 0;
        for (int i = 0; i < 4; ++i) {
            if (i > 0) {
                if (pos >= text.size() || text[pos] != '.') return std::nullopt;
                ++pos;
            }
            std::size_t start = pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
            if (pos == start || pos - start > 3) return std::nullopt;
            std::uint32_t v = 0;
            std::from_chars(text.data() + start, text.data() + pos, v);
            if (v > 255) return std::nullopt;
            octets[static_cast<std::size_t>(i)] = v;
        }
        if (pos != text.size()) return std::nullopt;
        return IPv4{(octets[0] << 24) | (octets[1] << 16) | (octets[2] << 8) | octets[3]};
    }

    std::string to_string() const {
        std::string out;
        out.reserve(15);
        for (int shift = 24; shift >= 0; shift -= 8) {
            if (!out.empty()) out.push_back('.');
            out += std::to_string((addr >> shift) & 0xff);
        }
        return out;
    }

    std::uint8_t octet(int i) const {
        return static_cast<std::uint8_t>(addr >> (24 - 8 * i));
    }

    friend auto operator<=>(const IPv4&, const IPv4&) = default;
};

/// IPv4 network prefix ("a.b.c.d/len"). The base address is stored as given;
/// matching masks it down to the prefix length.
struct Cidr {
    IPv4 base;
    std::uint8_t prefix_len = 32;

    static std::optional<Cidr> parse(std::string_view text) {
        auto slash = text.find('/');
        std::uint8_t len = 32;
        std::string_view addr_part = text;
        if (slash != std::string_view::npos) {
            addr_part = text.substr(0, slash);
            auto len_part = text.substr(slash + 1);
            unsigned v = 0;
            auto [p, ec] = std::from_chars(len_part.data(), len_part.data() + len_part.size(), v);
            if (ec != std::errc{} || p != len_part.data() + len_part.size() || v > 32)
                return std::nullopt;
            len = static_cast<std::uint8_t>(v);
        }
        auto addr = IPv4::parse(addr_part);
        if (!addr) return std::nullopt;
        return Cidr{*addr, len};
    }

    std::uint32_t mask() const {
        return prefix_len == 0 ? 0u : ~std::uint32_t{0} << (32 - prefix_len);
    }

    bool contains(IPv4 ip) const { return (ip.addr & mask()) == (base.addr & mask()); }

    std::string to_string() const {
        return base.to_string() + "/" + std::to_string(prefix_len);
    }

    friend auto operator<=>(const Cidr&, const Cidr&) = default;
};

}  // namespace metacdn
