#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metacdn/net.hpp"
#include "metacdn/util.hpp"

namespace metacdn::dns {

// RFC 1035 UDP subset plus the EDNS0 client-subnet option (RFC 7871).
// Encoding policy, kept deliberately simple and stable so responses are
// byte-reproducible:
//   - question name: full label encoding
//   - answer/authority owner equal to the question name: pointer to offset 12
//   - all names inside RDATA: uncompressed
// Parsing accepts arbitrary compression.

inline constexpr std::uint16_t TYPE_A = 1;
inline constexpr std::uint16_t TYPE_NS = 2;
inline constexpr std::uint16_t TYPE_CNAME = 5;
inline constexpr std::uint16_t TYPE_SOA = 6;
inline constexpr std::uint16_t TYPE_AAAA = 28;
inline constexpr std::uint16_t TYPE_OPT = 41;
inline constexpr std::uint16_t CLASS_IN = 1;

inline constexpr std::size_t MAX_UDP_PAYLOAD = 512;

enum class RCode : std::uint8_t {
    noerror = 0,
    formerr = 1,
    servfail = 2,
    nxdomain = 3,
    notimp = 4,
    refused = 5,
};

struct Question {
    std::string name;  // presentation form, casing preserved
    std::uint16_t qtype = TYPE_A;
    std::uint16_t qclass = CLASS_IN;
};

struct SoaData {
    std::string mname;
    std::string rname;
    std::uint32_t serial = 1;
    std::uint32_t refresh = 3600;
    std::uint32_t retry = 600;
    std::uint32_t expire = 86400;
    std::uint32_t minimum = 30;
};

struct ResourceRecord {
    std::string name;
    std::uint16_t rtype = TYPE_A;
    std::uint16_t rclass = CLASS_IN;
    std::uint32_t ttl = 0;
    std::variant<IPv4, std::string, SoaData, std::vector<std::uint8_t>> data;

    static ResourceRecord a(std::string name, std::uint32_t ttl, IPv4 ip) {
        return {std::move(name), TYPE_A, CLASS_IN, ttl, ip};
    }
    static ResourceRecord cname(std::string name, std::uint32_t ttl, std::string target) {
        return {std::move(name), TYPE_CNAME, CLASS_IN, ttl, std::move(target)};
    }
};

struct EcsOption {
    std::uint16_t family = 1;  // IPv4
    std::uint8_t source_prefix = 0;
    std::uint8_t scope_prefix = 0;
    IPv4 address;  // already truncated to source_prefix bits
};

struct Message {
    std::uint16_t id = 0;
    bool qr = false, aa = false, tc = false, rd = false, ra = false;
    std::uint8_t opcode = 0;
    RCode rcode = RCode::noerror;
    std::vector<Question> questions;
    std::vector<ResourceRecord> answers;
    std::vector<ResourceRecord> authorities;
    bool has_opt = false;
    std::uint16_t opt_udp_size = MAX_UDP_PAYLOAD;
    std::optional<EcsOption> ecs;
};

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

inline bool encode_name(std::vector<std::uint8_t>& out, std::string_view name) {
    if (!name.empty() && name.back() == '.') name.remove_suffix(1);
    if (name.empty()) {
        out.push_back(0);
        return true;
    }
    if (name.size() > 253) return false;
    for (auto label : split(name, '.')) {
        if (label.empty() || label.size() > 63) return false;
        out.push_back(static_cast<std::uint8_t>(label.size()));
        out.insert(out.end(), label.begin(), label.end());
    }
    out.push_back(0);
    return true;
}

class Reader {
public:
    Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

    bool u8(std::uint8_t& v) {
        if (pos_ + 1 > buf_.size()) return false;
        v = buf_[pos_++];
        return true;
    }
    bool u16(std::uint16_t& v) {
        if (pos_ + 2 > buf_.size()) return false;
        v = static_cast<std::uint16_t>((buf_[pos_] << 8) | buf_[pos_ + 1]);
        pos_ += 2;
        return true;
    }
    bool u32(std::uint32_t& v) {
        if (pos_ + 4 > buf_.size()) return false;
        v = (std::uint32_t{buf_[pos_]} << 24) | (std::uint32_t{buf_[pos_ + 1]} << 16) |
            (std::uint32_t{buf_[pos_ + 2]} << 8) | std::uint32_t{buf_[pos_ + 3]};
        pos_ += 4;
        return true;
    }
    bool bytes(std::size_t n, std::span<const std::uint8_t>& out) {
        if (pos_ + n > buf_.size()) return false;
        out = buf_.subspan(pos_, n);
        pos_ += n;
        return true;
    }
    bool skip(std::size_t n) {
        if (pos_ + n > buf_.size()) return false;
        pos_ += n;
        return true;
    }

    /// Reads a possibly compressed name starting at the cursor.
    bool name(std::string& out) {
        out.clear();
        std::size_t pos = pos_;
        std::size_t jumps = 0;
        bool jumped = false;
        while (true) {
            if (pos >= buf_.size()) return false;
            std::uint8_t len = buf_[pos];
            if ((len & 0xc0) == 0xc0) {
                if (pos + 1 >= buf_.size() || ++jumps > 32) return false;
                std::size_t target = static_cast<std::size_t>((len & 0x3f) << 8 | buf_[pos + 1]);
                if (!jumped) pos_ = pos + 2;
                jumped = true;
                if (target >= buf_.size()) return false;
                pos = target;
                continue;
            }
            if (len & 0xc0) return false;  // reserved label types
            if (len == 0) {
                if (!jumped) pos_ = pos + 1;
                return true;
            }
            if (pos + 1 + len > buf_.size()) return false;
            if (!out.empty()) out.push_back('.');
            out.append(reinterpret_cast<const char*>(buf_.data() + pos + 1), len);
            pos += 1 + len;
            if (out.size() > 255) return false;
        }
    }

    std::size_t position() const { return pos_; }

private:
    std::span<const std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<std::uint8_t> encode(const Message& m) {
    using namespace detail;
    std::vector<std::uint8_t> out;
    out.reserve(128);
    put_u16(out, m.id);
    std::uint16_t flags = 0;
    flags |= static_cast<std::uint16_t>(m.qr ? 0x8000 : 0);
    flags |= static_cast<std::uint16_t>((m.opcode & 0xf) << 11);
    flags |= static_cast<std::uint16_t>(m.aa ? 0x0400 : 0);
    flags |= static_cast<std::uint16_t>(m.tc ? 0x0200 : 0);
    flags |= static_cast<std::uint16_t>(m.rd ? 0x0100 : 0);
    flags |= static_cast<std::uint16_t>(m.ra ? 0x0080 : 0);
    flags |= static_cast<std::uint16_t>(static_cast<std::uint8_t>(m.rcode) & 0xf);
    put_u16(out, flags);
    put_u16(out, static_cast<std::uint16_t>(m.questions.size()));
    put_u16(out, static_cast<std::uint16_t>(m.answers.size()));
    put_u16(out, static_cast<std::uint16_t>(m.authorities.size()));
    put_u16(out, m.has_opt ? 1 : 0);

    for (const auto& q : m.questions) {
        encode_name(out, q.name);
        put_u16(out, q.qtype);
        put_u16(out, q.qclass);
    }

    auto encode_rr = [&](const ResourceRecord& rr) {
        if (!m.questions.empty() && rr.name == m.questions[0].name)
            put_u16(out, 0xc000 | 12);  // pointer to the question name
        else
            encode_name(out, rr.name);
        put_u16(out, rr.rtype);
        put_u16(out, rr.rclass);
        put_u32(out, rr.ttl);
        std::size_t len_at = out.size();
        put_u16(out, 0);  // RDLENGTH placeholder
        if (const auto* ip = std::get_if<IPv4>(&rr.data)) {
            put_u32(out, ip->addr);
        } else if (const auto* target = std::get_if<std::string>(&rr.data)) {
            encode_name(out, *target);
        } else if (const auto* soa = std::get_if<SoaData>(&rr.data)) {
            encode_name(out, soa->mname);
            encode_name(out, soa->rname);
            put_u32(out, soa->serial);
            put_u32(out, soa->refresh);
            put_u32(out, soa->retry);
            put_u32(out, soa->expire);
            put_u32(out, soa->minimum);
        } else {
            const auto& raw = std::get<std::vector<std::uint8_t>>(rr.data);
            out.insert(out.end(), raw.begin(), raw.end());
        }
        std::uint16_t rdlen = static_cast<std::uint16_t>(out.size() - len_at - 2);
        out[len_at] = static_cast<std::uint8_t>(rdlen >> 8);
        out[len_at + 1] = static_cast<std::uint8_t>(rdlen & 0xff);
    };

    for (const auto& rr : m.answers) encode_rr(rr);
    for (const auto& rr : m.authorities) encode_rr(rr);

    if (m.has_opt) {
        out.push_back(0);  // root owner
        put_u16(out, TYPE_OPT);
        put_u16(out, m.opt_udp_size);
        put_u32(out, 0);  // extended rcode, version, flags
        std::size_t len_at = out.size();
        put_u16(out, 0);
        if (m.ecs) {
            std::size_t addr_len = (m.ecs->source_prefix + 7) / 8;
            put_u16(out, 8);  // OPTION-CODE: client subnet
            put_u16(out, static_cast<std::uint16_t>(4 + addr_len));
            put_u16(out, m.ecs->family);
            out.push_back(m.ecs->source_prefix);
            out.push_back(m.ecs->scope_prefix);
            for (std::size_t i = 0; i < addr_len && i < 4; ++i)
                out.push_back(m.ecs->address.octet(static_cast<int>(i)));
        }
        std::uint16_t rdlen = static_cast<std::uint16_t>(out.size() - len_at - 2);
        out[len_at] = static_cast<std::uint8_t>(rdlen >> 8);
        out[len_at + 1] = static_cast<std::uint8_t>(rdlen & 0xff);
    }
    return out;
}

inline Expected<Message, std::string> parse(std::span<const std::uint8_t> buf) {
    using Fail = Expected<Message, std::string>;
    detail::Reader r(buf);
    Message m;
    std::uint16_t flags = 0, qd = 0, an = 0, ns = 0, ar = 0;
    if (!r.u16(m.id) || !r.u16(flags) || !r.u16(qd) || !r.u16(an) || !r.u16(ns) || !r.u16(ar))
        return Fail::failure("truncated header");
    m.qr = flags & 0x8000;
    m.opcode = static_cast<std::uint8_t>((flags >> 11) & 0xf);
    m.aa = flags & 0x0400;
    m.tc = flags & 0x0200;
    m.rd = flags & 0x0100;
    m.ra = flags & 0x0080;
    m.rcode = static_cast<RCode>(flags & 0xf);

    for (std::uint16_t i = 0; i < qd; ++i) {
        Question q;
        if (!r.name(q.name) || !r.u16(q.qtype) || !r.u16(q.qclass))
            return Fail::failure("truncated question");
        m.questions.push_back(std::move(q));
    }

    auto parse_rr = [&](ResourceRecord& rr, bool& is_opt) -> bool {
        if (!r.name(rr.name)) return false;
        std::uint16_t rdlen = 0;
        if (!r.u16(rr.rtype) || !r.u16(rr.rclass) || !r.u32(rr.ttl) || !r.u16(rdlen))
            return false;
        is_opt = rr.rtype == TYPE_OPT;
        std::size_t rdata_end = r.position() + rdlen;
        if (rr.rtype == TYPE_A && rdlen == 4) {
            std::uint32_t v = 0;
            if (!r.u32(v)) return false;
            rr.data = IPv4{v};
        } else if (rr.rtype == TYPE_CNAME || rr.rtype == TYPE_NS) {
            std::string target;
            if (!r.name(target)) return false;
            rr.data = std::move(target);
        } else if (rr.rtype == TYPE_SOA) {
            SoaData soa;
            if (!r.name(soa.mname) || !r.name(soa.rname) || !r.u32(soa.serial) ||
                !r.u32(soa.refresh) || !r.u32(soa.retry) || !r.u32(soa.expire) ||
                !r.u32(soa.minimum))
                return false;
            rr.data = std::move(soa);
        } else {
            std::span<const std::uint8_t> raw;
            if (!r.bytes(rdlen, raw)) return false;
            rr.data = std::vector<std::uint8_t>(raw.begin(), raw.end());
        }
        return r.position() == rdata_end;
    };

    auto parse_opt_rdata = [&](const std::vector<std::uint8_t>& raw) {
        std::size_t pos = 0;
        while (pos + 4 <= raw.size()) {
            std::uint16_t code = static_cast<std::uint16_t>((raw[pos] << 8) | raw[pos + 1]);
            std::uint16_t olen = static_cast<std::uint16_t>((raw[pos + 2] << 8) | raw[pos + 3]);
            pos += 4;
            if (pos + olen > raw.size()) return;
            if (code == 8 && olen >= 4) {
                EcsOption ecs;
                ecs.family = static_cast<std::uint16_t>((raw[pos] << 8) | raw[pos + 1]);
                ecs.source_prefix = raw[pos + 2];
                ecs.scope_prefix = raw[pos + 3];
                std::uint32_t addr = 0;
                for (std::size_t i = 0; i + 4 < olen && i < 4; ++i)
                    addr |= std::uint32_t{raw[pos + 4 + i]} << (24 - 8 * i);
                ecs.address = IPv4{addr};
                m.ecs = ecs;
            }
            pos += olen;
        }
    };

    for (std::uint16_t i = 0; i < an; ++i) {
        ResourceRecord rr;
        bool is_opt = false;
        if (!parse_rr(rr, is_opt)) return Fail::failure("truncated answer");
        m.answers.push_back(std::move(rr));
    }
    for (std::uint16_t i = 0; i < ns; ++i) {
        ResourceRecord rr;
        bool is_opt = false;
        if (!parse_rr(rr, is_opt)) return Fail::failure("truncated authority");
        m.authorities.push_back(std::move(rr));
    }
    for (std::uint16_t i = 0; i < ar; ++i) {
        ResourceRecord rr;
        bool is_opt = false;
        if (!parse_rr(rr, is_opt)) return Fail::failure("truncated additional");
        if (is_opt) {
            m.has_opt = true;
            m.opt_udp_size = rr.rclass;
            if (const auto* raw = std::get_if<std::vector<std::uint8_t>>(&rr.data))
                parse_opt_rdata(*raw);
        }
        // other additional records are ignored
    }
    return m;
}

}  // namespace metacdn::dns
