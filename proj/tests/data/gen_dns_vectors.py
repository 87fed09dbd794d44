#!/usr/bin/env python3
"""Reference DNS message encoder used to produce the frozen wire vectors in
test_dns_wire.cpp. Written independently of the C++ implementation; run it to
regenerate the byte arrays (they are pasted into the test, not loaded at
runtime).

Encoding policy mirrored by the server:
  - question name: full label encoding
  - answer/authority owner equal to the question name: pointer to offset 12
  - names inside RDATA: uncompressed
  - OPT record last, ECS option (code 8) with scope /24 in responses

A small independent decoder at the bottom re-parses every vector as a sanity
check before printing.
"""

import struct


def name_bytes(name: str) -> bytes:
    out = b""
    if name:
        for label in name.rstrip(".").split("."):
            raw = label.encode()
            assert 0 < len(raw) < 64
            out += bytes([len(raw)]) + raw
    return out + b"\x00"


def header(msg_id, flags, qd, an, ns, ar):
    return struct.pack(">HHHHHH", msg_id, flags, qd, an, ns, ar)


def question(name, qtype, qclass=1):
    return name_bytes(name) + struct.pack(">HH", qtype, qclass)


def rr(owner_ptr_or_name, rtype, ttl, rdata, rclass=1):
    if isinstance(owner_ptr_or_name, int):
        owner = struct.pack(">H", 0xC000 | owner_ptr_or_name)
    else:
        owner = name_bytes(owner_ptr_or_name)
    return owner + struct.pack(">HHIH", rtype, rclass, ttl, len(rdata)) + rdata


def soa_rdata(mname, rname, serial, refresh, retry, expire, minimum):
    return (name_bytes(mname) + name_bytes(rname) +
            struct.pack(">IIIII", serial, refresh, retry, expire, minimum))


def opt(udp_size, ecs=None):
    rdata = b""
    if ecs is not None:
        family, source, scope, addr = ecs
        addr_len = (source + 7) // 8
        rdata = struct.pack(">HHHBB", 8, 4 + addr_len, family, source, scope)
        rdata += bytes(addr[:addr_len])
    return b"\x00" + struct.pack(">HHIH", 41, udp_size, 0, len(rdata)) + rdata


FLAG_QR = 0x8000
FLAG_AA = 0x0400
FLAG_RD = 0x0100

ZONE = "cdx.metacdn.test"
PORTAL_CNAME = "2-01-446b-0004." + ZONE
PORTAL_A = "2-01-446b-0005." + ZONE

vectors = {}

# V1: A query for a cname-target app -> CNAME answer, TTL 20
q1 = header(0x1234, FLAG_RD, 1, 0, 0, 0) + question(PORTAL_CNAME, 1)
r1 = (header(0x1234, FLAG_QR | FLAG_AA | FLAG_RD, 1, 1, 0, 0)
      + question(PORTAL_CNAME, 1)
      + rr(12, 5, 20, name_bytes("gw.cdna.test")))
vectors["cname_query"] = q1
vectors["cname_response"] = r1

# V2: A query for an address-list app -> A answer, TTL 300
q2 = header(0x0002, FLAG_RD, 1, 0, 0, 0) + question(PORTAL_A, 1)
r2 = (header(0x0002, FLAG_QR | FLAG_AA | FLAG_RD, 1, 1, 0, 0)
      + question(PORTAL_A, 1)
      + rr(12, 1, 300, bytes([198, 51, 100, 7])))
vectors["a_query"] = q2
vectors["a_response"] = r2

# V3: unknown name in the zone -> NXDOMAIN with SOA (negative TTL 30)
q3 = header(0xBEEF, FLAG_RD, 1, 0, 0, 0) + question("nope." + ZONE, 1)
r3 = (header(0xBEEF, FLAG_QR | FLAG_AA | FLAG_RD | 3, 1, 0, 1, 0)
      + question("nope." + ZONE, 1)
      + rr(ZONE, 6, 30,
           soa_rdata("ns." + ZONE, "hostmaster." + ZONE, 1, 3600, 600, 86400, 30)))
vectors["nxdomain_query"] = q3
vectors["nxdomain_response"] = r3

# V4: V1 plus EDNS0 ECS 203.0.113.0/24 -> answer echoes ECS with scope 24
q4 = (header(0x4242, FLAG_RD, 1, 0, 0, 1) + question(PORTAL_CNAME, 1)
      + opt(4096, ecs=(1, 24, 0, [203, 0, 113])))
r4 = (header(0x4242, FLAG_QR | FLAG_AA | FLAG_RD, 1, 1, 0, 1)
      + question(PORTAL_CNAME, 1)
      + rr(12, 5, 20, name_bytes("gw.cdna.test"))
      + opt(512, ecs=(1, 24, 24, [203, 0, 113])))
vectors["ecs_query"] = q4
vectors["ecs_response"] = r4


# ---- independent decoder (sanity check of the vectors) ----

def decode_name(buf, pos):
    labels = []
    jumps = 0
    end = None
    while True:
        l = buf[pos]
        if l & 0xC0 == 0xC0:
            if end is None:
                end = pos + 2
            pos = ((l & 0x3F) << 8) | buf[pos + 1]
            jumps += 1
            assert jumps < 16
            continue
        if l == 0:
            if end is None:
                end = pos + 1
            return ".".join(labels), end
        labels.append(buf[pos + 1:pos + 1 + l].decode())
        pos += 1 + l


def decode(buf):
    msg_id, flags, qd, an, ns, ar = struct.unpack(">HHHHHH", buf[:12])
    pos = 12
    questions, answers, authorities, additionals = [], [], [], []
    for _ in range(qd):
        nm, pos = decode_name(buf, pos)
        qtype, qclass = struct.unpack(">HH", buf[pos:pos + 4])
        pos += 4
        questions.append((nm, qtype, qclass))
    def rrs(count, out):
        nonlocal pos
        for _ in range(count):
            nm, pos2 = decode_name(buf, pos)
            pos = pos2
            rtype, rclass, ttl, rdlen = struct.unpack(">HHIH", buf[pos:pos + 10])
            pos += 10
            rdata = buf[pos:pos + rdlen]
            pos += rdlen
            out.append((nm, rtype, rclass, ttl, rdata))
    rrs(an, answers)
    rrs(ns, authorities)
    rrs(ar, additionals)
    assert pos == len(buf), (pos, len(buf))
    return msg_id, flags, questions, answers, authorities, additionals


def check():
    _, f, qs, ans, _, _ = decode(vectors["cname_response"])
    assert f == 0x8500 and qs[0][0] == PORTAL_CNAME
    assert ans[0][1] == 5 and ans[0][3] == 20
    target, _ = decode_name(ans[0][4], 0)
    assert target == "gw.cdna.test"

    _, f, _, ans, _, _ = decode(vectors["a_response"])
    assert ans[0][1] == 1 and ans[0][3] == 300 and ans[0][4] == bytes([198, 51, 100, 7])

    _, f, _, ans, auth, _ = decode(vectors["nxdomain_response"])
    assert f & 0xF == 3 and not ans and auth[0][1] == 6

    _, _, _, ans, _, add = decode(vectors["ecs_response"])
    assert add[0][1] == 41
    rdata = add[0][4]
    code, olen, family, source, scope = struct.unpack(">HHHBB", rdata[:8])
    assert (code, family, source, scope) == (8, 1, 24, 24)
    assert rdata[8:11] == bytes([203, 0, 113])
    print("// all vectors decode-checked", flush=True)


def emit():
    for name, data in vectors.items():
        hexes = ", ".join(f"0x{b:02x}" for b in data)
        print(f"inline constexpr std::uint8_t {name}[] = {{{hexes}}};")
        print()


if __name__ == "__main__":
    check()
    emit()
