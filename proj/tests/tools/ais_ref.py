"""Reference AIVDM decoder used to produce the frozen golden file.

Independent of the C++ implementation: field offsets are taken straight
from the ITU-R M.1371 layout tables. Only message types 1/2/3/18/19 are
decoded to position fields; everything else reports its type and is
otherwise ignored.
"""

ARMOR_OK = set(range(48, 88)) | set(range(96, 120))


def checksum(body: str) -> int:
    c = 0
    for ch in body:
        c ^= ord(ch)
    return c


def parse_frame(line: str):
    """Split one !AIVDM sentence into its fields. Raises ValueError on
    bad framing or checksum mismatch."""
    if not line.startswith("!"):
        raise ValueError("framing: no '!'")
    star = line.rfind("*")
    if star < 0 or len(line) < star + 3:
        raise ValueError("framing: no checksum")
    body = line[1:star]
    try:
        stated = int(line[star + 1:star + 3], 16)
    except ValueError:
        raise ValueError("framing: non-hex checksum")
    if checksum(body) != stated:
        raise ValueError("checksum mismatch")
    parts = body.split(",")
    if len(parts) != 7 or parts[0] not in ("AIVDM", "AIVDO"):
        raise ValueError("framing: field count")
    return {
        "frag_count": int(parts[1]),
        "frag_index": int(parts[2]),
        "msg_id": None if parts[3] == "" else int(parts[3]),
        "channel": parts[4],
        "payload": parts[5],
        "fill": int(parts[6]),
    }


def dearmor(payload: str):
    vals = []
    for i, ch in enumerate(payload):
        code = ord(ch)
        if code not in ARMOR_OK:
            raise ValueError(f"bad armor char {ch!r} at {i}")
        v = code - 48
        if v > 40:
            v -= 8
        vals.append(v)
    return vals


def payload_bits(payloads_and_fills):
    bits = []
    for payload, fill in payloads_and_fills:
        these = []
        for v in dearmor(payload):
            for k in range(5, -1, -1):
                these.append((v >> k) & 1)
        if fill:
            these = these[:-fill]
        bits.extend(these)
    return bits


def ubits(bits, start, length):
    v = 0
    for i in range(start, start + length):
        v = (v << 1) | bits[i]
    return v


def sbits(bits, start, length):
    v = ubits(bits, start, length)
    if bits[start]:
        v -= 1 << length
    return v


def decode(bits):
    """Returns dict with raw position fields, or {'msg_type': t} for
    non-position types."""
    if len(bits) < 6:
        raise ValueError("truncated: no type field")
    t = ubits(bits, 0, 6)
    if t in (1, 2, 3):
        if len(bits) < 168:
            raise ValueError("truncated type 1/2/3")
        return {
            "msg_type": t,
            "mmsi": ubits(bits, 8, 30),
            "status_raw": ubits(bits, 38, 4),
            "sog_raw": ubits(bits, 50, 10),
            "lon_raw": sbits(bits, 61, 28),
            "lat_raw": sbits(bits, 89, 27),
            "cog_raw": ubits(bits, 116, 12),
        }
    if t == 18 or t == 19:
        need = 168 if t == 18 else 312
        if len(bits) < need:
            raise ValueError(f"truncated type {t}")
        return {
            "msg_type": t,
            "mmsi": ubits(bits, 8, 30),
            "status_raw": None,
            "sog_raw": ubits(bits, 46, 10),
            "lon_raw": sbits(bits, 57, 28),
            "lat_raw": sbits(bits, 85, 27),
            "cog_raw": ubits(bits, 112, 12),
        }
    return {"msg_type": t}


def decode_file(lines):
    """Stream lines; reassemble multipart by (channel, msg_id). Yields
    (kind, data) where kind is 'pos', 'skip', or 'bad'."""
    partial = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if "\t" in line:
            line = line.split("\t", 1)[1]
        try:
            f = parse_frame(line)
        except ValueError as e:
            yield ("bad", str(e))
            continue
        if f["frag_count"] == 1:
            group = [(f["payload"], f["fill"])]
        else:
            key = (f["channel"], f["msg_id"])
            slot = partial.setdefault(key, {})
            slot[f["frag_index"]] = (f["payload"], f["fill"])
            if len(slot) < f["frag_count"]:
                continue
            group = [slot[i] for i in sorted(slot)]
            del partial[key]
        try:
            d = decode(payload_bits(group))
        except ValueError as e:
            yield ("bad", str(e))
            continue
        if "mmsi" in d:
            yield ("pos", d)
        else:
            yield ("skip", d)
