"""Generates tests/data/aivdm_corpus.nmea and its golden decode
tests/data/aivdm_golden.csv using the reference decoder in ais_ref.py.

Run from the repo root:  python3 tests/tools/make_corpus.py

The corpus is synthesized (seeded) plus documented real sentences used
as layout anchors. The golden file freezes the reference decoder's raw
field values; the C++ conformance suite compares against it
field-for-field.
"""

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import ais_ref  # noqa: E402


def armor(v: int) -> str:
    return chr(v + 48) if v < 40 else chr(v + 56)


class BitPacker:
    def __init__(self):
        self.bits = []

    def u(self, value: int, width: int):
        for k in range(width - 1, -1, -1):
            self.bits.append((value >> k) & 1)
        return self

    def s(self, value: int, width: int):
        return self.u(value & ((1 << width) - 1), width)

    def payload(self):
        bits = self.bits[:]
        fill = (6 - len(bits) % 6) % 6
        bits += [0] * fill
        chars = []
        for i in range(0, len(bits), 6):
            v = 0
            for b in bits[i:i + 6]:
                v = (v << 1) | b
            chars.append(armor(v))
        return "".join(chars), fill


def frame(frag_count, frag_index, msg_id, channel, payload, fill):
    mid = "" if msg_id is None else str(msg_id)
    body = f"AIVDM,{frag_count},{frag_index},{mid},{channel},{payload},{fill}"
    return f"!{body}*{ais_ref.checksum(body):02X}"


def encode_123(t, mmsi, status, sog_raw, lon_raw, lat_raw, cog_raw, second):
    p = BitPacker()
    p.u(t, 6).u(0, 2).u(mmsi, 30).u(status, 4).u(0x80, 8).u(sog_raw, 10)
    p.u(0, 1).s(lon_raw, 28).s(lat_raw, 27).u(cog_raw, 12).u(511, 9)
    p.u(second, 6).u(0, 2).u(0, 3).u(0, 1).u(0, 19)
    assert len(p.bits) == 168
    return p.payload()


def encode_18(mmsi, sog_raw, lon_raw, lat_raw, cog_raw, second):
    p = BitPacker()
    p.u(18, 6).u(0, 2).u(mmsi, 30).u(0, 8).u(sog_raw, 10)
    p.u(0, 1).s(lon_raw, 28).s(lat_raw, 27).u(cog_raw, 12).u(511, 9)
    p.u(second, 6).u(0, 2).u(1, 1).u(0, 1).u(0, 1).u(0, 1).u(0, 1).u(0, 1)
    p.u(0, 1).u(0, 20)
    assert len(p.bits) == 168
    return p.payload()


def encode_19(mmsi, sog_raw, lon_raw, lat_raw, cog_raw, second):
    p = BitPacker()
    p.u(19, 6).u(0, 2).u(mmsi, 30).u(0, 8).u(sog_raw, 10)
    p.u(0, 1).s(lon_raw, 28).s(lat_raw, 27).u(cog_raw, 12).u(511, 9)
    p.u(second, 6).u(0, 4)
    for _ in range(20):  # name: 20 chars of '@'
        p.u(0, 6)
    p.u(0, 8).u(0, 30).u(0, 4).u(0, 1).u(1, 1).u(0, 1).u(0, 4)
    assert len(p.bits) == 312
    return p.payload()


def encode_type4(mmsi, lon_raw, lat_raw):
    p = BitPacker()
    p.u(4, 6).u(0, 2).u(mmsi, 30).u(2018, 14).u(7, 4).u(1, 5).u(0, 5)
    p.u(0, 6).u(0, 6).u(0, 1).s(lon_raw, 28).s(lat_raw, 27).u(7, 4)
    p.u(0, 10).u(0, 1).u(0, 19)
    assert len(p.bits) == 168
    return p.payload()


def encode_type5(mmsi):
    p = BitPacker()
    p.u(5, 6).u(0, 2).u(mmsi, 30).u(0, 424 - 38)
    assert len(p.bits) == 424
    return p.payload()


LON_NA = 181 * 600000
LAT_NA = 91 * 600000

# Documented real sentence (gpsd AIVDM docs) used as a layout anchor.
ANCHOR = "!AIVDM,1,1,,B,177KQJ5000G?tO`K>RA1wUbN0TKH,0*5C"
ANCHOR_EXPECT = {"msg_type": 1, "mmsi": 477553000, "status_raw": 5}


def main():
    rng = random.Random(20180701)
    out_lines = []
    golden = []  # rows for decoded position messages, in stream order
    expected = {
        "lines": 0, "checksum_failures": 0, "framing_errors": 0,
        "positions": 0, "unavailable": 0, "skipped_by_type": {},
    }
    mid = 0

    def emit(line):
        out_lines.append(line)
        expected["lines"] += 1

    def emit_pos(t, mmsi, status, sog_raw, lon_raw, lat_raw, cog_raw,
                 second, split=False, swap=False, interleave=None):
        nonlocal mid
        if t in (1, 2, 3):
            payload, fill = encode_123(t, mmsi, status, sog_raw, lon_raw,
                                       lat_raw, cog_raw, second)
        elif t == 18:
            payload, fill = encode_18(mmsi, sog_raw, lon_raw, lat_raw,
                                      cog_raw, second)
        else:
            payload, fill = encode_19(mmsi, sog_raw, lon_raw, lat_raw,
                                      cog_raw, second)
        ch = rng.choice("AB")
        if not split:
            emit(frame(1, 1, None, ch, payload, fill))
        else:
            cut = len(payload) // 2
            mid = (mid + 1) % 10
            f1 = frame(2, 1, mid, ch, payload[:cut], 0)
            f2 = frame(2, 2, mid, ch, payload[cut:], fill)
            if swap:
                f1, f2 = f2, f1
            emit(f1)
            if interleave:
                emit(interleave)
            emit(f2)
        avail = (lon_raw != LON_NA and lat_raw != LAT_NA)
        expected["positions"] += 1
        if not avail:
            expected["unavailable"] += 1
        golden.append({
            "msg_type": t, "mmsi": mmsi,
            "status_raw": status if t in (1, 2, 3) else "",
            "sog_raw": sog_raw, "lon_raw": lon_raw, "lat_raw": lat_raw,
            "cog_raw": cog_raw, "available": int(avail),
        })

    def skip_type(t):
        expected["skipped_by_type"][str(t)] = \
            expected["skipped_by_type"].get(str(t), 0) + 1

    # Anchor first: validates the reference layout against documented values.
    ref = ais_ref.parse_frame(ANCHOR)
    d = ais_ref.decode(ais_ref.payload_bits([(ref["payload"], ref["fill"])]))
    for k, v in ANCHOR_EXPECT.items():
        assert d[k] == v, f"anchor mismatch {k}: {d[k]} != {v}"
    assert abs(d["lon_raw"] / 600000.0 - (-122.345832)) < 1e-5
    assert abs(d["lat_raw"] / 600000.0 - 47.582833) < 1e-5
    emit(ANCHOR)
    expected["positions"] += 1
    golden.append({
        "msg_type": 1, "mmsi": d["mmsi"], "status_raw": d["status_raw"],
        "sog_raw": d["sog_raw"], "lon_raw": d["lon_raw"],
        "lat_raw": d["lat_raw"], "cog_raw": d["cog_raw"], "available": 1,
    })

    def rand_fields():
        lat = rng.uniform(53.0, 57.5)
        lon = rng.uniform(3.5, 9.5)
        return {
            "mmsi": rng.randrange(200000000, 276999999),
            "status": rng.randrange(0, 9),
            "sog_raw": rng.randrange(0, 301),
            "lon_raw": round(lon * 600000),
            "lat_raw": round(lat * 600000),
            "cog_raw": rng.randrange(0, 3600),
            "second": rng.randrange(0, 60),
        }

    specials = []
    for t, n in ((1, 40), (2, 14), (3, 14), (18, 28)):
        for _ in range(n):
            f = rand_fields()
            emit_pos(t, f["mmsi"], f["status"], f["sog_raw"],
                     f["lon_raw"], f["lat_raw"], f["cog_raw"], f["second"])
    for i in range(15):
        f = rand_fields()
        emit_pos(19, f["mmsi"], 0, f["sog_raw"], f["lon_raw"], f["lat_raw"],
                 f["cog_raw"], f["second"], split=(i % 2 == 0),
                 swap=(i == 4))

    # Sentinel cases: unavailable position / sog / cog.
    f = rand_fields()
    emit_pos(1, f["mmsi"], 0, f["sog_raw"], LON_NA, LAT_NA, f["cog_raw"], 1)
    f = rand_fields()
    emit_pos(3, f["mmsi"], 1, f["sog_raw"], f["lon_raw"], LAT_NA,
             f["cog_raw"], 2)
    f = rand_fields()
    emit_pos(18, f["mmsi"], 0, 1023, f["lon_raw"], f["lat_raw"], 3600, 3)
    f = rand_fields()
    emit_pos(1, f["mmsi"], 15, 1023, f["lon_raw"], f["lat_raw"], 3600, 4)
    f = rand_fields()
    emit_pos(2, f["mmsi"], 2, 1022, f["lon_raw"], f["lat_raw"], 3599, 5)

    # Non-position types: counted and skipped.
    for _ in range(3):
        f = rand_fields()
        payload, fill = encode_type4(2190074, f["lon_raw"], f["lat_raw"])
        emit(frame(1, 1, None, "A", payload, fill))
        skip_type(4)
    payload, fill = encode_type5(219000606)
    cut = 40
    emit(frame(2, 1, 1, "B", payload[:cut], 0))
    emit(frame(2, 2, 1, "B", payload[cut:], fill))
    skip_type(5)

    # Damaged lines: checksum and framing failures.
    f = rand_fields()
    payload, fill = encode_123(1, f["mmsi"], 0, 10, f["lon_raw"],
                               f["lat_raw"], 100, 6)
    good = frame(1, 1, None, "A", payload, fill)
    bad_cs = good[:-2] + ("00" if good[-2:] != "00" else "11")
    emit(bad_cs)
    expected["checksum_failures"] += 1
    emit(good[:-6] + good[-5:])  # drop the '*'
    expected["framing_errors"] += 1
    emit("!AIVDM,1,1,,A,177KQ,0*ZZ")  # non-hex checksum
    expected["framing_errors"] += 1
    body = "AIVDM,1,1,,A,1" + chr(0x58) + "0000,0"  # 'X' outside armor set
    emit(f"!{body}*{ais_ref.checksum(body):02X}")
    expected["checksum_bad_armor"] = 1

    data_dir = Path(__file__).resolve().parents[1] / "data"
    data_dir.mkdir(parents=True, exist_ok=True)
    corpus = data_dir / "aivdm_corpus.nmea"
    corpus.write_text("\n".join(out_lines) + "\n")

    # Cross-check: run the reference decoder over the corpus file and
    # confirm it reproduces the golden rows in order.
    decoded = []
    bad = 0
    for kind, d in ais_ref.decode_file(corpus.read_text().splitlines()):
        if kind == "pos":
            decoded.append(d)
        elif kind == "bad":
            bad += 1
    assert len(decoded) == len(golden), (len(decoded), len(golden))
    for i, (d, g) in enumerate(zip(decoded, golden)):
        for k in ("msg_type", "mmsi", "sog_raw", "lon_raw", "lat_raw",
                  "cog_raw"):
            assert d[k] == g[k], (i, k, d[k], g[k])

    with open(data_dir / "aivdm_golden.csv", "w") as fh:
        fh.write("msg_type,mmsi,status_raw,sog_raw,lon_raw,lat_raw,"
                 "cog_raw,available\n")
        for g in golden:
            fh.write(f"{g['msg_type']},{g['mmsi']},{g['status_raw']},"
                     f"{g['sog_raw']},{g['lon_raw']},{g['lat_raw']},"
                     f"{g['cog_raw']},{g['available']}\n")
    with open(data_dir / "aivdm_expected_stats.json", "w") as fh:
        json.dump(expected, fh, indent=1)
    print(f"corpus: {len(out_lines)} lines, {len(golden)} position messages "
          f"({expected['unavailable']} unavailable), reference flagged {bad} bad")


if __name__ == "__main__":
    main()
