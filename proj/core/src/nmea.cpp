#include "jacktrack/nmea.hpp"

#include <charconv>

#include "jacktrack/records.hpp"

namespace jacktrack::nmea {

namespace {

constexpr std::int32_t kLonUnavailableRaw = 181 * 600000;  // 0x6791AC0
constexpr std::int32_t kLatUnavailableRaw = 91 * 600000;   // 0x3412140
constexpr int kSogUnavailableRaw = 1023;
constexpr int kCogUnavailableRaw = 3600;

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

// Strips an optional "epoch-seconds<TAB>" broker prefix.
std::string_view split_broker_prefix(std::string_view line, std::optional<Timestamp>& ts) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) return line;
    ts = parse_epoch_seconds(line.substr(0, tab));
    return line.substr(tab + 1);
}

}  // namespace

ChecksumStatus validate_checksum(std::string_view sentence) {
    if (sentence.empty() || sentence.front() != '!') return ChecksumStatus::bad_framing;
    const auto star = sentence.rfind('*');
    if (star == std::string_view::npos || star + 3 > sentence.size())
        return ChecksumStatus::bad_framing;
    auto hex_val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    const int hi = hex_val(sentence[star + 1]);
    const int lo = hex_val(sentence[star + 2]);
    if (hi < 0 || lo < 0) return ChecksumStatus::bad_framing;
    int sum = 0;
    for (std::size_t i = 1; i < star; ++i) sum ^= static_cast<unsigned char>(sentence[i]);
    return sum == (hi << 4 | lo) ? ChecksumStatus::ok : ChecksumStatus::mismatch;
}

bool is_armor_char(char c) {
    const int code = static_cast<unsigned char>(c);
    return (code >= 48 && code <= 87) || (code >= 96 && code <= 119);
}

std::optional<int> dearmor(char c) {
    if (!is_armor_char(c)) return std::nullopt;
    int v = static_cast<unsigned char>(c) - 48;
    if (v > 40) v -= 8;
    return v;
}

char armor(int value) {
    return static_cast<char>(value < 40 ? value + 48 : value + 56);
}

void BitBuffer::append_payload(std::string_view armored, int fill_bits) {
    if (fill_bits < 0 || fill_bits > 5)
        throw InputError("fill bits " + std::to_string(fill_bits) + " outside 0..5");
    for (std::size_t i = 0; i < armored.size(); ++i) {
        const auto v = dearmor(armored[i]);
        if (!v)
            throw InputError(std::string("payload character '") + armored[i] +
                             "' at position " + std::to_string(i) +
                             " outside the 6-bit armoring alphabet");
        for (int k = 5; k >= 0; --k) bits_.push_back(static_cast<std::uint8_t>((*v >> k) & 1));
    }
    if (fill_bits > 0) {
        if (static_cast<std::size_t>(fill_bits) > bits_.size())
            throw InputError("fill bits exceed payload length");
        bits_.resize(bits_.size() - static_cast<std::size_t>(fill_bits));
    }
}

std::uint32_t BitBuffer::ubits(std::size_t start, std::size_t len) const {
    std::uint32_t v = 0;
    for (std::size_t i = start; i < start + len; ++i) v = (v << 1) | bits_[i];
    return v;
}

std::int32_t BitBuffer::sbits(std::size_t start, std::size_t len) const {
    std::int64_t v = ubits(start, len);
    if (bits_[start]) v -= std::int64_t{1} << len;
    return static_cast<std::int32_t>(v);
}

BitBuffer assemble(std::span<const RawSentence> fragments) {
    if (fragments.empty()) throw InputError("assemble: no fragments");
    const int count = fragments.front().frag_count;
    std::vector<const RawSentence*> by_index(static_cast<std::size_t>(count), nullptr);
    for (const auto& f : fragments) {
        if (f.frag_count != count)
            throw InputError("assemble: fragments disagree on fragment count");
        if (f.frag_index < 1 || f.frag_index > count)
            throw InputError("assemble: fragment index " + std::to_string(f.frag_index) +
                             " outside 1.." + std::to_string(count));
        auto& slot = by_index[static_cast<std::size_t>(f.frag_index - 1)];
        if (slot != nullptr)
            throw InputError("assemble: duplicate fragment index " +
                             std::to_string(f.frag_index));
        slot = &f;
    }
    BitBuffer bits;
    for (int i = 0; i < count; ++i) {
        const RawSentence* f = by_index[static_cast<std::size_t>(i)];
        if (f == nullptr)
            throw InputError("assemble: incomplete message, missing fragment " +
                             std::to_string(i + 1));
        bits.append_payload(f->payload, i + 1 == count ? f->fill_bits : 0);
    }
    return bits;
}

DecodeOutcome decode_position_report(const BitBuffer& bits) {
    if (bits.size() < 6) throw InputError("decode: buffer shorter than the type field");
    const int type = static_cast<int>(bits.ubits(0, 6));
    DecodeOutcome out;
    out.msg_type = type;

    std::size_t sog_at = 0, lon_at = 0, lat_at = 0, cog_at = 0;
    bool has_status = false;
    std::size_t need = 0;
    if (type == 1 || type == 2 || type == 3) {
        need = 168;
        has_status = true;
        sog_at = 50;
        lon_at = 61;
        lat_at = 89;
        cog_at = 116;
    } else if (type == 18 || type == 19) {
        need = type == 18 ? 168 : 312;
        sog_at = 46;
        lon_at = 57;
        lat_at = 85;
        cog_at = 112;
    } else {
        out.kind = DecodeKind::skipped_type;
        return out;
    }
    if (bits.size() < need)
        throw InputError("decode: type " + std::to_string(type) + " needs " +
                         std::to_string(need) + " bits, got " + std::to_string(bits.size()));

    const std::int32_t lon_raw = bits.sbits(lon_at, 28);
    const std::int32_t lat_raw = bits.sbits(lat_at, 27);
    const double lon = lon_raw / 600000.0;
    const double lat = lat_raw / 600000.0;
    if (lon_raw == kLonUnavailableRaw || lat_raw == kLatUnavailableRaw ||
        !coords_valid(lat, lon)) {
        out.kind = DecodeKind::position_unavailable;
        return out;
    }

    DecodedPosition pos;
    pos.msg_type = type;
    pos.mmsi = bits.ubits(8, 30);
    pos.lat = lat;
    pos.lon = lon;
    const int sog_raw = static_cast<int>(bits.ubits(sog_at, 10));
    if (sog_raw != kSogUnavailableRaw) pos.sog_kn = sog_raw / 10.0;
    const int cog_raw = static_cast<int>(bits.ubits(cog_at, 12));
    if (cog_raw < kCogUnavailableRaw) pos.cog_deg = cog_raw / 10.0;
    if (has_status) pos.nav_status = static_cast<int>(bits.ubits(38, 4));

    out.kind = DecodeKind::position;
    out.position = pos;
    return out;
}

StreamDecoder::StreamDecoder(Options options) : options_(options) {}

void StreamDecoder::expire_stale_groups() {
    for (auto it = partial_.begin(); it != partial_.end();) {
        if (seq_ > it->second.last_seen_seq +
                       static_cast<std::uint64_t>(options_.reassembly_window)) {
            ++stats_.multipart_expired;
            it = partial_.erase(it);
        } else {
            ++it;
        }
    }
}

std::optional<TimedPosition> StreamDecoder::feed_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) return std::nullopt;
    ++stats_.lines_in;
    ++seq_;
    expire_stale_groups();

    std::optional<Timestamp> broker_ts;
    line = split_broker_prefix(line, broker_ts);

    switch (validate_checksum(line)) {
        case ChecksumStatus::ok:
            break;
        case ChecksumStatus::mismatch:
            ++stats_.checksum_failures;
            if (options_.strict) throw InputError("checksum mismatch: " + std::string(line));
            return std::nullopt;
        case ChecksumStatus::bad_framing:
            ++stats_.framing_errors;
            if (options_.strict) throw InputError("malformed sentence: " + std::string(line));
            return std::nullopt;
    }

    // AIVDM,<count>,<index>,<id>,<channel>,<payload>,<fill>*CS
    const auto star = line.rfind('*');
    std::string_view body = line.substr(1, star - 1);
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = body.find(',', pos);
        fields.push_back(body.substr(pos, comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (fields.size() != 7 || (fields[0] != "AIVDM" && fields[0] != "AIVDO")) {
        ++stats_.framing_errors;
        if (options_.strict) throw InputError("unexpected sentence form: " + std::string(line));
        return std::nullopt;
    }

    RawSentence s;
    int msg_id = 0;
    if (!parse_int(fields[1], s.frag_count) || !parse_int(fields[2], s.frag_index) ||
        s.frag_count < 1 || s.frag_index < 1 || s.frag_index > s.frag_count ||
        fields[4].size() != 1 || !parse_int(fields[6], s.fill_bits) || s.fill_bits < 0 ||
        s.fill_bits > 5) {
        ++stats_.framing_errors;
        if (options_.strict) throw InputError("bad sentence fields: " + std::string(line));
        return std::nullopt;
    }
    if (!fields[3].empty() && parse_int(fields[3], msg_id)) s.msg_id = msg_id;
    s.channel = fields[4][0];
    s.payload = std::string(fields[5]);
    ++stats_.sentences_ok;

    BitBuffer bits;
    try {
        if (s.frag_count == 1) {
            bits.append_payload(s.payload, s.fill_bits);
        } else {
            const auto key = std::make_pair(s.channel, s.msg_id.value_or(-1));
            auto& group = partial_[key];
            group.last_seen_seq = seq_;
            group.frag_count = s.frag_count;
            if (!group.fragments.emplace(s.frag_index, s).second) {
                ++stats_.multipart_duplicates;
                partial_.erase(key);
                if (options_.strict)
                    throw InputError("duplicate fragment: " + std::string(line));
                return std::nullopt;
            }
            if (static_cast<int>(group.fragments.size()) < s.frag_count) return std::nullopt;
            std::vector<RawSentence> frags;
            frags.reserve(group.fragments.size());
            for (auto& [idx, frag] : group.fragments) frags.push_back(std::move(frag));
            partial_.erase(key);
            bits = assemble(frags);
        }
        const DecodeOutcome outcome = decode_position_report(bits);
        switch (outcome.kind) {
            case DecodeKind::position:
                ++stats_.positions;
                return TimedPosition{broker_ts, *outcome.position};
            case DecodeKind::position_unavailable:
                ++stats_.positions_unavailable;
                return std::nullopt;
            case DecodeKind::skipped_type:
                ++stats_.skipped_by_type[outcome.msg_type];
                return std::nullopt;
        }
    } catch (const InputError&) {
        ++stats_.decode_errors;
        if (options_.strict) throw;
    }
    return std::nullopt;
}

void StreamDecoder::finish() {
    stats_.multipart_pending += partial_.size();
    partial_.clear();
}

}  // namespace jacktrack::nmea
