#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jacktrack/errors.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack::nmea {

// One parsed !AIVDM frame, checksum already verified.
struct RawSentence {
    int frag_count = 1;
    int frag_index = 1;
    std::optional<int> msg_id;
    char channel = 'A';
    std::string payload;   // 6-bit armored
    int fill_bits = 0;
};

enum class ChecksumStatus { ok, mismatch, bad_framing };

// XOR of the characters strictly between '!' and '*' against the stated
// two-digit hex value. Framing problems are reported distinctly.
ChecksumStatus validate_checksum(std::string_view sentence);

// 6-bit payload armoring: ASCII 48..87 and 96..119.
bool is_armor_char(char c);
std::optional<int> dearmor(char c);  // value in [0, 63]
char armor(int value);               // inverse, value in [0, 63]

class BitBuffer {
public:
    // Throws InputError naming the offending character and position.
    void append_payload(std::string_view armored, int fill_bits);

    std::size_t size() const { return bits_.size(); }
    std::uint32_t ubits(std::size_t start, std::size_t len) const;
    std::int32_t sbits(std::size_t start, std::size_t len) const;

private:
    std::vector<std::uint8_t> bits_;
};

// Concatenates de-armored fragment payloads, dropping the final
// fragment's fill bits. Order-insensitive in its input; throws InputError
// on a missing or duplicated fragment index.
BitBuffer assemble(std::span<const RawSentence> fragments);

struct DecodedPosition {
    int msg_type = 0;
    std::uint32_t mmsi = 0;
    double lat = 0.0;
    double lon = 0.0;
    std::optional<double> sog_kn;
    std::optional<double> cog_deg;
    std::optional<int> nav_status;  // types 1-3 only
};

enum class DecodeKind {
    position,              // a usable position report
    position_unavailable,  // position report with sentinel/out-of-range coordinates
    skipped_type,          // valid message of a type we do not decode
};

struct DecodeOutcome {
    DecodeKind kind = DecodeKind::skipped_type;
    int msg_type = 0;
    std::optional<DecodedPosition> position;  // set iff kind == position
};

// Field extraction for types 1/2/3/18/19 per the ITU-R M.1371 layout.
// Throws InputError when the buffer is shorter than the claimed type's
// fixed length.
DecodeOutcome decode_position_report(const BitBuffer& bits);

struct DecodeStats {
    std::uint64_t lines_in = 0;
    std::uint64_t sentences_ok = 0;
    std::uint64_t checksum_failures = 0;
    std::uint64_t framing_errors = 0;
    std::uint64_t decode_errors = 0;  // bad armor chars, truncated buffers
    std::uint64_t multipart_expired = 0;
    std::uint64_t multipart_duplicates = 0;
    std::uint64_t multipart_pending = 0;  // unfinished groups at finish()
    std::uint64_t positions = 0;
    std::uint64_t positions_unavailable = 0;
    std::map<int, std::uint64_t> skipped_by_type;
};

struct TimedPosition {
    std::optional<Timestamp> broker_ts;
    DecodedPosition position;
};

// Single-threaded streaming decoder with multipart reassembly keyed by
// (channel, message_id). Accepts plain sentences or broker-prefixed
// "epoch-seconds<TAB>sentence" lines.
class StreamDecoder {
public:
    struct Options {
        bool strict = false;          // first checksum/framing failure becomes fatal
        int reassembly_window = 32;   // groups expire after this many intervening sentences
    };

    StreamDecoder();
    explicit StreamDecoder(Options options);

    // Returns zero or one decoded position per line (one when the line
    // completes a position-report message).
    std::optional<TimedPosition> feed_line(std::string_view line);

    // Flushes bookkeeping for unfinished multipart groups.
    void finish();

    const DecodeStats& stats() const { return stats_; }

private:
    struct PartialGroup {
        std::map<int, RawSentence> fragments;
        int frag_count = 0;
        std::uint64_t last_seen_seq = 0;
    };

    void expire_stale_groups();

    Options options_;
    DecodeStats stats_;
    std::uint64_t seq_ = 0;
    std::map<std::pair<char, int>, PartialGroup> partial_;
};

}  // namespace jacktrack::nmea
