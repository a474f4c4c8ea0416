#pragma once
// Append-only commit log.
//
// File layout: the 8-byte magic "TGDBLOG1", then one record per committed
// transaction: u32 payload length, u32 CRC-32 of the payload, payload. All
// integers are little-endian. A record whose length runs past the end of the
// file or whose checksum fails ends the replay; the file is cut back to the
// last good record.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgdb/catalog.hpp"
#include "tgdb/row.hpp"

namespace tgdb {

// Schema and row changes of one committed transaction. Types are written in
// full; rows are written in full or as deletions (nullopt).
struct CommitDelta {
    std::uint64_t seq = 0;
    Uid next_uid = 1;
    TypeId next_type_id = 1;
    std::vector<TypeDescriptor> types;
    std::vector<std::pair<Uid, std::optional<Row>>> rows;

    bool operator==(const CommitDelta&) const = default;
};

std::string encode_delta(const CommitDelta& d);
// Throws Error on malformed input.
CommitDelta decode_delta(std::string_view bytes);

// Canonical byte encodings, shared with the state digest.
void encode_type(std::string& out, const TypeDescriptor& d);
void encode_row(std::string& out, const Row& r);

std::uint32_t crc32(std::string_view bytes);

class CommitLog {
public:
    struct Replay {
        std::vector<CommitDelta> records;
        std::vector<std::string> warnings;
    };

    // Opens or creates the file and returns its valid records. Trailing
    // damage is truncated away and reported in `warnings`.
    static std::pair<CommitLog, Replay> open(const std::filesystem::path& path, bool sync = false);

    CommitLog(CommitLog&& o) noexcept;
    CommitLog& operator=(CommitLog&& o) noexcept;
    CommitLog(const CommitLog&) = delete;
    CommitLog& operator=(const CommitLog&) = delete;
    ~CommitLog();

    // Appends and flushes one record; returns bytes written.
    std::size_t append(const CommitDelta& d);
    const std::filesystem::path& path() const { return path_; }

private:
    CommitLog(std::FILE* f, std::filesystem::path p, bool sync)
        : file_(f), path_(std::move(p)), sync_(sync) {}

    std::FILE* file_ = nullptr;
    std::filesystem::path path_;
    bool sync_ = false;
};

inline constexpr std::string_view kLogMagic = "TGDBLOG1";

}  // namespace tgdb
