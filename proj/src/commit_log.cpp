#include "tgdb/commit_log.hpp"

#include <unistd.h>

#include <bit>
#include <boost/crc.hpp>
#include <cstring>
#include <fstream>

#include "tgdb/parser.hpp"

namespace tgdb {

namespace {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_str(std::string& out, std::string_view s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

void put_strs(std::string& out, const std::vector<std::string>& v) {
    put_u32(out, static_cast<std::uint32_t>(v.size()));
    for (const auto& s : v) put_str(out, s);
}

void put_opt_u64(std::string& out, const std::optional<std::uint64_t>& v) {
    put_u8(out, v ? 1 : 0);
    if (v) put_u64(out, *v);
}

void put_value(std::string& out, const Value& v) {
    put_u8(out, static_cast<std::uint8_t>(v.kind_index()));
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                put_i64(out, x);
            } else if constexpr (std::is_same_v<T, double>) {
                put_f64(out, x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                put_str(out, x);
            } else if constexpr (std::is_same_v<T, bool>) {
                put_u8(out, x ? 1 : 0);
            } else if constexpr (std::is_same_v<T, Date>) {
                put_i64(out, x.year);
                put_u8(out, static_cast<std::uint8_t>(x.month));
                put_u8(out, static_cast<std::uint8_t>(x.day));
            } else if constexpr (std::is_same_v<T, Currency>) {
                put_f64(out, x.amount);
                put_str(out, x.code);
            } else if constexpr (std::is_same_v<T, Record>) {
                const auto& fields = *x.fields;
                put_u32(out, static_cast<std::uint32_t>(fields.size()));
                for (const auto& [k, fv] : fields) {
                    put_str(out, k);
                    put_value(out, fv);
                }
            }
        },
        v.storage());
}

void put_data_type(std::string& out, const DataType& t) {
    put_u8(out, static_cast<std::uint8_t>(t.base));
    put_u64(out, t.structured);
}

class Reader {
public:
    explicit Reader(std::string_view b) : b_(b) {}

    bool done() const { return pos_ == b_.size(); }

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

    std::uint32_t u32() {
        auto s = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(s[i]);
        return v;
    }

    std::uint64_t u64() {
        auto s = take(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(s[i]);
        return v;
    }

    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        std::uint32_t n = u32();
        return std::string(take(n));
    }

    std::vector<std::string> strs() {
        std::uint32_t n = u32();
        std::vector<std::string> v;
        for (std::uint32_t i = 0; i < n; ++i) v.push_back(str());
        return v;
    }

    std::optional<std::uint64_t> opt_u64() {
        if (!u8()) return std::nullopt;
        return u64();
    }

    Value value() {
        switch (u8()) {
            case 0: return Value();
            case 1: return Value(i64());
            case 2: return Value(f64());
            case 3: return Value(str());
            case 4: return Value(u8() != 0);
            case 5: {
                Date d;
                d.year = static_cast<int>(i64());
                d.month = u8();
                d.day = u8();
                return Value(d);
            }
            case 6: {
                Currency c;
                c.amount = f64();
                c.code = str();
                return Value(c);
            }
            case 7: {
                std::uint32_t n = u32();
                std::vector<std::pair<std::string, Value>> fields;
                for (std::uint32_t i = 0; i < n; ++i) {
                    std::string k = str();
                    fields.emplace_back(std::move(k), value());
                }
                return Value::record(std::move(fields));
            }
            default: throw Error("commit log: bad value tag");
        }
    }

    DataType data_type() {
        DataType t;
        std::uint8_t b = u8();
        if (b > static_cast<std::uint8_t>(BaseType::Structured))
            throw Error("commit log: bad data type");
        t.base = static_cast<BaseType>(b);
        t.structured = u64();
        return t;
    }

private:
    std::string_view take(std::size_t n) {
        if (b_.size() - pos_ < n) throw Error("commit log: record too short");
        auto s = b_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::string_view b_;
    std::size_t pos_ = 0;
};

TypeDescriptor read_type(Reader& r) {
    TypeDescriptor d;
    d.id = r.u64();
    d.label = r.str();
    std::uint8_t kind = r.u8();
    if (kind > 2) throw Error("commit log: bad type kind");
    d.kind = static_cast<TypeKind>(kind);
    std::uint32_t ncols = r.u32();
    for (std::uint32_t i = 0; i < ncols; ++i) {
        ColumnDescriptor c;
        c.name = r.str();
        c.type = r.data_type();
        c.nullable = r.u8() != 0;
        d.columns.push_back(std::move(c));
    }
    d.supertype = r.opt_u64();
    d.primary_key = r.strs();
    std::uint32_t nuk = r.u32();
    for (std::uint32_t i = 0; i < nuk; ++i) d.unique_keys.push_back(r.strs());
    d.autokey_column = r.str();
    d.next_autokey = r.i64();
    d.leaving_type = r.u64();
    d.arriving_type = r.u64();
    d.multiplicity.leaving_min = r.u64();
    d.multiplicity.leaving_max = r.opt_u64();
    d.multiplicity.arriving_min = r.u64();
    d.multiplicity.arriving_max = r.opt_u64();
    std::uint32_t ncons = r.u32();
    for (std::uint32_t i = 0; i < ncons; ++i) {
        Constraint c;
        c.name = r.str();
        c.condition = parse_expression(r.str());
        d.constraints.push_back(std::move(c));
    }
    return d;
}

Row read_row(Reader& r) {
    Row row;
    row.uid = r.u64();
    row.type = r.u64();
    std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string k = r.str();
        row.values.emplace(std::move(k), r.value());
    }
    return row;
}

std::uint32_t read_le32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
    return v;
}

}  // namespace

void encode_type(std::string& out, const TypeDescriptor& d) {
    put_u64(out, d.id);
    put_str(out, d.label);
    put_u8(out, static_cast<std::uint8_t>(d.kind));
    put_u32(out, static_cast<std::uint32_t>(d.columns.size()));
    for (const auto& c : d.columns) {
        put_str(out, c.name);
        put_data_type(out, c.type);
        put_u8(out, c.nullable ? 1 : 0);
    }
    put_opt_u64(out, d.supertype);
    put_strs(out, d.primary_key);
    put_u32(out, static_cast<std::uint32_t>(d.unique_keys.size()));
    for (const auto& k : d.unique_keys) put_strs(out, k);
    put_str(out, d.autokey_column);
    put_i64(out, d.next_autokey);
    put_u64(out, d.leaving_type);
    put_u64(out, d.arriving_type);
    put_u64(out, d.multiplicity.leaving_min);
    put_opt_u64(out, d.multiplicity.leaving_max);
    put_u64(out, d.multiplicity.arriving_min);
    put_opt_u64(out, d.multiplicity.arriving_max);
    put_u32(out, static_cast<std::uint32_t>(d.constraints.size()));
    for (const auto& c : d.constraints) {
        put_str(out, c.name);
        put_str(out, to_source(c.condition));
    }
}

void encode_row(std::string& out, const Row& r) {
    put_u64(out, r.uid);
    put_u64(out, r.type);
    put_u32(out, static_cast<std::uint32_t>(r.values.size()));
    for (const auto& [k, v] : r.values) {
        put_str(out, k);
        put_value(out, v);
    }
}

std::string encode_delta(const CommitDelta& d) {
    std::string out;
    put_u64(out, d.seq);
    put_u64(out, d.next_uid);
    put_u64(out, d.next_type_id);
    put_u32(out, static_cast<std::uint32_t>(d.types.size()));
    for (const auto& t : d.types) encode_type(out, t);
    put_u32(out, static_cast<std::uint32_t>(d.rows.size()));
    for (const auto& [uid, row] : d.rows) {
        put_u64(out, uid);
        put_u8(out, row ? 1 : 0);
        if (row) encode_row(out, *row);
    }
    return out;
}

CommitDelta decode_delta(std::string_view bytes) {
    Reader r(bytes);
    CommitDelta d;
    d.seq = r.u64();
    d.next_uid = r.u64();
    d.next_type_id = r.u64();
    std::uint32_t nt = r.u32();
    for (std::uint32_t i = 0; i < nt; ++i) d.types.push_back(read_type(r));
    std::uint32_t nr = r.u32();
    for (std::uint32_t i = 0; i < nr; ++i) {
        Uid uid = r.u64();
        if (r.u8()) {
            Row row = read_row(r);
            if (row.uid != uid) throw Error("commit log: row uid mismatch");
            d.rows.emplace_back(uid, std::move(row));
        } else {
            d.rows.emplace_back(uid, std::nullopt);
        }
    }
    if (!r.done()) throw Error("commit log: trailing bytes in record");
    return d;
}

std::uint32_t crc32(std::string_view bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

std::pair<CommitLog, CommitLog::Replay> CommitLog::open(const std::filesystem::path& path,
                                                        bool sync) {
    Replay replay;
    std::string content;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot read " + path.string());
        content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    std::size_t good = 0;
    if (content.size() >= kLogMagic.size()) {
        if (std::string_view(content).substr(0, kLogMagic.size()) != kLogMagic)
            throw Error(path.string() + " is not a database log");
        good = kLogMagic.size();
        while (good < content.size()) {
            if (content.size() - good < 8) {
                replay.warnings.push_back("ignoring partial record header at offset " +
                                          std::to_string(good));
                break;
            }
            std::uint32_t len = read_le32(content.data() + good);
            std::uint32_t sum = read_le32(content.data() + good + 4);
            if (content.size() - good - 8 < len) {
                replay.warnings.push_back("ignoring truncated record at offset " +
                                          std::to_string(good));
                break;
            }
            std::string_view payload(content.data() + good + 8, len);
            if (crc32(payload) != sum) {
                replay.warnings.push_back("ignoring record with bad checksum at offset " +
                                          std::to_string(good));
                break;
            }
            try {
                replay.records.push_back(decode_delta(payload));
            } catch (const Error& e) {
                replay.warnings.push_back("ignoring undecodable record at offset " +
                                          std::to_string(good) + ": " + e.what());
                break;
            }
            good += 8 + len;
        }
    } else if (!content.empty() &&
               kLogMagic.substr(0, content.size()) != std::string_view(content)) {
        throw Error(path.string() + " is not a database log");
    }

    if (good == 0) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(kLogMagic.data(), static_cast<std::streamsize>(kLogMagic.size()));
        if (!out) throw Error("cannot write " + path.string());
        good = kLogMagic.size();
    } else if (good < content.size()) {
        std::filesystem::resize_file(path, good);
    }

    std::FILE* f = std::fopen(path.c_str(), "ab");
    if (!f) throw Error("cannot open " + path.string() + " for appending");
    return {CommitLog(f, path, sync), std::move(replay)};
}

CommitLog::CommitLog(CommitLog&& o) noexcept
    : file_(std::exchange(o.file_, nullptr)), path_(std::move(o.path_)), sync_(o.sync_) {}

CommitLog& CommitLog::operator=(CommitLog&& o) noexcept {
    if (this != &o) {
        if (file_) std::fclose(file_);
        file_ = std::exchange(o.file_, nullptr);
        path_ = std::move(o.path_);
        sync_ = o.sync_;
    }
    return *this;
}

CommitLog::~CommitLog() {
    if (file_) std::fclose(file_);
}

std::size_t CommitLog::append(const CommitDelta& d) {
    std::string payload = encode_delta(d);
    std::string record;
    record.reserve(payload.size() + 8);
    put_u32(record, static_cast<std::uint32_t>(payload.size()));
    put_u32(record, crc32(payload));
    record += payload;
    if (std::fwrite(record.data(), 1, record.size(), file_) != record.size() ||
        std::fflush(file_) != 0)
        throw Error("write to " + path_.string() + " failed");
    if (sync_) ::fsync(fileno(file_));
    return record.size();
}

}  // namespace tgdb
