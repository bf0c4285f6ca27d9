#pragma once

// Receipt-log decoding into SwapLog, and the bridge-intent payload carried by
// OracleRequest logs. Encoders mirror the decoders so exports round-trip.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/core/bytes.hpp"
#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"
#include "xsw/io/json.hpp"
#include "xsw/io/registry.hpp"
#include "xsw/records.hpp"

namespace xsw::io {

struct RawLogRecord {
    Hash32 tx_hash;
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;
    Address address;
    ChainId chain_id = 0;
    std::vector<Hash32> topics;
    std::vector<std::uint8_t> data;
    std::uint64_t gas_price = 0;
    double timestamp = 0.0;

    friend bool operator==(const RawLogRecord&, const RawLogRecord&) = default;
};

/// What the decoder knows about a pool beyond its address.
struct PoolMeta {
    ChainId chain_id = 0;
    std::string token0;
    std::string token1;
    std::optional<Protocol> protocol;
};

using PoolDirectory = std::map<Address, PoolMeta>;

// ---- 32-byte words ---------------------------------------------------------

inline BigInt two_pow_256() {
    static const BigInt v = BigInt(1) << 256;
    return v;
}

inline Word word_from_unsigned(const BigInt& v) {
    if (v < 0 || v >= two_pow_256()) throw Error(ErrorCode::Overflow, "value does not fit a 256-bit word");
    Word w;
    BigInt x = v;
    for (int i = 31; i >= 0 && x != 0; --i) {
        w.bytes[i] = static_cast<std::uint8_t>((x & 0xff).convert_to<unsigned>());
        x >>= 8;
    }
    return w;
}

inline Word word_from_signed(const BigInt& v) {
    const BigInt half = two_pow_256() >> 1;
    if (v < -half || v >= half) throw Error(ErrorCode::Overflow, "value does not fit a signed 256-bit word");
    return word_from_unsigned(v < 0 ? BigInt(v + two_pow_256()) : v);
}

inline BigInt unsigned_from_word(const Word& w) {
    BigInt v = 0;
    for (auto b : w.bytes) v = (v << 8) | b;
    return v;
}

inline BigInt signed_from_word(const Word& w) {
    BigInt v = unsigned_from_word(w);
    return (w.bytes[0] & 0x80) ? BigInt(v - two_pow_256()) : v;
}

inline Word word_from_address(const Address& a) {
    Word w;
    std::copy(a.bytes.begin(), a.bytes.end(), w.bytes.begin() + 12);
    return w;
}

inline Address address_from_word(const Word& w, ErrorCode on_error) {
    for (std::size_t i = 0; i < 12; ++i)
        if (w.bytes[i] != 0) throw Error(on_error, "address word has non-zero padding");
    Address a;
    std::copy(w.bytes.begin() + 12, w.bytes.end(), a.bytes.begin());
    return a;
}

inline std::vector<Word> split_words(const std::vector<std::uint8_t>& data, std::size_t offset, ErrorCode on_error) {
    if (data.size() < offset || (data.size() - offset) % 32 != 0)
        throw Error(on_error, "data length " + std::to_string(data.size()) + " is not a whole number of words");
    std::vector<Word> out((data.size() - offset) / 32);
    for (std::size_t i = 0; i < out.size(); ++i)
        std::copy_n(data.begin() + offset + 32 * i, 32, out[i].bytes.begin());
    return out;
}

inline void append_word(std::vector<std::uint8_t>& data, const Word& w) { data.insert(data.end(), w.bytes.begin(), w.bytes.end()); }

// ---- Swap logs -------------------------------------------------------------

struct DecodedSwap {
    SwapLog log;
    std::string protocol; // registry protocol, or "V2-like" when the shared V2 topic cannot be resolved
};

namespace detail {

inline std::string resolve_protocol(const std::vector<const EventEntry*>& rows, const PoolMeta* meta) {
    if (rows.size() == 1) return rows.front()->protocol;
    if (meta && meta->protocol) {
        for (const auto* r : rows) {
            if ((*meta->protocol == Protocol::UniswapV2 && r->protocol == "Uniswap V2") ||
                (*meta->protocol == Protocol::PancakeV2 && r->protocol == "PancakeSwap V2"))
                return r->protocol;
        }
    }
    return "V2-like";
}

} // namespace detail

/// nullopt means Skip: the first topic is not a swap event in the registry.
inline std::optional<DecodedSwap> decode_swap_log(const RawLogRecord& raw, const SignatureRegistry& registry,
                                                  const PoolDirectory& pools = {}) {
    if (raw.topics.empty()) return std::nullopt;
    auto rows = registry.find_event(raw.topics.front());
    if (rows.empty() || rows.front()->layout == LogLayout::OracleRequest) return std::nullopt;
    const LogLayout layout = rows.front()->layout;
    const std::size_t want = data_words(layout);
    if (raw.data.size() != 32 * want)
        throw Error(ErrorCode::MalformedData, std::string(rows.front()->protocol) + " Swap expects " + std::to_string(want) +
                                                  " words, got " + std::to_string(raw.data.size()) + " bytes");
    if (raw.topics.size() != 3) throw Error(ErrorCode::MalformedData, "swap log needs sender and recipient topics");
    auto words = split_words(raw.data, 0, ErrorCode::MalformedData);

    auto pit = pools.find(raw.address);
    const PoolMeta* meta = pit == pools.end() ? nullptr : &pit->second;

    DecodedSwap out;
    SwapLog& l = out.log;
    l.tx_hash = raw.tx_hash;
    l.block_number = raw.block_number;
    l.log_index = raw.log_index;
    l.pool = raw.address;
    l.chain_id = raw.chain_id;
    l.sender = address_from_word(raw.topics[1], ErrorCode::MalformedData);
    l.recipient = address_from_word(raw.topics[2], ErrorCode::MalformedData);
    l.gas_price = raw.gas_price;
    l.timestamp = raw.timestamp;
    out.protocol = detail::resolve_protocol(rows, meta);

    BigInt in, outv;
    if (layout == LogLayout::V2Swap) {
        BigInt in0 = unsigned_from_word(words[0]), in1 = unsigned_from_word(words[1]);
        BigInt out0 = unsigned_from_word(words[2]), out1 = unsigned_from_word(words[3]);
        if (in0 > 0 && in1 == 0) {
            l.direction = Direction::XforY;
            in = in0;
            outv = out1;
        } else if (in1 > 0 && in0 == 0) {
            l.direction = Direction::YforX;
            in = in1;
            outv = out0;
        } else {
            throw Error(ErrorCode::MalformedData, "V2 swap must have exactly one non-zero input amount");
        }
    } else {
        // Positive amounts flow into the pool.
        BigInt a0 = signed_from_word(words[0]), a1 = signed_from_word(words[1]);
        if (a0 > 0 && a1 < 0) {
            l.direction = Direction::XforY;
            in = a0;
            outv = -a1;
        } else if (a1 > 0 && a0 < 0) {
            l.direction = Direction::YforX;
            in = a1;
            outv = -a0;
        } else {
            throw Error(ErrorCode::MalformedData, "V3 swap amounts must have opposite signs");
        }
    }
    l.amount_in = to_amount(in);
    l.amount_out = to_amount(outv);
    const std::string t0 = meta ? meta->token0 : "token0";
    const std::string t1 = meta ? meta->token1 : "token1";
    l.token_in = l.direction == Direction::XforY ? t0 : t1;
    l.token_out = l.direction == Direction::XforY ? t1 : t0;
    if (meta && meta->chain_id != 0 && raw.chain_id == 0) l.chain_id = meta->chain_id;
    return out;
}

inline RawLogRecord encode_swap_log(const SwapLog& l, LogLayout layout, const SignatureRegistry& registry) {
    RawLogRecord r;
    r.tx_hash = l.tx_hash;
    r.block_number = l.block_number;
    r.log_index = l.log_index;
    r.address = l.pool;
    r.chain_id = l.chain_id;
    r.gas_price = l.gas_price;
    r.timestamp = l.timestamp;
    const EventEntry* e = nullptr;
    for (const auto& row : registry.events())
        if (row.layout == layout) {
            e = &row;
            break;
        }
    if (!e || layout == LogLayout::OracleRequest) throw Error(ErrorCode::InvalidArgument, "not a swap layout");
    r.topics = {e->topic, word_from_address(l.sender), word_from_address(l.recipient)};
    const BigInt in = to_big(l.amount_in), out = to_big(l.amount_out);
    const bool x = l.direction == Direction::XforY;
    if (layout == LogLayout::V2Swap) {
        append_word(r.data, word_from_unsigned(x ? in : BigInt(0)));
        append_word(r.data, word_from_unsigned(x ? BigInt(0) : in));
        append_word(r.data, word_from_unsigned(x ? BigInt(0) : out));
        append_word(r.data, word_from_unsigned(x ? out : BigInt(0)));
    } else {
        append_word(r.data, word_from_signed(x ? in : BigInt(-out)));
        append_word(r.data, word_from_signed(x ? BigInt(-out) : in));
        for (std::size_t i = 2; i < data_words(layout); ++i) append_word(r.data, Word{});
    }
    return r;
}

inline LogLayout layout_for(Protocol p) {
    switch (p) {
    case Protocol::UniswapV3: return LogLayout::V3Swap;
    case Protocol::PancakeV3: return LogLayout::PancakeV3Swap;
    default: return LogLayout::V2Swap;
    }
}

// ---- Bridge intents ----------------------------------------------------------
//
// OracleRequest data: selector(4) then words
//   request_id, dest_chain, recipient, hop_count, hop_count * (pool, direction, amount_in, min_return)
// with direction 0 = x_for_y, 1 = y_for_x.

struct IntentHop {
    Address pool;
    Direction direction = Direction::XforY;
    TokenAmount amount_in;
    TokenAmount min_return;

    friend bool operator==(const IntentHop&, const IntentHop&) = default;
};

struct BridgeIntent {
    TxRef source; // hash, chain, block and timestamp of the emitting transaction
    std::string protocol;
    std::string function;
    std::uint64_t request_id = 0;
    ChainId dest_chain = 0;
    Address recipient;
    std::vector<IntentHop> hops;

    friend bool operator==(const BridgeIntent&, const BridgeIntent&) = default;
};

inline BridgeIntent decode_bridge_intent(const std::vector<RawLogRecord>& tx_logs, const SignatureRegistry& registry) {
    const RawLogRecord* req = nullptr;
    for (const auto& l : tx_logs) {
        if (l.topics.empty()) continue;
        for (const auto* e : registry.find_event(l.topics.front()))
            if (e->layout == LogLayout::OracleRequest) req = &l;
        if (req) break;
    }
    if (!req) throw Error(ErrorCode::MissingOracleRequest, "no OracleRequest log in transaction");
    if (req->data.size() < 4) throw Error(ErrorCode::MalformedPayload, "payload shorter than a selector");
    Selector sel;
    std::copy_n(req->data.begin(), 4, sel.bytes.begin());
    const FunctionEntry* fn = registry.find_function(sel);
    if (!fn) throw Error(ErrorCode::UnknownSelector, "selector " + sel.hex() + " is not registered");

    auto words = split_words(req->data, 4, ErrorCode::MalformedPayload);
    if (words.size() < 4) throw Error(ErrorCode::MalformedPayload, "payload header needs 4 words");
    const BigInt n = unsigned_from_word(words[3]);
    if (n == 0 || n * 4 + 4 != words.size())
        throw Error(ErrorCode::MalformedPayload, "hop_count " + n.str() + " disagrees with payload length");

    BridgeIntent bi;
    bi.source = TxRef{req->tx_hash, req->chain_id, req->block_number, req->timestamp, req->gas_price};
    bi.protocol = fn->protocol;
    bi.function = fn->function;
    auto small = [](const Word& w, const char* what) {
        BigInt v = unsigned_from_word(w);
        if (v > std::numeric_limits<std::uint64_t>::max()) throw Error(ErrorCode::MalformedPayload, std::string(what) + " exceeds 64 bits");
        return v.convert_to<std::uint64_t>();
    };
    bi.request_id = small(words[0], "request_id");
    bi.dest_chain = small(words[1], "dest_chain");
    bi.recipient = address_from_word(words[2], ErrorCode::MalformedPayload);
    for (std::size_t k = 0; k < n.convert_to<std::size_t>(); ++k) {
        const std::size_t b = 4 + 4 * k;
        IntentHop h;
        h.pool = address_from_word(words[b], ErrorCode::MalformedPayload);
        std::uint64_t d = small(words[b + 1], "direction");
        if (d > 1) throw Error(ErrorCode::MalformedPayload, "direction word must be 0 or 1");
        h.direction = d == 0 ? Direction::XforY : Direction::YforX;
        h.amount_in = to_amount(unsigned_from_word(words[b + 2]));
        h.min_return = to_amount(unsigned_from_word(words[b + 3]));
        bi.hops.push_back(h);
    }
    return bi;
}

inline RawLogRecord encode_bridge_intent(const BridgeIntent& bi, const SignatureRegistry& registry, std::uint64_t log_index = 0) {
    const FunctionEntry* fn = registry.find_function(bi.protocol, bi.function);
    if (!fn) throw Error(ErrorCode::UnknownSelector, bi.protocol + "." + bi.function + " is not registered");
    const EventEntry* ev = registry.find_event("Symbiosis", "OracleRequest");
    RawLogRecord r;
    r.tx_hash = bi.source.hash;
    r.block_number = bi.source.block_number;
    r.log_index = log_index;
    r.chain_id = bi.source.chain_id;
    r.gas_price = bi.source.gas_price;
    r.timestamp = bi.source.timestamp;
    r.topics = {ev->topic};
    r.data.assign(fn->selector.bytes.begin(), fn->selector.bytes.end());
    append_word(r.data, word_from_unsigned(bi.request_id));
    append_word(r.data, word_from_unsigned(bi.dest_chain));
    append_word(r.data, word_from_address(bi.recipient));
    append_word(r.data, word_from_unsigned(bi.hops.size()));
    for (const auto& h : bi.hops) {
        append_word(r.data, word_from_address(h.pool));
        append_word(r.data, word_from_unsigned(h.direction == Direction::XforY ? 0 : 1));
        append_word(r.data, word_from_unsigned(to_big(h.amount_in)));
        append_word(r.data, word_from_unsigned(to_big(h.min_return)));
    }
    return r;
}

/// The intent a simulator record was committed with.
inline BridgeIntent intent_of(const CrossChainTx& r) {
    BridgeIntent bi;
    bi.source = r.source;
    bi.protocol = "Symbiosis";
    bi.function = "metaMintSyntheticToken";
    bi.request_id = r.id;
    bi.dest_chain = r.destination.chain_id;
    bi.recipient = r.recipient;
    for (const auto& h : r.hops) bi.hops.push_back(IntentHop{h.pool, h.direction, h.amount_in, h.min_return});
    return bi;
}

// ---- JSON ------------------------------------------------------------------

inline Json to_json(const RawLogRecord& r) {
    Json topics = Json::array();
    for (const auto& t : r.topics) topics.push_back(t.hex());
    return Json{{"tx_hash", r.tx_hash.hex()},
                {"block_number", r.block_number},
                {"log_index", r.log_index},
                {"address", r.address.hex()},
                {"chain_id", r.chain_id},
                {"topics", std::move(topics)},
                {"data", to_hex(r.data)},
                {"gas_price", std::to_string(r.gas_price)},
                {"timestamp", r.timestamp}};
}

inline RawLogRecord raw_log_from_json(const Json& j, const std::string& ctx = "raw_log") {
    using namespace detail;
    check_keys(j, ctx, {"tx_hash", "block_number", "log_index", "address", "chain_id", "topics", "data", "gas_price", "timestamp"});
    RawLogRecord r;
    r.tx_hash = as_bytes<Hash32>(need(j, ctx, "tx_hash"), join(ctx, "tx_hash"));
    r.block_number = as_u64(need(j, ctx, "block_number"), join(ctx, "block_number"));
    r.log_index = as_u64(need(j, ctx, "log_index"), join(ctx, "log_index"));
    if (auto* v = maybe(j, "address")) r.address = as_bytes<Address>(*v, join(ctx, "address"));
    if (auto* v = maybe(j, "chain_id")) r.chain_id = as_u64(*v, join(ctx, "chain_id"));
    const Json& topics = need(j, ctx, "topics");
    if (!topics.is_array()) field_error(join(ctx, "topics"), "expected an array");
    for (const auto& t : topics) r.topics.push_back(as_bytes<Hash32>(t, join(ctx, "topics")));
    try {
        r.data = parse_hex_bytes(as_string(need(j, ctx, "data"), join(ctx, "data")));
    } catch (const Error& e) {
        field_error(join(ctx, "data"), e.message());
    }
    if (auto* v = maybe(j, "gas_price")) r.gas_price = as_u64(*v, join(ctx, "gas_price"));
    if (auto* v = maybe(j, "timestamp")) r.timestamp = as_double(*v, join(ctx, "timestamp"));
    return r;
}

inline Json to_json(const BridgeIntent& bi) {
    Json hops = Json::array();
    for (const auto& h : bi.hops)
        hops.push_back(Json{{"pool", h.pool.hex()},
                            {"direction", to_string(h.direction)},
                            {"amount_in", to_string(h.amount_in)},
                            {"min_return", to_string(h.min_return)}});
    return Json{{"source", to_json(bi.source)},
                {"protocol", bi.protocol},
                {"function", bi.function},
                {"request_id", bi.request_id},
                {"dest_chain", bi.dest_chain},
                {"recipient", bi.recipient.hex()},
                {"hops", std::move(hops)}};
}

inline Json to_json(const PoolMeta& m, const Address& a) {
    return Json{{"address", a.hex()},
                {"chain_id", m.chain_id},
                {"token0", m.token0},
                {"token1", m.token1},
                {"protocol", m.protocol ? Json(std::string(to_string(*m.protocol))) : Json(nullptr)}};
}

inline PoolDirectory pool_directory_from_jsonl(const std::vector<Json>& lines, const std::string& source) {
    using namespace detail;
    PoolDirectory dir;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string ctx = source + " record " + std::to_string(i + 1);
        const Json& j = lines[i];
        check_keys(j, ctx, {"address", "chain_id", "token0", "token1", "protocol"});
        PoolMeta m;
        Address a = as_bytes<Address>(need(j, ctx, "address"), join(ctx, "address"));
        if (auto* v = maybe(j, "chain_id")) m.chain_id = as_u64(*v, join(ctx, "chain_id"));
        m.token0 = as_string(need(j, ctx, "token0"), join(ctx, "token0"));
        m.token1 = as_string(need(j, ctx, "token1"), join(ctx, "token1"));
        if (auto* v = maybe(j, "protocol")) {
            try {
                m.protocol = protocol_from_string(as_string(*v, join(ctx, "protocol")));
            } catch (const Error& e) {
                field_error(join(ctx, "protocol"), e.message());
            }
        }
        dir[a] = m;
    }
    return dir;
}

} // namespace xsw::io
