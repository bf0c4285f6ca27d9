#pragma once

// Cross-chain sandwich detection over exported swap logs.
//
// For each pool on a victim's destination path, same-direction swaps between the
// source event and the victim are front-run candidates and opposite-direction swaps
// in the `num` blocks after it are back-run candidates. Each front-run takes at most
// one back-run whose input is within the amount band of the front-run's output,
// preferring one paid to the same recipient.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"
#include "xsw/records.hpp"

namespace xsw {

inline std::string upper_ascii(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline std::set<std::string> default_stablecoins() {
    return {"USDC",  "USDT", "BUSD", "DAI",  "FDUSD", "TUSD",   "USDE",  "USDBC", "USDD",
            "FRAX",  "LUSD", "PYUSD", "USDP", "GUSD", "SUSD",   "USDC.E", "USDT.E", "USDS",
            "CUSD",  "EURC", "USD1", "CRVUSD", "GHO", "DOLA", "MIM"};
}

struct DetectionConfig {
    std::uint64_t num = 100;
    Rational band_low{9, 10};
    Rational band_high{11, 10};
    Rational max_interval{100};
    std::set<std::string> stablecoins = default_stablecoins(); // upper-case symbols

    void validate() const {
        if (num < 1) throw Error(ErrorCode::InvalidConfig, "num: must be at least 1");
        if (!(band_low < 1 && 1 < band_high)) throw Error(ErrorCode::InvalidConfig, "amount_band: need low < 1 < high");
        if (max_interval < 0) throw Error(ErrorCode::InvalidConfig, "max_interval: must be non-negative");
    }

    bool is_stablecoin(const std::string& token) const { return stablecoins.count(upper_ascii(token)) > 0; }

    bool in_band(const TokenAmount& back_in, const TokenAmount& front_out) const {
        if (front_out == 0) return false;
        Rational ratio(to_big(back_in), to_big(front_out));
        return band_low <= ratio && ratio <= band_high;
    }
};

inline bool is_stable_hop(const VictimHop& hop, const DetectionConfig& cfg) {
    return hop.stable_pair || (cfg.is_stablecoin(hop.token_in) && cfg.is_stablecoin(hop.token_out));
}

inline Rational record_interval(const CrossChainTx& r) {
    // Timestamps are whole or fractional seconds; millisecond resolution is enough for the cutoff.
    auto ms = [](double t) { return BigInt(static_cast<long long>(std::llround(t * 1000.0))); };
    return Rational(ms(r.destination.timestamp) - ms(r.source.timestamp), BigInt(1000));
}

/// Records with at least one non stable-to-stable hop and interval <= max_interval.
inline std::vector<CrossChainTx> prefilter(const std::vector<CrossChainTx>& records, const DetectionConfig& cfg) {
    std::vector<CrossChainTx> kept;
    for (const auto& r : records) {
        if (r.hops.empty()) continue;
        bool tradable = std::any_of(r.hops.begin(), r.hops.end(), [&](const VictimHop& h) { return !is_stable_hop(h, cfg); });
        if (!tradable) continue;
        if (record_interval(r) > cfg.max_interval) continue;
        kept.push_back(r);
    }
    return kept;
}

/// Logs grouped per (chain, pool) in (block, log_index) order, plus the block timestamps seen per chain.
class LogIndex {
public:
    LogIndex() = default;
    explicit LogIndex(std::vector<SwapLog> logs) {
        for (auto& log : logs) {
            auto& blocks = blocks_[log.chain_id];
            blocks.emplace(log.block_number, log.timestamp);
            by_pool_[{log.chain_id, log.pool}].push_back(std::move(log));
        }
        for (auto& [key, v] : by_pool_) std::stable_sort(v.begin(), v.end(), log_precedes);
        for (auto& [chain, blocks] : blocks_) {
            auto& sorted = block_times_[chain];
            for (auto& [n, t] : blocks) sorted.emplace_back(n, t);
        }
    }

    const std::vector<SwapLog>& pool_logs(ChainId chain, const Address& pool) const {
        static const std::vector<SwapLog> none;
        auto it = by_pool_.find({chain, pool});
        return it == by_pool_.end() ? none : it->second;
    }

    /// First block on `chain` whose timestamp is >= t.
    std::optional<std::uint64_t> first_block_at_or_after(ChainId chain, double t) const {
        auto it = block_times_.find(chain);
        if (it == block_times_.end()) return std::nullopt;
        // Block timestamps are non-decreasing in block number.
        const auto& v = it->second;
        auto pos = std::partition_point(v.begin(), v.end(), [t](const auto& b) { return b.second < t; });
        if (pos == v.end()) return std::nullopt;
        return pos->first;
    }

    std::size_t pool_count() const { return by_pool_.size(); }

private:
    std::map<std::pair<ChainId, Address>, std::vector<SwapLog>> by_pool_;
    std::map<ChainId, std::map<std::uint64_t, double>> blocks_;
    std::map<ChainId, std::vector<std::pair<std::uint64_t, double>>> block_times_;
};

enum class PairClass { CrossChain, SingleChain };

constexpr std::string_view to_string(PairClass c) noexcept {
    return c == PairClass::CrossChain ? "cross_chain" : "single_chain";
}

struct SandwichPair {
    std::uint64_t record_id = 0;
    std::size_t hop_index = 0;
    Address pool;
    ChainId source_chain = 0;
    ChainId destination_chain = 0;
    std::uint64_t source_block = 0; // destination block mapped from the source event's timestamp
    SwapLog front;
    SwapLog victim;
    SwapLog back;
    PairClass classification = PairClass::CrossChain;
    std::string profit_token;  // the front-run's input token
    BigInt profit;             // back.amount_out - front.amount_in
    Rational profit_rate;      // profit / front.amount_in
    std::optional<Rational> profit_usd;

    friend bool operator==(const SandwichPair&, const SandwichPair&) = default;
};

inline PairClass classify_pair(const SwapLog& front, const SwapLog& victim) {
    return front.block_number == victim.block_number ? PairClass::SingleChain : PairClass::CrossChain;
}

inline SandwichPair make_pair(const CrossChainTx& record, std::size_t hop, std::uint64_t source_block, const SwapLog& front,
                              const SwapLog& victim, const SwapLog& back) {
    SandwichPair p;
    p.record_id = record.id;
    p.hop_index = hop;
    p.pool = victim.pool;
    p.source_chain = record.source.chain_id;
    p.destination_chain = record.destination.chain_id;
    p.source_block = source_block;
    p.front = front;
    p.victim = victim;
    p.back = back;
    p.classification = classify_pair(front, victim);
    p.profit_token = front.token_in;
    p.profit = to_big(back.amount_out) - to_big(front.amount_in);
    p.profit_rate = front.amount_in == 0 ? Rational(0) : Rational(p.profit, to_big(front.amount_in));
    return p;
}

/// The victim's own log on the hop's pool, preferring the hop's direction.
inline const SwapLog* find_victim_log(const std::vector<SwapLog>& logs, const Hash32& tx, Direction d) {
    const SwapLog* any = nullptr;
    for (const auto& log : logs) {
        if (log.tx_hash != tx) continue;
        if (log.direction == d) return &log;
        if (!any) any = &log;
    }
    return any;
}

/// Pairs for one record, ordered by (hop, front block, front log index).
inline std::vector<SandwichPair> detect_pairs(const CrossChainTx& record, const LogIndex& index, const DetectionConfig& cfg) {
    std::vector<SandwichPair> pairs;
    const ChainId chain = record.destination.chain_id;
    for (std::size_t h = 0; h < record.hops.size(); ++h) {
        const VictimHop& hop = record.hops[h];
        const auto& logs = index.pool_logs(chain, hop.pool);
        const SwapLog* victim = find_victim_log(logs, record.destination.hash, hop.direction);
        if (!victim) continue;
        const std::uint64_t nv = victim->block_number;
        // A source event later than every known block maps past the victim and leaves no front-runs.
        std::uint64_t ns = index.first_block_at_or_after(chain, record.source.timestamp).value_or(nv + 1);
        const Direction d = victim->direction;

        std::vector<const SwapLog*> fronts, backs;
        for (const auto& log : logs) {
            if (log.tx_hash == victim->tx_hash) continue;
            if (log.direction == d) {
                if (log.block_number >= ns && log_precedes(log, *victim)) fronts.push_back(&log);
            } else if (log_precedes(*victim, log) && log.block_number <= nv + cfg.num) {
                backs.push_back(&log);
            }
        }

        for (const SwapLog* front : fronts) {
            std::vector<std::size_t> similar;
            for (std::size_t i = 0; i < backs.size(); ++i)
                if (cfg.in_band(backs[i]->amount_in, front->amount_out)) similar.push_back(i);
            if (similar.empty()) continue;
            std::size_t chosen = similar.front();
            for (std::size_t i : similar) {
                if (backs[i]->recipient == front->recipient) {
                    chosen = i;
                    break;
                }
            }
            pairs.push_back(make_pair(record, h, ns, *front, *victim, *backs[chosen]));
            backs.erase(backs.begin() + static_cast<std::ptrdiff_t>(chosen));
        }
    }
    return pairs;
}

inline std::vector<SandwichPair> detect_all(const std::vector<CrossChainTx>& records, const LogIndex& index,
                                            const DetectionConfig& cfg) {
    std::vector<SandwichPair> out;
    for (const auto& r : records) {
        auto pairs = detect_pairs(r, index, cfg);
        out.insert(out.end(), std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end()));
    }
    return out;
}

struct TokenPrice {
    std::string symbol;
    Rational usd_price;
    unsigned decimals = 18;
};

/// token_id -> USD price per whole token. Prices must be positive.
class PriceTable {
public:
    void set(const std::string& token_id, TokenPrice price) {
        if (price.usd_price <= 0) throw Error(ErrorCode::InvalidArgument, "usd_price: must be positive for " + token_id);
        prices_[token_id] = std::move(price);
    }
    const TokenPrice* find(const std::string& token_id) const {
        auto it = prices_.find(token_id);
        return it == prices_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return prices_.size(); }

    /// USD value of `amount` base units, or nullopt when the token is not listed.
    std::optional<Rational> usd(const std::string& token_id, const BigInt& amount) const {
        const TokenPrice* p = find(token_id);
        if (!p) return std::nullopt;
        return Rational(amount, mp::pow(BigInt(10), p->decimals)) * p->usd_price;
    }

private:
    std::map<std::string, TokenPrice> prices_;
};

struct PricedPairs {
    std::vector<SandwichPair> pairs;
    std::set<std::string> missing; // tokens without a price; their pairs keep profit_usd empty
};

/// Recomputes classification and profit figures, then prices each pair in its profit token.
/// With `strict`, any unpriced token raises MissingPrice.
inline PricedPairs classify_and_price(std::vector<SandwichPair> pairs, const PriceTable& prices, bool strict = false) {
    PricedPairs out;
    for (auto& p : pairs) {
        p.classification = classify_pair(p.front, p.victim);
        p.profit_token = p.front.token_in;
        p.profit = to_big(p.back.amount_out) - to_big(p.front.amount_in);
        p.profit_rate = p.front.amount_in == 0 ? Rational(0) : Rational(p.profit, to_big(p.front.amount_in));
        p.profit_usd = prices.usd(p.profit_token, p.profit);
        if (!p.profit_usd) out.missing.insert(p.profit_token);
    }
    if (strict && !out.missing.empty()) throw Error(ErrorCode::MissingPrice, "no price for token " + *out.missing.begin());
    out.pairs = std::move(pairs);
    return out;
}

} // namespace xsw
