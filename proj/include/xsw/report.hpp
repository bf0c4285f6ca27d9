#pragma once

// Aggregate views over detected pairs: chain-pair profit, pool attack counts,
// relative block positions, gas-price relations, single vs cross-chain split.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "xsw/detector.hpp"

namespace xsw {

inline constexpr std::size_t kPositionBins = 10;
inline constexpr std::uint64_t kWeiPerGwei = 1'000'000'000ull;

struct ChainPairStats {
    ChainId source = 0;
    ChainId destination = 0;
    std::size_t pairs = 0;
    Rational profit_usd;
    std::optional<Rational> volume_usd; // needs records and prices
    std::size_t unpriced_pairs = 0;
};

struct PoolStats {
    ChainId chain = 0;
    Address pool;
    std::size_t attacks = 0;
};

struct GasStats {
    std::size_t pairs = 0;
    std::size_t front_below_victim = 0; // gas(TA1) / gas(Tv) < 1
    std::size_t zero_gas_front = 0;
    // delta = gas(Tv) - gas(TA2): < 0, [0, 1), [1, 10), >= 10 GWei
    std::array<std::size_t, 4> back_delta{};
};

struct ClassSplit {
    std::size_t pairs = 0;
    Rational profit_usd;
    std::size_t unpriced_pairs = 0;
};

struct Report {
    std::size_t total_pairs = 0;
    ClassSplit cross_chain;
    ClassSplit single_chain;
    std::optional<Rational> max_profit_usd;
    std::optional<Rational> total_volume_usd;
    std::vector<ChainPairStats> chain_pairs; // cross-chain pairs only, by profit descending
    std::vector<PoolStats> pools;            // by attacks descending
    std::array<std::size_t, kPositionBins> front_position_all{};
    std::array<std::size_t, kPositionBins> front_position_profitable{};
    std::array<std::size_t, kPositionBins> back_position_all{};
    std::array<std::size_t, kPositionBins> back_position_profitable{};
    GasStats gas;
};

/// Bin of a position in [0, 1]; 1 falls in the last bin.
inline std::size_t position_bin(const Rational& pos) {
    Rational clamped = pos < 0 ? Rational(0) : (pos > 1 ? Rational(1) : pos);
    BigInt bin = floor_rational(clamped * kPositionBins);
    return std::min<std::size_t>(bin.convert_to<std::size_t>(), kPositionBins - 1);
}

/// (N_A1 - N_s) / (N_v - N_s); a zero-width window counts as the victim's block.
inline Rational front_position(const SandwichPair& p) {
    const auto na1 = p.front.block_number, nv = p.victim.block_number, ns = p.source_block;
    if (nv <= ns) return Rational(1);
    return Rational(BigInt(na1) - BigInt(ns), BigInt(nv - ns));
}

/// (N_A2 - N_v) / num.
inline Rational back_position(const SandwichPair& p, std::uint64_t num) {
    return Rational(BigInt(p.back.block_number) - BigInt(p.victim.block_number), BigInt(num));
}

inline std::size_t gas_delta_bucket(std::uint64_t victim_gas, std::uint64_t back_gas) {
    BigInt delta = BigInt(victim_gas) - BigInt(back_gas);
    if (delta < 0) return 0;
    if (delta < kWeiPerGwei) return 1;
    if (delta < 10 * BigInt(kWeiPerGwei)) return 2;
    return 3;
}

/// `records` and `prices` feed the volume columns; chain-pair rows cover cross-chain pairs only.
inline Report aggregate(const std::vector<SandwichPair>& pairs, const std::vector<CrossChainTx>& records,
                        const PriceTable& prices, std::uint64_t num) {
    Report r;
    r.total_pairs = pairs.size();
    std::map<std::pair<ChainId, ChainId>, ChainPairStats> by_chain;
    std::map<std::pair<ChainId, Address>, std::size_t> by_pool;

    for (const auto& p : pairs) {
        ClassSplit& split = p.classification == PairClass::CrossChain ? r.cross_chain : r.single_chain;
        ++split.pairs;
        if (p.profit_usd) {
            split.profit_usd += *p.profit_usd;
            if (!r.max_profit_usd || *p.profit_usd > *r.max_profit_usd) r.max_profit_usd = *p.profit_usd;
        } else {
            ++split.unpriced_pairs;
        }
        ++by_pool[{p.destination_chain, p.pool}];

        if (p.classification == PairClass::CrossChain) {
            auto& c = by_chain[{p.source_chain, p.destination_chain}];
            c.source = p.source_chain;
            c.destination = p.destination_chain;
            ++c.pairs;
            if (p.profit_usd)
                c.profit_usd += *p.profit_usd;
            else
                ++c.unpriced_pairs;
        }

        const bool profitable = p.profit > 0;
        std::size_t fb = position_bin(front_position(p));
        std::size_t bb = position_bin(back_position(p, num));
        ++r.front_position_all[fb];
        ++r.back_position_all[bb];
        if (profitable) {
            ++r.front_position_profitable[fb];
            ++r.back_position_profitable[bb];
        }

        ++r.gas.pairs;
        if (p.front.gas_price < p.victim.gas_price) ++r.gas.front_below_victim;
        if (p.front.gas_price == 0) ++r.gas.zero_gas_front;
        ++r.gas.back_delta[gas_delta_bucket(p.victim.gas_price, p.back.gas_price)];
    }

    if (!records.empty()) {
        Rational total = 0;
        bool complete = true;
        for (const auto& rec : records) {
            if (rec.hops.empty()) continue;
            const auto& hop = rec.hops.front();
            auto usd = prices.usd(hop.token_in, to_big(hop.amount_in));
            if (!usd) {
                complete = false;
                continue;
            }
            total += *usd;
            auto it = by_chain.find({rec.source.chain_id, rec.destination.chain_id});
            if (it != by_chain.end()) it->second.volume_usd = it->second.volume_usd.value_or(Rational(0)) + *usd;
        }
        if (complete) r.total_volume_usd = total;
    }

    for (auto& [key, stats] : by_chain) r.chain_pairs.push_back(std::move(stats));
    std::stable_sort(r.chain_pairs.begin(), r.chain_pairs.end(),
                     [](const ChainPairStats& a, const ChainPairStats& b) { return a.profit_usd > b.profit_usd; });
    for (auto& [key, count] : by_pool) r.pools.push_back(PoolStats{key.first, key.second, count});
    std::stable_sort(r.pools.begin(), r.pools.end(), [](const PoolStats& a, const PoolStats& b) { return a.attacks > b.attacks; });
    return r;
}

} // namespace xsw
