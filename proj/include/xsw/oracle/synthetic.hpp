#pragma once

// Small adversarial detection corpora: few recipients, amounts clustered around
// the band edges, victims with logs in both directions, and source events that
// fall between, on, or after block timestamps.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "xsw/records.hpp"

namespace xsw::oracle {

struct SyntheticCorpus {
    std::vector<CrossChainTx> records;
    std::vector<SwapLog> logs;
};

struct SyntheticShape {
    std::size_t max_pools = 3;
    std::size_t max_records = 4;
    std::size_t max_logs_per_pool = 50;
    std::uint64_t max_blocks = 30;
};

inline SyntheticCorpus synthetic_corpus(std::uint64_t seed, const SyntheticShape& shape = {}) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

    constexpr ChainId kDst = 56;
    const std::uint64_t blocks = pick(3, shape.max_blocks);
    const double t0 = static_cast<double>(pick(0, 5)) + 0.5 * static_cast<double>(pick(0, 1));
    auto ts = [&](std::uint64_t b) { return t0 + 3.0 * static_cast<double>(b); };

    const std::size_t pools = pick(1, shape.max_pools);
    std::vector<Address> pool_addr;
    for (std::size_t i = 0; i < pools; ++i) pool_addr.push_back(Address::from_counter(0x51, i));
    std::vector<Address> people;
    for (std::uint64_t i = 0; i < 4; ++i) people.push_back(Address::from_counter(0x52, i));

    std::uint64_t tx_counter = 0;
    SyntheticCorpus c;
    std::vector<std::size_t> per_pool(pools, 0);

    auto amount = [&]() -> TokenAmount {
        // 90..112 straddles both edges of a [9/10, 11/10] band around 100.
        if (coin(0.03)) return TokenAmount(0);
        return TokenAmount(pick(88, 112));
    };
    auto add_log = [&](std::size_t pool, std::uint64_t block, Direction d, const Hash32& tx) {
        SwapLog l;
        l.tx_hash = tx;
        l.block_number = block;
        l.pool = pool_addr[pool];
        l.chain_id = kDst;
        l.direction = d;
        l.token_in = d == Direction::XforY ? "X" : "Y";
        l.token_out = d == Direction::XforY ? "Y" : "X";
        l.amount_in = amount();
        l.amount_out = amount();
        l.sender = people[pick(0, people.size() - 1)];
        l.recipient = people[pick(0, people.size() - 1)];
        l.gas_price = pick(0, 5);
        l.timestamp = ts(block);
        c.logs.push_back(l);
        ++per_pool[pool];
    };

    const std::size_t records = pick(1, shape.max_records);
    for (std::size_t r = 0; r < records; ++r) {
        CrossChainTx rec;
        rec.id = r + 1;
        rec.recipient = people[pick(0, people.size() - 1)];
        rec.destination.hash = Hash32::from_counter(0x53, r);
        rec.destination.chain_id = kDst;
        rec.destination.block_number = pick(1, blocks);
        rec.destination.timestamp = ts(rec.destination.block_number);
        rec.source.hash = Hash32::from_counter(0x54, r);
        rec.source.chain_id = 1;
        // Anywhere from before the first block to past the last one, including exact block times.
        double lo = t0 - 4.0, hi = ts(blocks) + 4.0;
        rec.source.timestamp = coin(0.3) ? ts(pick(0, blocks)) : std::uniform_real_distribution<double>(lo, hi)(rng);

        std::vector<std::size_t> order(pools);
        for (std::size_t i = 0; i < pools; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t hops = pick(1, std::min<std::size_t>(2, pools));
        for (std::size_t h = 0; h < hops; ++h) {
            VictimHop hop;
            hop.pool = pool_addr[order[h]];
            hop.direction = coin(0.5) ? Direction::XforY : Direction::YforX;
            hop.token_in = hop.direction == Direction::XforY ? "X" : "Y";
            hop.token_out = hop.direction == Direction::XforY ? "Y" : "X";
            hop.amount_in = TokenAmount(100);
            hop.amount_out = TokenAmount(97);
            hop.min_return = TokenAmount(95);
            rec.hops.push_back(hop);
            if (coin(0.05)) continue; // no victim log on this pool
            Direction vd = coin(0.9) ? hop.direction : opposite(hop.direction);
            add_log(order[h], rec.destination.block_number, vd, rec.destination.hash);
            if (coin(0.1)) add_log(order[h], rec.destination.block_number, opposite(vd), rec.destination.hash);
        }
        c.records.push_back(std::move(rec));
    }

    for (std::size_t p = 0; p < pools; ++p) {
        const std::size_t n = pick(0, shape.max_logs_per_pool - std::min(per_pool[p], shape.max_logs_per_pool));
        for (std::size_t i = 0; i < n; ++i) {
            // Some fronts and backs share a transaction, as a bundle would.
            Hash32 tx = coin(0.1) && tx_counter > 0 ? Hash32::from_counter(0x55, pick(0, tx_counter - 1)) : Hash32::from_counter(0x55, tx_counter++);
            add_log(p, pick(1, blocks), coin(0.5) ? Direction::XforY : Direction::YforX, tx);
        }
    }

    // Distinct log indices within each block, in random order.
    std::vector<std::uint64_t> idx(c.logs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < c.logs.size(); ++i) c.logs[i].log_index = idx[i];
    std::shuffle(c.logs.begin(), c.logs.end(), rng);
    return c;
}

} // namespace xsw::oracle
