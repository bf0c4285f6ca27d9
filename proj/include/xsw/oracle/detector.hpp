#pragma once

// Brute-force reference for sandwich detection. Works on the raw, unsorted log
// list with linear scans and integer cross-multiplication; shares only the record
// types with xsw/detector.hpp.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "xsw/records.hpp"

namespace xsw::oracle {

struct Band {
    BigInt low_num = 9, low_den = 10;
    BigInt high_num = 11, high_den = 10;
};

/// low <= back_in / front_out <= high without forming the ratio.
inline bool within(const Band& b, const BigInt& back_in, const BigInt& front_out) {
    if (front_out == 0) return false;
    return back_in * b.low_den >= b.low_num * front_out && back_in * b.high_den <= b.high_num * front_out;
}

/// (record id, hop, front tx, front log index, back tx, back log index)
using PairKey = std::tuple<std::uint64_t, std::size_t, std::string, std::uint64_t, std::string, std::uint64_t>;

inline bool before(const SwapLog& a, const SwapLog& b) {
    return std::tie(a.block_number, a.log_index) < std::tie(b.block_number, b.log_index);
}

inline std::vector<PairKey> detect_brute(const std::vector<CrossChainTx>& records, const std::vector<SwapLog>& logs,
                                         std::uint64_t num, const Band& band) {
    std::vector<PairKey> out;
    for (const auto& r : records) {
        const ChainId chain = r.destination.chain_id;

        std::optional<std::uint64_t> ns;
        for (const auto& l : logs)
            if (l.chain_id == chain && l.timestamp >= r.source.timestamp && (!ns || l.block_number < *ns)) ns = l.block_number;

        for (std::size_t h = 0; h < r.hops.size(); ++h) {
            const VictimHop& hop = r.hops[h];
            auto on_pool = [&](const SwapLog& l) { return l.chain_id == chain && l.pool == hop.pool; };

            const SwapLog* victim = nullptr;
            for (const auto& l : logs) {
                if (!on_pool(l) || l.tx_hash != r.destination.hash) continue;
                bool better = !victim || (l.direction == hop.direction && victim->direction != hop.direction) ||
                              (l.direction == victim->direction && before(l, *victim));
                if (better) victim = &l;
            }
            if (!victim) continue;
            const std::uint64_t start = ns.value_or(victim->block_number + 1);

            std::vector<const SwapLog*> fronts, backs;
            for (const auto& l : logs) {
                if (!on_pool(l) || l.tx_hash == victim->tx_hash) continue;
                if (l.direction == victim->direction && l.block_number >= start && before(l, *victim)) fronts.push_back(&l);
                if (l.direction != victim->direction && before(*victim, l) && l.block_number <= victim->block_number + num)
                    backs.push_back(&l);
            }
            auto by_pos = [](const SwapLog* a, const SwapLog* b) { return before(*a, *b); };
            std::stable_sort(fronts.begin(), fronts.end(), by_pos);
            std::stable_sort(backs.begin(), backs.end(), by_pos);
            std::vector<bool> used(backs.size(), false);

            for (const SwapLog* f : fronts) {
                std::optional<std::size_t> pick;
                for (std::size_t i = 0; i < backs.size() && !pick; ++i)
                    if (!used[i] && within(band, to_big(backs[i]->amount_in), to_big(f->amount_out)) && backs[i]->recipient == f->recipient)
                        pick = i;
                for (std::size_t i = 0; i < backs.size() && !pick; ++i)
                    if (!used[i] && within(band, to_big(backs[i]->amount_in), to_big(f->amount_out))) pick = i;
                if (!pick) continue;
                used[*pick] = true;
                out.emplace_back(r.id, h, f->tx_hash.hex(), f->log_index, backs[*pick]->tx_hash.hex(), backs[*pick]->log_index);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace xsw::oracle
