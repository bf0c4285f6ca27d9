#pragma once

// Turns a trace into detector and estimator inputs plus the ground truth behind them.

#include <cstdint>
#include <cstddef>
#include <vector>

#include "xsw/attack_model.hpp"
#include "xsw/records.hpp"
#include "xsw/sim/simulator.hpp"

namespace xsw::sim {

struct PlantedAttack {
    std::uint64_t victim = 0;
    Address pool;
    Hash32 front;
    Hash32 victim_tx;
    Hash32 back;

    friend bool operator==(const PlantedAttack&, const PlantedAttack&) = default;
};

/// Timelines are per (victim, hop); `hop` keeps the pairing explicit.
struct TimelineRef {
    std::uint64_t victim = 0;
    std::size_t hop = 0;
    bool attacked = false; // the attacker's TA1 executed on this pool
};

struct Corpus {
    std::vector<PoolTimeline> timelines;
    std::vector<TimelineRef> timeline_refs;
    std::vector<SwapLog> logs;
    std::vector<CrossChainTx> records;
    std::vector<PlantedAttack> truth;
};

inline SwapLog to_swap_log(const SimTrace& trace, const TraceEvent& e, ChainId chain) {
    const DstTx& tx = trace.txs[e.tx];
    const Pool& pool = trace.initial_pools[e.pool];
    SwapLog log;
    log.tx_hash = tx.hash;
    log.block_number = e.block;
    log.log_index = e.log_index;
    log.pool = pool.address;
    log.chain_id = chain;
    log.direction = e.direction;
    log.token_in = pool.token_in(e.direction);
    log.token_out = pool.token_out(e.direction);
    log.amount_in = e.amount_in;
    log.amount_out = e.amount_out;
    log.sender = tx.sender;
    log.recipient = tx.recipient;
    log.gas_price = tx.gas_price;
    log.timestamp = e.time;
    return log;
}

inline Corpus extract_corpus(const SimTrace& trace) {
    Corpus c;
    if (trace.events.empty()) return c;

    // Replay reserves in event order; snapshot a victim's hop pools at its commit.
    std::vector<Pool> state = trace.initial_pools;
    std::vector<std::vector<Pool>> snapshots(trace.victims.size());
    std::vector<std::size_t> tv_event(trace.victims.size(), SIZE_MAX);
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const TraceEvent& e = trace.events[i];
        if (e.kind == TraceKind::Commit) {
            for (const auto& hop : trace.victims[e.victim].message->payload.hops) snapshots[e.victim].push_back(state[hop.pool]);
        } else if (e.kind == TraceKind::Execute) {
            Pool& p = state[e.pool];
            if (e.direction == Direction::XforY) {
                p.reserve_x = to_amount(to_big(p.reserve_x) + to_big(e.amount_in));
                p.reserve_y = to_amount(to_big(p.reserve_y) - to_big(e.amount_out));
            } else {
                p.reserve_y = to_amount(to_big(p.reserve_y) + to_big(e.amount_in));
                p.reserve_x = to_amount(to_big(p.reserve_x) - to_big(e.amount_out));
            }
            c.logs.push_back(to_swap_log(trace, e, e.chain));
            if (e.role == TxRole::Tv && tv_event[e.victim] == SIZE_MAX) tv_event[e.victim] = i;
        } else if (e.kind == TraceKind::Revert && e.role == TxRole::Tv) {
            tv_event[e.victim] = i;
        }
    }

    for (const VictimInfo& v : trace.victims) {
        if (v.fate != VictimFate::Executed && v.fate != VictimFate::Reverted) continue;
        const DstTx& tv = trace.txs[v.tv];
        const auto& hops = v.message->payload.hops;

        CrossChainTx rec;
        rec.id = v.id;
        rec.source = v.source;
        rec.destination = TxRef{tv.hash, trace.events[tv_event[v.id]].chain, tv.block, tv.exec_time, tv.gas_price};
        rec.recipient = v.message->payload.recipient;
        rec.reverted = v.fate == VictimFate::Reverted;
        for (std::size_t k = 0; k < hops.size(); ++k) {
            const Pool& pool = trace.initial_pools[hops[k].pool];
            VictimHop h;
            h.pool = pool.address;
            h.direction = hops[k].direction;
            h.token_in = pool.token_in(h.direction);
            h.token_out = pool.token_out(h.direction);
            h.amount_in = rec.reverted ? hops[k].amount_in : tv.amounts_in[k];
            h.amount_out = rec.reverted ? TokenAmount(0) : tv.amounts_out[k];
            h.min_return = hops[k].min_return;
            rec.hops.push_back(std::move(h));
        }
        c.records.push_back(std::move(rec));

        // Noise: swaps on the hop's pool after the commit and before T_v, minus this victim's TA1.
        const std::size_t end = tv_event[v.id];
        for (std::size_t k = 0; k < hops.size(); ++k) {
            PoolTimeline tl;
            tl.victim_id = v.id;
            tl.pool = snapshots[v.id][k];
            tl.victim = SwapRequest{hops[k].direction, hops[k].amount_in, hops[k].min_return, {}, v.message->payload.recipient};
            tl.slippage = v.intent.slippage;
            bool attacked = false;
            for (std::size_t i = v.commit_event + 1; i < end; ++i) {
                const TraceEvent& e = trace.events[i];
                if (e.kind != TraceKind::Execute || e.pool != hops[k].pool) continue;
                if (e.tx == v.ta1) {
                    attacked = true;
                    continue;
                }
                tl.noisy_swaps.push_back(NoisySwap{e.direction, e.amount_in});
            }
            c.timelines.push_back(std::move(tl));
            c.timeline_refs.push_back(TimelineRef{v.id, k, attacked});
        }

        if (v.ta1 != kNone && v.ta2 != kNone && v.fate == VictimFate::Executed) {
            const DstTx& a1 = trace.txs[v.ta1];
            const DstTx& a2 = trace.txs[v.ta2];
            if (a1.status == TxStatus::Executed && a2.status == TxStatus::Executed) {
                c.truth.push_back(PlantedAttack{v.id, trace.initial_pools[a1.hops.front().pool].address, a1.hash, tv.hash, a2.hash});
            }
        }
    }
    return c;
}

} // namespace xsw::sim
