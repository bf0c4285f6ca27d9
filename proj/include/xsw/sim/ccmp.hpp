#pragma once

// Commit / Verify / Consensus / Execute steps of the bridge's message path.

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/core/error.hpp"
#include "xsw/records.hpp"
#include "xsw/sim/config.hpp"

namespace xsw::sim {

struct PayloadHop {
    std::size_t pool = 0;
    Direction direction = Direction::XforY;
    TokenAmount amount_in;  // chained quote at commit time for hops after the first
    TokenAmount min_return; // frozen at commit time

    friend bool operator==(const PayloadHop&, const PayloadHop&) = default;
};

struct Payload {
    ChainId dest_chain = 0;
    std::vector<PayloadHop> hops;
    Address recipient;

    friend bool operator==(const Payload&, const Payload&) = default;
};

struct RelayMessage {
    std::uint64_t id = 0;
    std::uint64_t source_height = 0;
    Payload payload;
    double emit_time = 0.0;
};

/// User intent as signed on the source chain.
struct SwapIntent {
    std::vector<std::size_t> pools;
    std::vector<Direction> directions;
    TokenAmount amount_in;
    SlippageTolerance slippage;
    Address recipient;
};

/// Builds m at the source block that includes T_s. Each hop's min_return is frozen from
/// the chained quote on `dst_pools` as they stand at commit time.
inline RelayMessage ccmp_commit(std::uint64_t id, std::uint64_t source_height, double emit_time, ChainId dest_chain,
                                const SwapIntent& intent, const std::vector<Pool>& dst_pools) {
    if (intent.pools.empty() || intent.pools.size() != intent.directions.size())
        throw Error(ErrorCode::InvalidArgument, "intent needs one direction per pool");
    RelayMessage m;
    m.id = id;
    m.source_height = source_height;
    m.emit_time = emit_time;
    m.payload.dest_chain = dest_chain;
    m.payload.recipient = intent.recipient;
    TokenAmount amount = intent.amount_in;
    for (std::size_t k = 0; k < intent.pools.size(); ++k) {
        if (intent.pools[k] >= dst_pools.size()) throw Error(ErrorCode::InvalidArgument, "intent references an unknown pool");
        const Pool& pool = dst_pools[intent.pools[k]];
        TokenAmount quote = amount == 0 ? TokenAmount(0) : quote_output(pool, intent.directions[k], amount);
        m.payload.hops.push_back(
            PayloadHop{intent.pools[k], intent.directions[k], amount, min_out_from_tolerance(quote, intent.slippage)});
        amount = quote;
    }
    return m;
}

struct Relayer {
    std::uint64_t id = 0;
    bool honest = true;
    std::unordered_set<std::uint64_t> seen;
};

/// Honest relayers accept a well-formed message once; unknown pools, a foreign chain,
/// zero amounts or a replayed id are rejected.
inline bool ccmp_verify(const RelayMessage& m, Relayer& relayer, ChainId dest_chain, std::size_t pool_count) {
    if (!relayer.honest) return false;
    if (relayer.seen.count(m.id)) return false;
    if (m.payload.dest_chain != dest_chain || m.payload.hops.empty()) return false;
    for (const auto& hop : m.payload.hops) {
        if (hop.pool >= pool_count) return false;
    }
    if (m.payload.hops.front().amount_in == 0) return false;
    relayer.seen.insert(m.id);
    return true;
}

struct ConsensusResult {
    std::uint64_t leader = 0;
    std::size_t approvals = 0;
};

/// Quorum needs approvals > threshold * relayers. The leader rotates over the approvers by (m.id + seed).
inline ConsensusResult ccmp_consensus(const RelayMessage& m, std::vector<Relayer>& relayers, const Rational& threshold,
                                      std::uint64_t seed, ChainId dest_chain, std::size_t pool_count) {
    std::vector<std::uint64_t> approvers;
    for (auto& r : relayers)
        if (ccmp_verify(m, r, dest_chain, pool_count)) approvers.push_back(r.id);
    if (Rational(BigInt(approvers.size())) <= threshold * BigInt(relayers.size()))
        throw Error(ErrorCode::NoQuorum, std::to_string(approvers.size()) + " of " + std::to_string(relayers.size()) +
                                             " relayers approved message " + std::to_string(m.id));
    return ConsensusResult{approvers[(m.id + seed) % approvers.size()], approvers.size()};
}

/// Destination swap produced by the leader: the payload's hops with their frozen minima.
struct DestinationCall {
    std::uint64_t message_id = 0;
    std::uint64_t leader = 0;
    std::vector<PayloadHop> hops;
    Address recipient;
    double submit_time = 0.0;
};

inline DestinationCall ccmp_execute(const ConsensusResult& consensus, const RelayMessage& m, double latency) {
    return DestinationCall{m.id, consensus.leader, m.payload.hops, m.payload.recipient, m.emit_time + latency};
}

} // namespace xsw::sim
