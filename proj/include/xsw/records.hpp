#pragma once

// Record shapes shared by the simulator exports, the detector and the codecs.

#include <cstdint>
#include <string>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/core/bytes.hpp"
#include "xsw/core/numeric.hpp"

namespace xsw {

using ChainId = std::uint64_t;

/// One decoded swap event. `direction` is relative to the pool's token0/token1.
struct SwapLog {
    Hash32 tx_hash;
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;
    Address pool;
    ChainId chain_id = 0;
    Direction direction = Direction::XforY;
    std::string token_in;
    std::string token_out;
    TokenAmount amount_in;
    TokenAmount amount_out;
    Address sender;
    Address recipient;
    std::uint64_t gas_price = 0; // wei
    double timestamp = 0.0;      // seconds

    friend bool operator==(const SwapLog&, const SwapLog&) = default;
};

/// Strict (block, log_index) order within one chain.
inline bool log_precedes(const SwapLog& a, const SwapLog& b) {
    if (a.block_number != b.block_number) return a.block_number < b.block_number;
    return a.log_index < b.log_index;
}

struct TxRef {
    Hash32 hash;
    ChainId chain_id = 0;
    std::uint64_t block_number = 0;
    double timestamp = 0.0;
    std::uint64_t gas_price = 0;

    friend bool operator==(const TxRef&, const TxRef&) = default;
};

/// The victim's swap on one pool of its destination path.
struct VictimHop {
    Address pool;
    Direction direction = Direction::XforY;
    std::string token_in;
    std::string token_out;
    TokenAmount amount_in;
    TokenAmount amount_out; // 0 when the destination transaction reverted
    TokenAmount min_return;
    bool stable_pair = false;

    friend bool operator==(const VictimHop&, const VictimHop&) = default;
};

struct CrossChainTx {
    std::uint64_t id = 0;
    TxRef source;
    TxRef destination;
    Address recipient;
    std::vector<VictimHop> hops; // non-empty
    bool reverted = false;

    friend bool operator==(const CrossChainTx&, const CrossChainTx&) = default;
};

} // namespace xsw
