#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"
#include "xsw/sim/distribution.hpp"

namespace xsw::sim {

struct ChainConfig {
    std::uint64_t chain_id = 1;
    double block_interval = 12.0;
    double block_offset = 0.0; // block n is produced at offset + n * interval, n >= 1
};

enum class BackrunTrigger { Inclusion, Mempool };
enum class PoolSelection { Uniform, RoundRobin };

struct AttackerConfig {
    bool enabled = true;
    ExtractionFraction theta;
    std::optional<TokenAmount> capital_limit; // per front-run, in the pool's input token
    bool private_submission = true;           // private txs pay no gas and open the next block
    std::uint64_t gas_price = 0;              // wei, for public submissions
    std::uint64_t backrun_gas_discount = 1;   // wei below the victim for mempool-triggered back-runs
    BackrunTrigger backrun_trigger = BackrunTrigger::Inclusion;
    std::uint64_t gas_cost_bps = 0;           // G_c as basis points of the victim input
    std::optional<SlippageTolerance> slippage; // min_out on TA1; none means no protection
};

struct BotConfig {
    bool enabled = true;
    std::uint64_t gas_premium = 1'000'000'000ull;  // wei over the target
    std::uint64_t backrun_gas_discount = 1;        // wei under the target
    std::uint64_t gas_cost_bps = 0;
};

/// One multi-pool route: pool indices with the direction taken on each.
struct PathConfig {
    std::vector<std::size_t> pools;
    std::vector<Direction> directions;
};

struct RelayConfig {
    std::size_t relayer_count = 3;
    std::size_t dishonest_relayers = 0; // these always fail verification
    Rational consensus_threshold{2, 3};
    Distribution delay = Distribution::log_normal_p95(100.0, 0.5);
};

struct SimConfig {
    std::uint64_t seed = 1;
    double horizon = 3600.0;
    ChainConfig source{1, 12.0, 0.0};
    ChainConfig destination{56, 3.0, 1.0};
    RelayConfig relay;

    std::vector<Pool> pools;
    std::vector<PathConfig> paths; // empty: each victim swaps on a single pool
    PoolSelection pool_selection = PoolSelection::Uniform;

    double victim_arrival_rate = 0.1; // per second on the source chain
    std::uint64_t victim_count = 0;   // 0: unlimited until the horizon
    Distribution victim_size = Distribution::log_uniform(1e-4, 1e-2); // fraction of the input reserve
    Distribution victim_slippage = Distribution::uniform(0.005, 0.03);
    Distribution victim_gas_gwei = Distribution::uniform(3.0, 6.0);
    double victim_x_for_y_share = 0.5;

    double noise_arrival_rate = 0.02; // per second per pool
    Distribution noise_size = Distribution::log_uniform(1e-5, 1e-2);
    Distribution noise_gas_gwei = Distribution::uniform(1.0, 3.0);
    double noise_x_for_y_share = 0.5;
    std::size_t noise_trader_count = 1000;

    AttackerConfig attacker;
    BotConfig bot;

    void validate() const {
        auto fail = [](const std::string& field, const std::string& why) {
            throw Error(ErrorCode::InvalidConfig, field + ": " + why);
        };
        if (!(horizon > 0)) fail("horizon", "must be positive");
        if (!std::isfinite(horizon) && victim_count == 0) fail("horizon", "must be finite without a victim_count");
        if (!(source.block_interval > 0)) fail("source.block_interval", "must be positive");
        if (!(destination.block_interval > 0)) fail("destination.block_interval", "must be positive");
        if (source.block_offset < 0) fail("source.block_offset", "must be non-negative");
        if (destination.block_offset < 0) fail("destination.block_offset", "must be non-negative");
        if (source.chain_id == destination.chain_id) fail("destination.chain_id", "must differ from the source chain");
        if (relay.relayer_count < 1) fail("relay.relayer_count", "must be at least 1");
        if (relay.dishonest_relayers > relay.relayer_count) fail("relay.dishonest_relayers", "exceeds relayer_count");
        if (!(relay.consensus_threshold > Rational(1, 2)) || relay.consensus_threshold > 1)
            fail("relay.consensus_threshold", "must lie in (1/2, 1]");
        relay.delay.validate("relay.delay");
        if (pools.empty()) fail("pools", "at least one pool is required");
        for (std::size_t i = 0; i < pools.size(); ++i) {
            if (pools[i].reserve_x == 0 || pools[i].reserve_y == 0)
                fail("pools[" + std::to_string(i) + "]", "reserves must be positive");
            if (pools[i].token_x == pools[i].token_y) fail("pools[" + std::to_string(i) + "]", "tokens must differ");
        }
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& p = paths[i];
            std::string field = "paths[" + std::to_string(i) + "]";
            if (p.pools.empty() || p.pools.size() != p.directions.size()) fail(field, "needs one direction per pool");
            for (std::size_t k = 0; k < p.pools.size(); ++k) {
                if (p.pools[k] >= pools.size()) fail(field, "unknown pool index " + std::to_string(p.pools[k]));
                if (k > 0) {
                    const auto& prev = pools[p.pools[k - 1]];
                    const auto& cur = pools[p.pools[k]];
                    if (prev.token_out(p.directions[k - 1]) != cur.token_in(p.directions[k]))
                        fail(field, "hop " + std::to_string(k) + " does not continue the previous output token");
                }
            }
        }
        if (!(victim_arrival_rate > 0)) fail("victim_arrival_rate", "must be positive");
        victim_size.validate("victim_size");
        victim_slippage.validate("victim_slippage");
        victim_gas_gwei.validate("victim_gas_gwei", true);
        if (victim_x_for_y_share < 0 || victim_x_for_y_share > 1) fail("victim_x_for_y_share", "must lie in [0, 1]");
        if (noise_arrival_rate < 0) fail("noise_arrival_rate", "must be non-negative");
        noise_size.validate("noise_size");
        noise_gas_gwei.validate("noise_gas_gwei", true);
        if (noise_x_for_y_share < 0 || noise_x_for_y_share > 1) fail("noise_x_for_y_share", "must lie in [0, 1]");
        if (noise_trader_count < 1) fail("noise_trader_count", "must be at least 1");
    }
};

} // namespace xsw::sim
