#pragma once

// Discrete-event run of one source chain, one destination chain with a public
// mempool and a private channel, the relayer set, and four agent kinds.
//
// Event order at equal times: destination block, source block, then arrivals by
// sequence number. A block at time t includes only transactions submitted before t.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/attack_model.hpp"
#include "xsw/records.hpp"
#include "xsw/sim/ccmp.hpp"
#include "xsw/sim/config.hpp"
#include "xsw/sim/distribution.hpp"

namespace xsw::sim {

inline constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

enum class AgentKind { Victim, Noise, Attacker, Bot };

constexpr std::string_view to_string(AgentKind a) noexcept {
    switch (a) {
    case AgentKind::Victim: return "victim";
    case AgentKind::Noise: return "noise";
    case AgentKind::Attacker: return "attacker";
    case AgentKind::Bot: return "bot";
    }
    return "noise";
}

constexpr std::string_view to_string(TxRole r) noexcept {
    switch (r) {
    case TxRole::Ts: return "Ts";
    case TxRole::TA1: return "TA1";
    case TxRole::TA2: return "TA2";
    case TxRole::Tv: return "Tv";
    case TxRole::TB1: return "TB1";
    case TxRole::TB2: return "TB2";
    case TxRole::Noise: return "noise";
    }
    return "noise";
}

enum class TxStatus { Pending, Executed, Reverted, Dropped };

constexpr std::string_view to_string(TxStatus s) noexcept {
    switch (s) {
    case TxStatus::Pending: return "pending";
    case TxStatus::Executed: return "executed";
    case TxStatus::Reverted: return "reverted";
    case TxStatus::Dropped: return "dropped";
    }
    return "pending";
}

/// A destination-chain transaction. Back-runs carry `link` to the front-run whose
/// output they sell; their amount is fixed when they execute.
struct DstTx {
    std::uint64_t id = 0;
    Hash32 hash;
    TxRole role = TxRole::Noise;
    AgentKind agent = AgentKind::Noise;
    std::uint64_t victim = kNone; // victim this tx belongs to or attacks
    std::uint64_t target = kNone; // bot: the tx being sandwiched
    std::uint64_t link = kNone;   // back-run: its front-run
    std::vector<PayloadHop> hops;
    Address sender;
    Address recipient;
    std::uint64_t gas_price = 0;
    bool is_private = false;
    double submit_time = 0.0;

    TxStatus status = TxStatus::Pending;
    std::uint64_t block = 0;
    double exec_time = 0.0;
    std::uint64_t exec_seq = kNone; // global execution order, reverts included
    std::vector<TokenAmount> amounts_in;
    std::vector<TokenAmount> amounts_out;
};

enum class VictimFate { Pending, Executed, Reverted, NoQuorum, Horizon };

constexpr std::string_view to_string(VictimFate f) noexcept {
    switch (f) {
    case VictimFate::Pending: return "pending";
    case VictimFate::Executed: return "executed";
    case VictimFate::Reverted: return "reverted";
    case VictimFate::NoQuorum: return "no_quorum";
    case VictimFate::Horizon: return "horizon";
    }
    return "pending";
}

struct VictimInfo {
    std::uint64_t id = 0;
    double arrival_time = 0.0;
    SwapIntent intent;
    TxRef source;
    bool committed = false;
    std::optional<RelayMessage> message;
    std::uint64_t leader = kNone;
    double latency = 0.0;
    std::uint64_t tv = kNone;
    std::uint64_t ta1 = kNone;
    std::uint64_t ta2 = kNone;
    std::uint64_t tv_gas = 0;
    VictimFate fate = VictimFate::Pending;
    std::size_t commit_event = 0; // index into SimTrace::events
};

enum class TraceKind { SourceInclude, Commit, Consensus, NoQuorum, Submit, Execute, Revert, Drop };

constexpr std::string_view to_string(TraceKind k) noexcept {
    switch (k) {
    case TraceKind::SourceInclude: return "source_include";
    case TraceKind::Commit: return "commit";
    case TraceKind::Consensus: return "consensus";
    case TraceKind::NoQuorum: return "no_quorum";
    case TraceKind::Submit: return "submit";
    case TraceKind::Execute: return "execute";
    case TraceKind::Revert: return "revert";
    case TraceKind::Drop: return "drop";
    }
    return "submit";
}

/// One line of the event log. `tx` is a destination tx id, or the victim id for
/// source-side and relay events. Execute events are per hop.
struct TraceEvent {
    double time = 0.0;
    TraceKind kind = TraceKind::Submit;
    ChainId chain = 0;
    TxRole role = TxRole::Noise;
    std::uint64_t tx = kNone;
    std::uint64_t victim = kNone;
    std::size_t pool = 0;
    Direction direction = Direction::XforY;
    TokenAmount amount_in;
    TokenAmount amount_out;
    std::uint64_t gas_price = 0;
    std::uint64_t block = 0;
    std::uint64_t log_index = 0;
};

using Balances = std::map<std::string, std::map<std::string, BigInt>>; // agent -> token -> signed delta

struct SimTrace {
    std::vector<TraceEvent> events;
    std::vector<VictimInfo> victims;
    std::vector<DstTx> txs;
    std::vector<Pool> initial_pools;
    std::vector<Pool> final_pools;
    Balances balances;
    std::uint64_t source_blocks = 0;
    std::uint64_t destination_blocks = 0;
};

inline Address agent_address(AgentKind kind, std::uint64_t index) {
    std::uint64_t tag = 0;
    switch (kind) {
    case AgentKind::Victim: tag = 0x11; break;
    case AgentKind::Noise: tag = 0x22; break;
    case AgentKind::Attacker: tag = 0xA1; break;
    case AgentKind::Bot: tag = 0xB1; break;
    }
    return Address::from_counter(tag, index);
}

inline Address default_pool_address(std::size_t index) { return Address::from_counter(0x9001, index); }

inline std::uint64_t gwei_to_wei(double gwei) {
    if (!(gwei > 0)) return 0;
    return static_cast<std::uint64_t>(std::llround(gwei * 1e9));
}

class Simulator {
public:
    explicit Simulator(SimConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
        cfg_.validate();
        for (std::size_t i = 0; i < cfg_.pools.size(); ++i)
            if (cfg_.pools[i].address.is_zero()) cfg_.pools[i].address = default_pool_address(i);
        pools_ = cfg_.pools;
        for (std::size_t i = 0; i < cfg_.relay.relayer_count; ++i)
            relayers_.push_back(Relayer{i, i >= cfg_.relay.dishonest_relayers, {}});
    }

    SimTrace run() {
        trace_.initial_pools = pools_;
        schedule(cfg_.source.block_offset + cfg_.source.block_interval, Phase::SourceBlock, Kind::SourceBlock, 1);
        schedule(cfg_.destination.block_offset + cfg_.destination.block_interval, Phase::DestinationBlock,
                 Kind::DestinationBlock, 1);
        schedule(rng_.exponential(cfg_.victim_arrival_rate), Phase::Arrival, Kind::VictimArrival, 0);
        if (cfg_.noise_arrival_rate > 0)
            for (std::size_t p = 0; p < pools_.size(); ++p)
                schedule(rng_.exponential(cfg_.noise_arrival_rate), Phase::Arrival, Kind::NoiseArrival, p);

        while (!queue_.empty()) {
            Event ev = queue_.top();
            if (ev.time > cfg_.horizon || ev.time > stop_time_) break;
            queue_.pop();
            now_ = ev.time;
            switch (ev.kind) {
            case Kind::DestinationBlock: on_destination_block(ev.ref); break;
            case Kind::SourceBlock: on_source_block(ev.ref); break;
            case Kind::VictimArrival: on_victim_arrival(); break;
            case Kind::NoiseArrival: on_noise_arrival(ev.ref); break;
            case Kind::TxArrival: on_tx_arrival(ev.ref); break;
            }
        }
        for (auto& v : trace_.victims)
            if (v.fate == VictimFate::Pending) v.fate = VictimFate::Horizon;
        trace_.final_pools = pools_;
        return std::move(trace_);
    }

private:
    enum class Phase { DestinationBlock = 0, SourceBlock = 1, Arrival = 2 };
    enum class Kind { DestinationBlock, SourceBlock, VictimArrival, NoiseArrival, TxArrival };

    struct Event {
        double time;
        Phase phase;
        std::uint64_t seq;
        Kind kind;
        std::uint64_t ref;

        bool operator>(const Event& o) const {
            if (time != o.time) return time > o.time;
            if (phase != o.phase) return phase > o.phase;
            return seq > o.seq;
        }
    };

    void schedule(double time, Phase phase, Kind kind, std::uint64_t ref) {
        queue_.push(Event{time, phase, next_seq_++, kind, ref});
    }

    TraceEvent& log_event(TraceKind kind, ChainId chain) {
        TraceEvent e;
        e.time = now_;
        e.kind = kind;
        e.chain = chain;
        trace_.events.push_back(e);
        return trace_.events.back();
    }

    void credit(AgentKind agent, const std::string& token, const BigInt& delta) {
        trace_.balances[std::string(to_string(agent))][token] += delta;
    }

    TokenAmount fraction_of(const TokenAmount& reserve, double fraction) const {
        double scaled = std::floor(to_big(reserve).convert_to<double>() * fraction);
        // The reserve itself caps the draw; doubles cover any 256-bit reserve.
        BigInt v = scaled < 1 ? BigInt(1) : BigInt(static_cast<long double>(scaled));
        if (v >= to_big(reserve)) v = to_big(reserve) - 1;
        if (v < 1) v = 1;
        return to_amount(v);
    }

    DstTx& new_tx(TxRole role, AgentKind agent) {
        DstTx tx;
        tx.id = trace_.txs.size();
        tx.hash = Hash32::from_counter(cfg_.destination.chain_id, tx.id);
        tx.role = role;
        tx.agent = agent;
        trace_.txs.push_back(std::move(tx));
        return trace_.txs.back();
    }

    void on_victim_arrival() {
        if (cfg_.victim_count > 0 && trace_.victims.size() >= cfg_.victim_count) return;
        VictimInfo v;
        v.id = trace_.victims.size();
        v.arrival_time = now_;
        if (!cfg_.paths.empty()) {
            std::size_t k = cfg_.pool_selection == PoolSelection::RoundRobin ? v.id % cfg_.paths.size()
                                                                             : rng_.below(cfg_.paths.size());
            v.intent.pools = cfg_.paths[k].pools;
            v.intent.directions = cfg_.paths[k].directions;
        } else {
            std::size_t p = cfg_.pool_selection == PoolSelection::RoundRobin ? v.id % pools_.size() : rng_.below(pools_.size());
            v.intent.pools = {p};
            v.intent.directions = {rng_.bernoulli(cfg_.victim_x_for_y_share) ? Direction::XforY : Direction::YforX};
        }
        const Pool& first = pools_[v.intent.pools.front()];
        v.intent.amount_in = fraction_of(first.reserve_in(v.intent.directions.front()), cfg_.victim_size.sample(rng_));
        double s = std::clamp(cfg_.victim_slippage.sample(rng_), 1e-6, 0.999999);
        v.intent.slippage = SlippageTolerance(std::max<std::uint64_t>(1, std::llround(s * 1e6)), 1'000'000);
        v.intent.recipient = agent_address(AgentKind::Victim, v.id);
        v.tv_gas = gwei_to_wei(cfg_.victim_gas_gwei.sample(rng_));
        v.source.hash = Hash32::from_counter(cfg_.source.chain_id, v.id);
        v.source.chain_id = cfg_.source.chain_id;
        trace_.victims.push_back(std::move(v));
        source_pending_.push_back(trace_.victims.back().id);
        schedule(now_ + rng_.exponential(cfg_.victim_arrival_rate), Phase::Arrival, Kind::VictimArrival, 0);
    }

    void on_noise_arrival(std::size_t pool) {
        Direction d = rng_.bernoulli(cfg_.noise_x_for_y_share) ? Direction::XforY : Direction::YforX;
        TokenAmount amount = fraction_of(pools_[pool].reserve_in(d), cfg_.noise_size.sample(rng_));
        std::uint64_t gas = gwei_to_wei(cfg_.noise_gas_gwei.sample(rng_));
        Address trader = agent_address(AgentKind::Noise, rng_.below(cfg_.noise_trader_count));
        DstTx& tx = new_tx(TxRole::Noise, AgentKind::Noise);
        tx.hops = {PayloadHop{pool, d, amount, TokenAmount(0)}};
        tx.sender = tx.recipient = trader;
        tx.gas_price = gas;
        std::uint64_t id = tx.id;
        schedule(now_ + rng_.exponential(cfg_.noise_arrival_rate), Phase::Arrival, Kind::NoiseArrival, pool);
        on_tx_arrival(id);
    }

    void on_source_block(std::uint64_t height) {
        trace_.source_blocks = height;
        std::vector<std::uint64_t> included;
        included.swap(source_pending_);
        for (std::uint64_t vid : included) {
            VictimInfo& v = trace_.victims[vid];
            v.source.block_number = height;
            v.source.timestamp = now_;
            auto& inc = log_event(TraceKind::SourceInclude, cfg_.source.chain_id);
            inc.role = TxRole::Ts;
            inc.tx = inc.victim = vid;
            inc.block = height;
            inc.amount_in = v.intent.amount_in;
            commit(v, height);
        }
        schedule(now_ + cfg_.source.block_interval, Phase::SourceBlock, Kind::SourceBlock, height + 1);
    }

    void commit(VictimInfo& v, std::uint64_t height) {
        v.message = ccmp_commit(v.id, height, now_, cfg_.destination.chain_id, v.intent, pools_);
        v.committed = true;
        v.commit_event = trace_.events.size();
        auto& c = log_event(TraceKind::Commit, cfg_.source.chain_id);
        c.role = TxRole::Ts;
        c.tx = c.victim = v.id;
        c.block = height;
        c.pool = v.message->payload.hops.front().pool;
        c.direction = v.message->payload.hops.front().direction;
        c.amount_in = v.message->payload.hops.front().amount_in;
        c.amount_out = v.message->payload.hops.front().min_return;

        if (cfg_.attacker.enabled) attacker_frontrun(v);

        try {
            ConsensusResult cons = ccmp_consensus(*v.message, relayers_, cfg_.relay.consensus_threshold, cfg_.seed,
                                                  cfg_.destination.chain_id, pools_.size());
            double latency = std::max(0.0, cfg_.relay.delay.sample(rng_));
            DestinationCall call = ccmp_execute(cons, *v.message, latency);
            v.leader = cons.leader;
            v.latency = latency;
            auto& e = log_event(TraceKind::Consensus, cfg_.destination.chain_id);
            e.tx = e.victim = v.id;
            e.block = cons.leader;
            e.amount_in = TokenAmount(cons.approvals);

            DstTx& tv = new_tx(TxRole::Tv, AgentKind::Victim);
            tv.victim = v.id;
            tv.hops = call.hops;
            tv.sender = agent_address(AgentKind::Victim, 1'000'000'000ull + call.leader); // the leader's executor
            tv.recipient = call.recipient;
            tv.gas_price = v.tv_gas;
            tv.submit_time = call.submit_time;
            v.tv = tv.id;
            schedule(call.submit_time, Phase::Arrival, Kind::TxArrival, tv.id);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::NoQuorum) throw;
            v.fate = VictimFate::NoQuorum;
            victim_resolved();
            auto& e = log_event(TraceKind::NoQuorum, cfg_.destination.chain_id);
            e.tx = e.victim = v.id;
        }
    }

    TokenAmount gas_cost(const TokenAmount& victim_in, std::uint64_t bps) const {
        return to_amount(to_big(victim_in) * bps / 10000);
    }

    void attacker_frontrun(VictimInfo& v) {
        const PayloadHop& hop = v.message->payload.hops.front();
        const Pool& pool = pools_[hop.pool];
        if (hop.min_return == 0 || hop.amount_in == 0) return;
        TokenAmount quote = quote_output(pool, hop.direction, hop.amount_in);
        if (quote <= hop.min_return) return;
        TokenAmount target = buffer_target(quote, hop.min_return, cfg_.attacker.theta);
        TokenAmount front = max_frontrun_for_min_out(pool, hop.direction, hop.amount_in, target);
        if (cfg_.attacker.capital_limit && front > *cfg_.attacker.capital_limit) front = *cfg_.attacker.capital_limit;
        if (front == 0) return;
        SandwichPlan plan = replay_sandwich(pool, hop.direction, front, hop.amount_in, hop.min_return,
                                            gas_cost(hop.amount_in, cfg_.attacker.gas_cost_bps));
        if (plan.profit <= 0) return;

        DstTx& tx = new_tx(TxRole::TA1, AgentKind::Attacker);
        TokenAmount min_out(0);
        if (cfg_.attacker.slippage) min_out = min_out_from_tolerance(plan.frontrun_out, *cfg_.attacker.slippage);
        tx.victim = v.id;
        tx.hops = {PayloadHop{hop.pool, hop.direction, front, min_out}};
        tx.sender = tx.recipient = agent_address(AgentKind::Attacker, 0);
        tx.is_private = cfg_.attacker.private_submission;
        tx.gas_price = tx.is_private ? 0 : cfg_.attacker.gas_price;
        v.ta1 = tx.id;
        schedule(now_, Phase::Arrival, Kind::TxArrival, tx.id);
    }

    void attacker_backrun(VictimInfo& v, std::uint64_t gas, bool is_private) {
        if (v.ta1 == kNone || v.ta2 != kNone) return;
        const DstTx& front = trace_.txs[v.ta1];
        if (front.status == TxStatus::Reverted || front.status == TxStatus::Dropped) return;
        PayloadHop hop = front.hops.front();
        hop.direction = opposite(hop.direction);
        hop.amount_in = TokenAmount(0);
        hop.min_return = TokenAmount(0);
        const std::uint64_t front_id = front.id;
        DstTx& tx = new_tx(TxRole::TA2, AgentKind::Attacker);
        tx.victim = v.id;
        tx.link = front_id;
        tx.hops = {hop};
        tx.sender = tx.recipient = agent_address(AgentKind::Attacker, 0);
        tx.is_private = is_private;
        tx.gas_price = is_private ? 0 : gas;
        v.ta2 = tx.id;
        schedule(now_, Phase::Arrival, Kind::TxArrival, tx.id);
    }

    void on_tx_arrival(std::uint64_t id) {
        DstTx& tx = trace_.txs[id];
        tx.submit_time = now_;
        auto& e = log_event(TraceKind::Submit, cfg_.destination.chain_id);
        e.role = tx.role;
        e.tx = id;
        e.victim = tx.victim;
        e.pool = tx.hops.front().pool;
        e.direction = tx.hops.front().direction;
        e.amount_in = tx.hops.front().amount_in;
        e.gas_price = tx.gas_price;
        if (tx.is_private) {
            private_queue_.push_back(id);
            return;
        }
        mempool_.push_back(id);
        if (tx.role == TxRole::Tv && cfg_.attacker.enabled && cfg_.attacker.backrun_trigger == BackrunTrigger::Mempool) {
            std::uint64_t gas = tx.gas_price > cfg_.attacker.backrun_gas_discount ? tx.gas_price - cfg_.attacker.backrun_gas_discount : 0;
            attacker_backrun(trace_.victims[tx.victim], gas, false);
        }
        if (cfg_.bot.enabled) bot_react(id);
    }

    void bot_react(std::uint64_t id) {
        const DstTx& target = trace_.txs[id];
        if (target.agent == AgentKind::Bot) return;
        const PayloadHop hop = target.hops.front();
        if (hop.min_return == 0 || hop.amount_in == 0) return;
        const Pool& pool = pools_[hop.pool];
        TokenAmount quote = quote_output(pool, hop.direction, hop.amount_in);
        if (quote < hop.min_return) return;
        SandwichPlan plan = plan_against_target(pool, hop.direction, hop.amount_in, hop.min_return, hop.min_return,
                                                gas_cost(hop.amount_in, cfg_.bot.gas_cost_bps));
        if (plan.no_room || plan.profit <= 0) return;

        const std::uint64_t target_gas = target.gas_price;
        const std::uint64_t victim = target.victim;
        const Address bot = agent_address(AgentKind::Bot, 0);

        DstTx& front = new_tx(TxRole::TB1, AgentKind::Bot);
        front.victim = victim;
        front.target = id;
        front.hops = {PayloadHop{hop.pool, hop.direction, plan.frontrun_in, TokenAmount(0)}};
        front.sender = front.recipient = bot;
        front.gas_price = target_gas + cfg_.bot.gas_premium;
        std::uint64_t front_id = front.id;

        DstTx& back = new_tx(TxRole::TB2, AgentKind::Bot);
        back.victim = victim;
        back.target = id;
        back.link = front_id;
        back.hops = {PayloadHop{hop.pool, opposite(hop.direction), TokenAmount(0), TokenAmount(0)}};
        back.sender = back.recipient = bot;
        back.gas_price = target_gas > cfg_.bot.backrun_gas_discount ? target_gas - cfg_.bot.backrun_gas_discount : 0;
        std::uint64_t back_id = back.id;

        schedule(now_, Phase::Arrival, Kind::TxArrival, front_id);
        schedule(now_, Phase::Arrival, Kind::TxArrival, back_id);
    }

    void on_destination_block(std::uint64_t height) {
        trace_.destination_blocks = height;
        std::vector<std::uint64_t> order;
        order.swap(private_queue_);
        std::vector<std::uint64_t> pub;
        pub.swap(mempool_);
        std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
            return trace_.txs[a].submit_time < trace_.txs[b].submit_time;
        });
        std::sort(pub.begin(), pub.end(), [&](std::uint64_t a, std::uint64_t b) {
            const DstTx& x = trace_.txs[a];
            const DstTx& y = trace_.txs[b];
            if (x.gas_price != y.gas_price) return x.gas_price > y.gas_price;
            if (x.submit_time != y.submit_time) return x.submit_time < y.submit_time;
            return a < b;
        });
        order.insert(order.end(), pub.begin(), pub.end());

        std::uint64_t log_index = 0;
        std::vector<std::uint64_t> included_victims;
        for (std::uint64_t id : order) {
            execute(id, height, log_index);
            const DstTx& tx = trace_.txs[id];
            if (tx.role == TxRole::Tv && tx.status != TxStatus::Dropped) included_victims.push_back(tx.victim);
        }
        for (std::uint64_t vid : included_victims) {
            if (cfg_.attacker.enabled && cfg_.attacker.backrun_trigger == BackrunTrigger::Inclusion)
                attacker_backrun(trace_.victims[vid], cfg_.attacker.gas_price, cfg_.attacker.private_submission);
        }
        schedule(now_ + cfg_.destination.block_interval, Phase::DestinationBlock, Kind::DestinationBlock, height + 1);
    }

    // With a victim budget the run ends two destination blocks after the last victim resolves,
    // which leaves room for the final back-runs.
    void victim_resolved() {
        ++resolved_;
        if (cfg_.victim_count > 0 && resolved_ >= cfg_.victim_count)
            stop_time_ = now_ + 2 * cfg_.destination.block_interval;
    }

    void finish(DstTx& tx, TxStatus status, std::uint64_t height) {
        tx.status = status;
        tx.block = height;
        tx.exec_time = now_;
        tx.exec_seq = next_exec_seq_++;
    }

    void execute(std::uint64_t id, std::uint64_t height, std::uint64_t& log_index) {
        DstTx& tx = trace_.txs[id];
        if (tx.link != kNone) {
            const DstTx& front = trace_.txs[tx.link];
            if (front.status != TxStatus::Executed || front.amounts_out.empty() || front.amounts_out.front() == 0) {
                tx.status = TxStatus::Dropped;
                auto& e = log_event(TraceKind::Drop, cfg_.destination.chain_id);
                e.role = tx.role;
                e.tx = id;
                e.victim = tx.victim;
                return;
            }
            tx.hops.front().amount_in = front.amounts_out.front();
        }

        // Hops run on scratch copies and commit together.
        std::vector<Pool> scratch;
        std::vector<TokenAmount> ins, outs;
        TokenAmount amount = tx.hops.front().amount_in;
        bool reverted = false;
        for (std::size_t k = 0; k < tx.hops.size(); ++k) {
            const PayloadHop& hop = tx.hops[k];
            const Pool& base = [&]() -> const Pool& {
                for (std::size_t j = 0; j < k; ++j)
                    if (tx.hops[j].pool == hop.pool) return scratch[j];
                return pools_[hop.pool];
            }();
            if (amount == 0) {
                reverted = true;
                break;
            }
            SwapOutcome o = execute_swap(base, SwapRequest{hop.direction, amount, hop.min_return, tx.sender, tx.recipient});
            if (o.reverted) {
                reverted = true;
                break;
            }
            scratch.push_back(o.pool_after);
            ins.push_back(amount);
            outs.push_back(o.amount_out);
            amount = o.amount_out;
        }

        if (reverted) {
            finish(tx, TxStatus::Reverted, height);
            auto& e = log_event(TraceKind::Revert, cfg_.destination.chain_id);
            e.role = tx.role;
            e.tx = id;
            e.victim = tx.victim;
            e.pool = tx.hops.front().pool;
            e.direction = tx.hops.front().direction;
            e.amount_in = tx.hops.front().amount_in;
            e.gas_price = tx.gas_price;
            e.block = height;
            if (tx.role == TxRole::Tv) {
                trace_.victims[tx.victim].fate = VictimFate::Reverted;
                victim_resolved();
            }
            return;
        }

        finish(tx, TxStatus::Executed, height);
        tx.amounts_in = ins;
        tx.amounts_out = outs;
        for (std::size_t k = 0; k < tx.hops.size(); ++k) {
            const PayloadHop& hop = tx.hops[k];
            Pool& pool = pools_[hop.pool];
            const std::string token_in = pool.token_in(hop.direction);
            const std::string token_out = pool.token_out(hop.direction);
            pool.reserve_x = scratch[k].reserve_x;
            pool.reserve_y = scratch[k].reserve_y;
            credit(tx.agent, token_in, -to_big(ins[k]));
            credit(tx.agent, token_out, to_big(outs[k]));
            auto& e = log_event(TraceKind::Execute, cfg_.destination.chain_id);
            e.role = tx.role;
            e.tx = id;
            e.victim = tx.victim;
            e.pool = hop.pool;
            e.direction = hop.direction;
            e.amount_in = ins[k];
            e.amount_out = outs[k];
            e.gas_price = tx.gas_price;
            e.block = height;
            e.log_index = log_index++;
        }
        if (tx.role == TxRole::Tv) {
            trace_.victims[tx.victim].fate = VictimFate::Executed;
            victim_resolved();
        }
    }

    SimConfig cfg_;
    Rng rng_;
    std::vector<Pool> pools_;
    std::vector<Relayer> relayers_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_exec_seq_ = 0;
    double now_ = 0.0;
    double stop_time_ = std::numeric_limits<double>::infinity();
    std::size_t resolved_ = 0;
    std::vector<std::uint64_t> source_pending_;
    std::vector<std::uint64_t> mempool_;
    std::vector<std::uint64_t> private_queue_;
    SimTrace trace_;
};

inline SimTrace simulate(const SimConfig& cfg) { return Simulator(cfg).run(); }

} // namespace xsw::sim
