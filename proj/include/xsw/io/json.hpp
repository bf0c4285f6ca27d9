#pragma once

// JSON shapes for every record the tools exchange. Amounts are decimal strings,
// ratios are "num/den" strings, byte strings are 0x-prefixed hex. Readers reject
// unknown keys so typos surface as errors naming the field.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xsw/amm.hpp"
#include "xsw/attack_model.hpp"
#include "xsw/core/error.hpp"
#include "xsw/detector.hpp"
#include "xsw/records.hpp"
#include "xsw/report.hpp"
#include "xsw/sim/config.hpp"
#include "xsw/sim/corpus.hpp"
#include "xsw/sim/metrics.hpp"
#include "xsw/sim/simulator.hpp"

namespace xsw::io {

using Json = nlohmann::ordered_json;
using xsw::to_string;

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::Parse, field + ": " + why);
}

inline std::string join(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

inline void check_keys(const Json& j, const std::string& ctx, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) field_error(ctx.empty() ? "<root>" : ctx, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) field_error(join(ctx, it.key()), "unknown key");
    }
}

inline const Json& need(const Json& j, const std::string& ctx, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) field_error(join(ctx, key), "missing");
    return *it;
}

inline const Json* maybe(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

inline std::uint64_t as_u64(const Json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_string()) {
        TokenAmount a = parse_amount(v.get<std::string>());
        if (a > std::numeric_limits<std::uint64_t>::max()) field_error(field, "exceeds 64 bits");
        return a.convert_to<std::uint64_t>();
    }
    field_error(field, "expected a non-negative integer");
}

inline double as_double(const Json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    return v.get<double>();
}

inline bool as_bool(const Json& v, const std::string& field) {
    if (!v.is_boolean()) field_error(field, "expected true or false");
    return v.get<bool>();
}

inline std::string as_string(const Json& v, const std::string& field) {
    if (!v.is_string()) field_error(field, "expected a string");
    return v.get<std::string>();
}

inline TokenAmount as_amount(const Json& v, const std::string& field) {
    try {
        if (v.is_string()) return parse_amount(v.get<std::string>());
        if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))
            return TokenAmount(v.get<std::uint64_t>());
    } catch (const Error& e) {
        field_error(field, e.message());
    }
    field_error(field, "expected a decimal string amount");
}

inline BigInt as_signed(const Json& v, const std::string& field) {
    if (!v.is_string()) field_error(field, "expected a decimal string");
    std::string s = v.get<std::string>();
    bool neg = !s.empty() && s.front() == '-';
    try {
        BigInt mag = to_big(parse_amount(neg ? s.substr(1) : s));
        return neg ? BigInt(-mag) : mag;
    } catch (const Error& e) {
        field_error(field, e.message());
    }
}

inline Rational as_rational(const Json& v, const std::string& field) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(BigInt(v.get<std::int64_t>()));
        if (v.is_number()) return parse_rational(v.dump());
    } catch (const Error& e) {
        field_error(field, e.message());
    }
    field_error(field, "expected a ratio");
}

inline Fraction as_fraction(const Json& v, const std::string& field) {
    Rational r = as_rational(v, field);
    BigInt n = mp::numerator(r), d = mp::denominator(r);
    if (n < 0 || n > std::numeric_limits<std::uint64_t>::max() || d > std::numeric_limits<std::uint64_t>::max())
        field_error(field, "must be a non-negative ratio of 64-bit integers");
    return Fraction{n.convert_to<std::uint64_t>(), d.convert_to<std::uint64_t>()};
}

template <class T>
T as_ratio_type(const Json& v, const std::string& field) {
    Fraction f = as_fraction(v, field);
    try {
        return T(f.num, f.den);
    } catch (const Error& e) {
        field_error(field, e.message());
    }
}

template <class Bytes>
Bytes as_bytes(const Json& v, const std::string& field) {
    try {
        return Bytes::from_hex(as_string(v, field));
    } catch (const Error& e) {
        field_error(field, e.message());
    }
}

/// Lowest terms, which is also the form the parser produces.
inline std::string fraction_string(const Fraction& f) {
    std::uint64_t g = std::gcd(f.num, f.den);
    if (g == 0) g = 1;
    return std::to_string(f.num / g) + "/" + std::to_string(f.den / g);
}

} // namespace detail

inline std::string to_string(Direction d) { return d == Direction::XforY ? "x_for_y" : "y_for_x"; }

inline Direction direction_from_string(const std::string& s, const std::string& field = "direction") {
    if (s == "x_for_y") return Direction::XforY;
    if (s == "y_for_x") return Direction::YforX;
    detail::field_error(field, "expected x_for_y or y_for_x, got '" + s + "'");
}

// ---- Pool ----------------------------------------------------------------

inline Json to_json(const Pool& p) {
    return Json{{"token_x", p.token_x},
                {"token_y", p.token_y},
                {"reserve_x", to_string(p.reserve_x)},
                {"reserve_y", to_string(p.reserve_y)},
                {"fee", detail::fraction_string(p.fee)},
                {"address", p.address.hex()},
                {"protocol", std::string(to_string(p.protocol))}};
}

inline Pool pool_from_json(const Json& j, const std::string& ctx = "pool") {
    using namespace detail;
    check_keys(j, ctx, {"token_x", "token_y", "reserve_x", "reserve_y", "fee", "fee_bps", "address", "protocol"});
    Pool p;
    p.token_x = as_string(need(j, ctx, "token_x"), join(ctx, "token_x"));
    p.token_y = as_string(need(j, ctx, "token_y"), join(ctx, "token_y"));
    p.reserve_x = as_amount(need(j, ctx, "reserve_x"), join(ctx, "reserve_x"));
    p.reserve_y = as_amount(need(j, ctx, "reserve_y"), join(ctx, "reserve_y"));
    if (auto* v = maybe(j, "fee")) p.fee = as_ratio_type<FeeRate>(*v, join(ctx, "fee"));
    else if (auto* b = maybe(j, "fee_bps")) {
        std::uint64_t bps = as_u64(*b, join(ctx, "fee_bps"));
        if (bps >= 10000) field_error(join(ctx, "fee_bps"), "must be below 10000");
        p.fee = FeeRate::bps(bps);
    } else
        p.fee = FeeRate::bps(30);
    if (auto* v = maybe(j, "address")) p.address = as_bytes<Address>(*v, join(ctx, "address"));
    if (auto* v = maybe(j, "protocol")) {
        try {
            p.protocol = protocol_from_string(as_string(*v, join(ctx, "protocol")));
        } catch (const Error& e) {
            field_error(join(ctx, "protocol"), e.message());
        }
    }
    return p;
}

// ---- SwapLog -------------------------------------------------------------

inline Json to_json(const SwapLog& l) {
    return Json{{"tx_hash", l.tx_hash.hex()},
                {"block_number", l.block_number},
                {"log_index", l.log_index},
                {"pool", l.pool.hex()},
                {"chain_id", l.chain_id},
                {"direction", to_string(l.direction)},
                {"token_in", l.token_in},
                {"token_out", l.token_out},
                {"amount_in", to_string(l.amount_in)},
                {"amount_out", to_string(l.amount_out)},
                {"sender", l.sender.hex()},
                {"recipient", l.recipient.hex()},
                {"gas_price", std::to_string(l.gas_price)},
                {"timestamp", l.timestamp}};
}

inline SwapLog swap_log_from_json(const Json& j, const std::string& ctx = "log") {
    using namespace detail;
    check_keys(j, ctx, {"tx_hash", "block_number", "log_index", "pool", "chain_id", "direction", "token_in", "token_out",
                        "amount_in", "amount_out", "sender", "recipient", "gas_price", "timestamp"});
    SwapLog l;
    l.tx_hash = as_bytes<Hash32>(need(j, ctx, "tx_hash"), join(ctx, "tx_hash"));
    l.block_number = as_u64(need(j, ctx, "block_number"), join(ctx, "block_number"));
    l.log_index = as_u64(need(j, ctx, "log_index"), join(ctx, "log_index"));
    l.pool = as_bytes<Address>(need(j, ctx, "pool"), join(ctx, "pool"));
    l.chain_id = as_u64(need(j, ctx, "chain_id"), join(ctx, "chain_id"));
    l.direction = direction_from_string(as_string(need(j, ctx, "direction"), join(ctx, "direction")), join(ctx, "direction"));
    l.token_in = as_string(need(j, ctx, "token_in"), join(ctx, "token_in"));
    l.token_out = as_string(need(j, ctx, "token_out"), join(ctx, "token_out"));
    l.amount_in = as_amount(need(j, ctx, "amount_in"), join(ctx, "amount_in"));
    l.amount_out = as_amount(need(j, ctx, "amount_out"), join(ctx, "amount_out"));
    l.sender = as_bytes<Address>(need(j, ctx, "sender"), join(ctx, "sender"));
    l.recipient = as_bytes<Address>(need(j, ctx, "recipient"), join(ctx, "recipient"));
    l.gas_price = as_u64(need(j, ctx, "gas_price"), join(ctx, "gas_price"));
    l.timestamp = as_double(need(j, ctx, "timestamp"), join(ctx, "timestamp"));
    return l;
}

// ---- CrossChainTx --------------------------------------------------------

inline Json to_json(const TxRef& t) {
    return Json{{"hash", t.hash.hex()},
                {"chain_id", t.chain_id},
                {"block_number", t.block_number},
                {"timestamp", t.timestamp},
                {"gas_price", std::to_string(t.gas_price)}};
}

inline TxRef tx_ref_from_json(const Json& j, const std::string& ctx) {
    using namespace detail;
    check_keys(j, ctx, {"hash", "chain_id", "block_number", "timestamp", "gas_price"});
    TxRef t;
    t.hash = as_bytes<Hash32>(need(j, ctx, "hash"), join(ctx, "hash"));
    t.chain_id = as_u64(need(j, ctx, "chain_id"), join(ctx, "chain_id"));
    t.block_number = as_u64(need(j, ctx, "block_number"), join(ctx, "block_number"));
    t.timestamp = as_double(need(j, ctx, "timestamp"), join(ctx, "timestamp"));
    if (auto* v = maybe(j, "gas_price")) t.gas_price = as_u64(*v, join(ctx, "gas_price"));
    return t;
}

inline Json to_json(const VictimHop& h) {
    return Json{{"pool", h.pool.hex()},
                {"direction", to_string(h.direction)},
                {"token_in", h.token_in},
                {"token_out", h.token_out},
                {"amount_in", to_string(h.amount_in)},
                {"amount_out", to_string(h.amount_out)},
                {"min_return", to_string(h.min_return)},
                {"stable_pair", h.stable_pair}};
}

inline VictimHop victim_hop_from_json(const Json& j, const std::string& ctx) {
    using namespace detail;
    check_keys(j, ctx, {"pool", "direction", "token_in", "token_out", "amount_in", "amount_out", "min_return", "stable_pair"});
    VictimHop h;
    h.pool = as_bytes<Address>(need(j, ctx, "pool"), join(ctx, "pool"));
    h.direction = direction_from_string(as_string(need(j, ctx, "direction"), join(ctx, "direction")), join(ctx, "direction"));
    h.token_in = as_string(need(j, ctx, "token_in"), join(ctx, "token_in"));
    h.token_out = as_string(need(j, ctx, "token_out"), join(ctx, "token_out"));
    h.amount_in = as_amount(need(j, ctx, "amount_in"), join(ctx, "amount_in"));
    if (auto* v = maybe(j, "amount_out")) h.amount_out = as_amount(*v, join(ctx, "amount_out"));
    h.min_return = as_amount(need(j, ctx, "min_return"), join(ctx, "min_return"));
    if (auto* v = maybe(j, "stable_pair")) h.stable_pair = as_bool(*v, join(ctx, "stable_pair"));
    return h;
}

inline Json to_json(const CrossChainTx& r) {
    Json hops = Json::array();
    for (const auto& h : r.hops) hops.push_back(to_json(h));
    return Json{{"id", r.id},
                {"source", to_json(r.source)},
                {"destination", to_json(r.destination)},
                {"recipient", r.recipient.hex()},
                {"hops", std::move(hops)},
                {"reverted", r.reverted}};
}

inline CrossChainTx cross_chain_tx_from_json(const Json& j, const std::string& ctx = "record") {
    using namespace detail;
    check_keys(j, ctx, {"id", "source", "destination", "recipient", "hops", "reverted"});
    CrossChainTx r;
    r.id = as_u64(need(j, ctx, "id"), join(ctx, "id"));
    r.source = tx_ref_from_json(need(j, ctx, "source"), join(ctx, "source"));
    r.destination = tx_ref_from_json(need(j, ctx, "destination"), join(ctx, "destination"));
    if (auto* v = maybe(j, "recipient")) r.recipient = as_bytes<Address>(*v, join(ctx, "recipient"));
    const Json& hops = need(j, ctx, "hops");
    if (!hops.is_array() || hops.empty()) field_error(join(ctx, "hops"), "expected a non-empty array");
    for (std::size_t i = 0; i < hops.size(); ++i)
        r.hops.push_back(victim_hop_from_json(hops[i], join(ctx, "hops[" + std::to_string(i) + "]")));
    if (auto* v = maybe(j, "reverted")) r.reverted = as_bool(*v, join(ctx, "reverted"));
    if (r.source.timestamp > r.destination.timestamp) field_error(join(ctx, "destination.timestamp"), "precedes the source timestamp");
    return r;
}

// ---- SandwichPair --------------------------------------------------------

inline Json to_json(const SandwichPair& p) {
    return Json{{"record_id", p.record_id},
                {"hop_index", p.hop_index},
                {"pool", p.pool.hex()},
                {"source_chain", p.source_chain},
                {"destination_chain", p.destination_chain},
                {"source_block", p.source_block},
                {"classification", std::string(to_string(p.classification))},
                {"profit_token", p.profit_token},
                {"profit", to_string(p.profit)},
                {"profit_rate", rational_to_string(p.profit_rate)},
                {"profit_usd", p.profit_usd ? Json(rational_to_string(*p.profit_usd)) : Json(nullptr)},
                {"front", to_json(p.front)},
                {"victim", to_json(p.victim)},
                {"back", to_json(p.back)}};
}

inline SandwichPair sandwich_pair_from_json(const Json& j, const std::string& ctx = "pair") {
    using namespace detail;
    check_keys(j, ctx, {"record_id", "hop_index", "pool", "source_chain", "destination_chain", "source_block", "classification",
                        "profit_token", "profit", "profit_rate", "profit_usd", "front", "victim", "back"});
    SandwichPair p;
    p.record_id = as_u64(need(j, ctx, "record_id"), join(ctx, "record_id"));
    p.hop_index = as_u64(need(j, ctx, "hop_index"), join(ctx, "hop_index"));
    p.pool = as_bytes<Address>(need(j, ctx, "pool"), join(ctx, "pool"));
    p.source_chain = as_u64(need(j, ctx, "source_chain"), join(ctx, "source_chain"));
    p.destination_chain = as_u64(need(j, ctx, "destination_chain"), join(ctx, "destination_chain"));
    p.source_block = as_u64(need(j, ctx, "source_block"), join(ctx, "source_block"));
    std::string cls = as_string(need(j, ctx, "classification"), join(ctx, "classification"));
    if (cls == "cross_chain") p.classification = PairClass::CrossChain;
    else if (cls == "single_chain") p.classification = PairClass::SingleChain;
    else field_error(join(ctx, "classification"), "expected cross_chain or single_chain");
    p.profit_token = as_string(need(j, ctx, "profit_token"), join(ctx, "profit_token"));
    p.profit = as_signed(need(j, ctx, "profit"), join(ctx, "profit"));
    p.profit_rate = as_rational(need(j, ctx, "profit_rate"), join(ctx, "profit_rate"));
    if (auto* v = maybe(j, "profit_usd")) p.profit_usd = as_rational(*v, join(ctx, "profit_usd"));
    p.front = swap_log_from_json(need(j, ctx, "front"), join(ctx, "front"));
    p.victim = swap_log_from_json(need(j, ctx, "victim"), join(ctx, "victim"));
    p.back = swap_log_from_json(need(j, ctx, "back"), join(ctx, "back"));
    return p;
}

// ---- PoolTimeline --------------------------------------------------------

inline Json to_json(const PoolTimeline& t) {
    Json noise = Json::array();
    for (const auto& n : t.noisy_swaps) noise.push_back(Json{{"direction", to_string(n.direction)}, {"amount_in", to_string(n.amount_in)}});
    return Json{{"victim_id", t.victim_id},
                {"pool", to_json(t.pool)},
                {"noisy_swaps", std::move(noise)},
                {"victim",
                 Json{{"direction", to_string(t.victim.direction)},
                      {"amount_in", to_string(t.victim.amount_in)},
                      {"min_out", to_string(t.victim.min_out)},
                      {"sender", t.victim.sender.hex()},
                      {"recipient", t.victim.recipient.hex()}}},
                {"slippage", detail::fraction_string(t.slippage)}};
}

inline PoolTimeline pool_timeline_from_json(const Json& j, const std::string& ctx = "timeline") {
    using namespace detail;
    check_keys(j, ctx, {"victim_id", "pool", "noisy_swaps", "victim", "slippage"});
    PoolTimeline t;
    if (auto* v = maybe(j, "victim_id")) t.victim_id = as_u64(*v, join(ctx, "victim_id"));
    t.pool = pool_from_json(need(j, ctx, "pool"), join(ctx, "pool"));
    t.pool.validate();
    const Json& noise = need(j, ctx, "noisy_swaps");
    if (!noise.is_array()) field_error(join(ctx, "noisy_swaps"), "expected an array");
    for (std::size_t i = 0; i < noise.size(); ++i) {
        std::string c = join(ctx, "noisy_swaps[" + std::to_string(i) + "]");
        check_keys(noise[i], c, {"direction", "amount_in"});
        t.noisy_swaps.push_back(NoisySwap{direction_from_string(as_string(need(noise[i], c, "direction"), join(c, "direction")), join(c, "direction")),
                                          as_amount(need(noise[i], c, "amount_in"), join(c, "amount_in"))});
    }
    std::string vc = join(ctx, "victim");
    const Json& v = need(j, ctx, "victim");
    check_keys(v, vc, {"direction", "amount_in", "min_out", "sender", "recipient"});
    t.victim.direction = direction_from_string(as_string(need(v, vc, "direction"), join(vc, "direction")), join(vc, "direction"));
    t.victim.amount_in = as_amount(need(v, vc, "amount_in"), join(vc, "amount_in"));
    t.victim.min_out = as_amount(need(v, vc, "min_out"), join(vc, "min_out"));
    if (auto* s = maybe(v, "sender")) t.victim.sender = as_bytes<Address>(*s, join(vc, "sender"));
    if (auto* s = maybe(v, "recipient")) t.victim.recipient = as_bytes<Address>(*s, join(vc, "recipient"));
    t.slippage = as_ratio_type<SlippageTolerance>(need(j, ctx, "slippage"), join(ctx, "slippage"));
    return t;
}

// ---- Simulator config ----------------------------------------------------

inline Json to_json(const sim::Distribution& d) {
    using F = sim::Distribution::Family;
    Json j{{"family", std::string(sim::to_string(d.family))}};
    switch (d.family) {
    case F::Fixed: j["value"] = d.a; break;
    case F::Uniform:
    case F::LogUniform: j["lo"] = d.a; j["hi"] = d.b; break;
    case F::Exponential: j["mean"] = d.a; break;
    case F::LogNormal: j["mu"] = d.a; j["sigma"] = d.b; break;
    }
    return j;
}

inline sim::Distribution distribution_from_json(const Json& j, const std::string& ctx) {
    using namespace detail;
    if (j.is_number()) return sim::Distribution::fixed(j.get<double>());
    check_keys(j, ctx, {"family", "value", "lo", "hi", "mean", "mu", "sigma", "p95"});
    std::string fam = as_string(need(j, ctx, "family"), join(ctx, "family"));
    auto num = [&](const char* k) { return as_double(need(j, ctx, k), join(ctx, k)); };
    if (fam == "fixed") return sim::Distribution::fixed(num("value"));
    if (fam == "uniform") return sim::Distribution::uniform(num("lo"), num("hi"));
    if (fam == "log_uniform") return sim::Distribution::log_uniform(num("lo"), num("hi"));
    if (fam == "exponential") return sim::Distribution::exponential(num("mean"));
    if (fam == "log_normal") {
        if (maybe(j, "p95")) return sim::Distribution::log_normal_p95(num("p95"), num("sigma"));
        return sim::Distribution::log_normal(num("mu"), num("sigma"));
    }
    field_error(join(ctx, "family"), "unknown distribution family '" + fam + "'");
}

inline Json to_json(const sim::SimConfig& c) {
    Json pools = Json::array();
    for (const auto& p : c.pools) pools.push_back(to_json(p));
    Json paths = Json::array();
    for (const auto& p : c.paths) {
        Json dirs = Json::array();
        for (auto d : p.directions) dirs.push_back(to_string(d));
        paths.push_back(Json{{"pools", p.pools}, {"directions", std::move(dirs)}});
    }
    auto chain = [](const sim::ChainConfig& ch) {
        return Json{{"chain_id", ch.chain_id}, {"block_interval", ch.block_interval}, {"block_offset", ch.block_offset}};
    };
    const auto& a = c.attacker;
    return Json{
        {"seed", c.seed},
        {"horizon", std::isfinite(c.horizon) ? Json(c.horizon) : Json("inf")},
        {"victim_count", c.victim_count},
        {"source", chain(c.source)},
        {"destination", chain(c.destination)},
        {"relay",
         Json{{"relayer_count", c.relay.relayer_count},
              {"dishonest_relayers", c.relay.dishonest_relayers},
              {"consensus_threshold", rational_to_string(c.relay.consensus_threshold)},
              {"delay", to_json(c.relay.delay)}}},
        {"pools", std::move(pools)},
        {"paths", std::move(paths)},
        {"pool_selection", c.pool_selection == sim::PoolSelection::RoundRobin ? "round_robin" : "uniform"},
        {"victims",
         Json{{"arrival_rate", c.victim_arrival_rate},
              {"size", to_json(c.victim_size)},
              {"slippage", to_json(c.victim_slippage)},
              {"gas_gwei", to_json(c.victim_gas_gwei)},
              {"x_for_y_share", c.victim_x_for_y_share}}},
        {"noise",
         Json{{"arrival_rate", c.noise_arrival_rate},
              {"size", to_json(c.noise_size)},
              {"gas_gwei", to_json(c.noise_gas_gwei)},
              {"x_for_y_share", c.noise_x_for_y_share},
              {"trader_count", c.noise_trader_count}}},
        {"attacker",
         Json{{"enabled", a.enabled},
              {"theta", detail::fraction_string(a.theta)},
              {"capital_limit", a.capital_limit ? Json(to_string(*a.capital_limit)) : Json(nullptr)},
              {"private_submission", a.private_submission},
              {"gas_price", std::to_string(a.gas_price)},
              {"backrun_gas_discount", std::to_string(a.backrun_gas_discount)},
              {"backrun_trigger", a.backrun_trigger == sim::BackrunTrigger::Mempool ? "mempool" : "inclusion"},
              {"gas_cost_bps", a.gas_cost_bps},
              {"slippage", a.slippage ? Json(detail::fraction_string(*a.slippage)) : Json(nullptr)}}},
        {"bot",
         Json{{"enabled", c.bot.enabled},
              {"gas_premium", std::to_string(c.bot.gas_premium)},
              {"backrun_gas_discount", std::to_string(c.bot.backrun_gas_discount)},
              {"gas_cost_bps", c.bot.gas_cost_bps}}},
    };
}

/// Missing keys keep their defaults; `pools` is required. The result is validated.
inline sim::SimConfig sim_config_from_json(const Json& j) {
    using namespace detail;
    sim::SimConfig c;
    check_keys(j, "", {"seed", "horizon", "victim_count", "source", "destination", "relay", "pools", "paths", "pool_selection",
                       "victims", "noise", "attacker", "bot"});
    if (auto* v = maybe(j, "seed")) c.seed = as_u64(*v, "seed");
    if (auto* v = maybe(j, "horizon")) c.horizon = v->is_string() && v->get<std::string>() == "inf"
                                                       ? std::numeric_limits<double>::infinity()
                                                       : as_double(*v, "horizon");
    if (auto* v = maybe(j, "victim_count")) c.victim_count = as_u64(*v, "victim_count");
    auto chain = [&](const char* key, sim::ChainConfig& ch) {
        const Json* v = maybe(j, key);
        if (!v) return;
        check_keys(*v, key, {"chain_id", "block_interval", "block_offset"});
        if (auto* x = maybe(*v, "chain_id")) ch.chain_id = as_u64(*x, join(key, "chain_id"));
        if (auto* x = maybe(*v, "block_interval")) ch.block_interval = as_double(*x, join(key, "block_interval"));
        if (auto* x = maybe(*v, "block_offset")) ch.block_offset = as_double(*x, join(key, "block_offset"));
    };
    chain("source", c.source);
    chain("destination", c.destination);
    if (auto* r = maybe(j, "relay")) {
        check_keys(*r, "relay", {"relayer_count", "dishonest_relayers", "consensus_threshold", "delay"});
        if (auto* x = maybe(*r, "relayer_count")) c.relay.relayer_count = as_u64(*x, "relay.relayer_count");
        if (auto* x = maybe(*r, "dishonest_relayers")) c.relay.dishonest_relayers = as_u64(*x, "relay.dishonest_relayers");
        if (auto* x = maybe(*r, "consensus_threshold")) c.relay.consensus_threshold = as_rational(*x, "relay.consensus_threshold");
        if (auto* x = maybe(*r, "delay")) c.relay.delay = distribution_from_json(*x, "relay.delay");
    }
    const Json& pools = need(j, "", "pools");
    if (!pools.is_array()) field_error("pools", "expected an array");
    for (std::size_t i = 0; i < pools.size(); ++i) c.pools.push_back(pool_from_json(pools[i], "pools[" + std::to_string(i) + "]"));
    if (auto* ps = maybe(j, "paths")) {
        if (!ps->is_array()) field_error("paths", "expected an array");
        for (std::size_t i = 0; i < ps->size(); ++i) {
            std::string ctx = "paths[" + std::to_string(i) + "]";
            const Json& p = (*ps)[i];
            check_keys(p, ctx, {"pools", "directions"});
            sim::PathConfig path;
            const Json& pi = need(p, ctx, "pools");
            const Json& di = need(p, ctx, "directions");
            if (!pi.is_array() || !di.is_array()) field_error(ctx, "pools and directions must be arrays");
            for (const auto& x : pi) path.pools.push_back(as_u64(x, join(ctx, "pools")));
            for (const auto& x : di) path.directions.push_back(direction_from_string(as_string(x, join(ctx, "directions")), join(ctx, "directions")));
            c.paths.push_back(std::move(path));
        }
    }
    if (auto* v = maybe(j, "pool_selection")) {
        std::string s = as_string(*v, "pool_selection");
        if (s == "uniform") c.pool_selection = sim::PoolSelection::Uniform;
        else if (s == "round_robin") c.pool_selection = sim::PoolSelection::RoundRobin;
        else field_error("pool_selection", "expected uniform or round_robin");
    }
    if (auto* v = maybe(j, "victims")) {
        check_keys(*v, "victims", {"arrival_rate", "size", "slippage", "gas_gwei", "x_for_y_share"});
        if (auto* x = maybe(*v, "arrival_rate")) c.victim_arrival_rate = as_double(*x, "victims.arrival_rate");
        if (auto* x = maybe(*v, "size")) c.victim_size = distribution_from_json(*x, "victims.size");
        if (auto* x = maybe(*v, "slippage")) c.victim_slippage = distribution_from_json(*x, "victims.slippage");
        if (auto* x = maybe(*v, "gas_gwei")) c.victim_gas_gwei = distribution_from_json(*x, "victims.gas_gwei");
        if (auto* x = maybe(*v, "x_for_y_share")) c.victim_x_for_y_share = as_double(*x, "victims.x_for_y_share");
    }
    if (auto* v = maybe(j, "noise")) {
        check_keys(*v, "noise", {"arrival_rate", "size", "gas_gwei", "x_for_y_share", "trader_count"});
        if (auto* x = maybe(*v, "arrival_rate")) c.noise_arrival_rate = as_double(*x, "noise.arrival_rate");
        if (auto* x = maybe(*v, "size")) c.noise_size = distribution_from_json(*x, "noise.size");
        if (auto* x = maybe(*v, "gas_gwei")) c.noise_gas_gwei = distribution_from_json(*x, "noise.gas_gwei");
        if (auto* x = maybe(*v, "x_for_y_share")) c.noise_x_for_y_share = as_double(*x, "noise.x_for_y_share");
        if (auto* x = maybe(*v, "trader_count")) c.noise_trader_count = as_u64(*x, "noise.trader_count");
    }
    if (auto* v = maybe(j, "attacker")) {
        auto& a = c.attacker;
        check_keys(*v, "attacker", {"enabled", "theta", "capital_limit", "private_submission", "gas_price", "backrun_gas_discount",
                                    "backrun_trigger", "gas_cost_bps", "slippage"});
        if (auto* x = maybe(*v, "enabled")) a.enabled = as_bool(*x, "attacker.enabled");
        if (auto* x = maybe(*v, "theta")) a.theta = as_ratio_type<ExtractionFraction>(*x, "attacker.theta");
        if (auto* x = maybe(*v, "capital_limit")) a.capital_limit = as_amount(*x, "attacker.capital_limit");
        if (auto* x = maybe(*v, "private_submission")) a.private_submission = as_bool(*x, "attacker.private_submission");
        if (auto* x = maybe(*v, "gas_price")) a.gas_price = as_u64(*x, "attacker.gas_price");
        if (auto* x = maybe(*v, "backrun_gas_discount")) a.backrun_gas_discount = as_u64(*x, "attacker.backrun_gas_discount");
        if (auto* x = maybe(*v, "backrun_trigger")) {
            std::string s = as_string(*x, "attacker.backrun_trigger");
            if (s == "inclusion") a.backrun_trigger = sim::BackrunTrigger::Inclusion;
            else if (s == "mempool") a.backrun_trigger = sim::BackrunTrigger::Mempool;
            else field_error("attacker.backrun_trigger", "expected inclusion or mempool");
        }
        if (auto* x = maybe(*v, "gas_cost_bps")) a.gas_cost_bps = as_u64(*x, "attacker.gas_cost_bps");
        if (auto* x = maybe(*v, "slippage")) a.slippage = as_ratio_type<SlippageTolerance>(*x, "attacker.slippage");
    }
    if (auto* v = maybe(j, "bot")) {
        check_keys(*v, "bot", {"enabled", "gas_premium", "backrun_gas_discount", "gas_cost_bps"});
        if (auto* x = maybe(*v, "enabled")) c.bot.enabled = as_bool(*x, "bot.enabled");
        if (auto* x = maybe(*v, "gas_premium")) c.bot.gas_premium = as_u64(*x, "bot.gas_premium");
        if (auto* x = maybe(*v, "backrun_gas_discount")) c.bot.backrun_gas_discount = as_u64(*x, "bot.backrun_gas_discount");
        if (auto* x = maybe(*v, "gas_cost_bps")) c.bot.gas_cost_bps = as_u64(*x, "bot.gas_cost_bps");
    }
    try {
        c.relay.delay.validate("relay.delay");
        c.validate();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        throw Error(ErrorCode::InvalidConfig, e.message());
    }
    return c;
}

// ---- Detection config ----------------------------------------------------

inline Json to_json(const DetectionConfig& c) {
    return Json{{"num", c.num},
                {"band_low", rational_to_string(c.band_low)},
                {"band_high", rational_to_string(c.band_high)},
                {"max_interval", rational_to_string(c.max_interval)},
                {"stablecoins", c.stablecoins}};
}

inline DetectionConfig detection_config_from_json(const Json& j) {
    using namespace detail;
    check_keys(j, "", {"num", "band_low", "band_high", "max_interval", "stablecoins"});
    DetectionConfig c;
    if (auto* v = maybe(j, "num")) c.num = as_u64(*v, "num");
    if (auto* v = maybe(j, "band_low")) c.band_low = as_rational(*v, "band_low");
    if (auto* v = maybe(j, "band_high")) c.band_high = as_rational(*v, "band_high");
    if (auto* v = maybe(j, "max_interval")) c.max_interval = as_rational(*v, "max_interval");
    if (auto* v = maybe(j, "stablecoins")) {
        if (!v->is_array()) field_error("stablecoins", "expected an array of symbols");
        c.stablecoins.clear();
        for (const auto& s : *v) c.stablecoins.insert(upper_ascii(as_string(s, "stablecoins")));
    }
    c.validate();
    return c;
}

// ---- Simulator outputs -----------------------------------------------------

inline Json to_json(const sim::TraceEvent& e) {
    auto id = [](std::uint64_t v) { return v == sim::kNone ? Json(nullptr) : Json(v); };
    return Json{{"time", e.time},
                {"kind", std::string(sim::to_string(e.kind))},
                {"chain", e.chain},
                {"role", std::string(sim::to_string(e.role))},
                {"tx", id(e.tx)},
                {"victim", id(e.victim)},
                {"pool", e.pool},
                {"direction", to_string(e.direction)},
                {"amount_in", to_string(e.amount_in)},
                {"amount_out", to_string(e.amount_out)},
                {"gas_price", std::to_string(e.gas_price)},
                {"block", e.block},
                {"log_index", e.log_index}};
}

inline Json to_json(const sim::PlantedAttack& t) {
    return Json{{"victim", t.victim}, {"pool", t.pool.hex()}, {"front", t.front.hex()}, {"victim_tx", t.victim_tx.hex()}, {"back", t.back.hex()}};
}

inline sim::PlantedAttack planted_attack_from_json(const Json& j, const std::string& ctx = "truth") {
    using namespace detail;
    check_keys(j, ctx, {"victim", "pool", "front", "victim_tx", "back"});
    return sim::PlantedAttack{as_u64(need(j, ctx, "victim"), join(ctx, "victim")),
                              as_bytes<Address>(need(j, ctx, "pool"), join(ctx, "pool")),
                              as_bytes<Hash32>(need(j, ctx, "front"), join(ctx, "front")),
                              as_bytes<Hash32>(need(j, ctx, "victim_tx"), join(ctx, "victim_tx")),
                              as_bytes<Hash32>(need(j, ctx, "back"), join(ctx, "back"))};
}

inline Json to_json(const NoiseEstimate& n) {
    return Json{{"q", rational_to_string(n.q)},
                {"p", n.p ? Json(rational_to_string(*n.p)) : Json(nullptr)},
                {"timelines", n.timelines},
                {"empty", n.empty},
                {"with_noise", n.with_noise},
                {"with_noise_no_room", n.with_noise_no_room}};
}

inline Json to_json(const sim::SimMetrics& m) {
    Json scen = Json::object();
    for (std::size_t i = 0; i < kScenarioCount; ++i)
        scen[std::string(to_string(static_cast<OrderingScenario>(i)))] = m.scenarios[i];
    auto summary = [](const std::vector<Rational>& rates) {
        double sum = 0;
        for (const auto& r : rates) sum += to_double(r);
        return Json{{"count", rates.size()}, {"mean", rates.empty() ? Json(nullptr) : Json(sum / rates.size())}};
    };
    return Json{{"victims", m.victims},
                {"committed", m.committed},
                {"executed", m.executed},
                {"reverted", m.reverted},
                {"no_quorum", m.no_quorum},
                {"dropped_at_horizon", m.dropped_at_horizon},
                {"attacks_submitted", m.attacks_submitted},
                {"attacks_completed", m.attacks_completed},
                {"bot_attacks", m.bot_attacks},
                {"scenarios", std::move(scen)},
                {"contested", m.contested},
                {"contested_front_earlier_block", m.contested_front_earlier_block},
                {"contested_front_earlier_order", m.contested_front_earlier_order},
                {"noise", m.noise ? to_json(*m.noise) : Json(nullptr)},
                {"attacker_rates", summary(m.attacker_rates)},
                {"bot_rates", summary(m.bot_rates)},
                {"detected_pairs", m.detected_pairs},
                {"single_chain_pairs", m.single_chain_pairs},
                {"planted_in_scope", m.planted_in_scope},
                {"planted_recovered", m.planted_recovered}};
}

// ---- Report ----------------------------------------------------------------

inline Json to_json(const Report& r) {
    auto usd = [](const std::optional<Rational>& v) { return v ? Json(format_decimal(*v, 2)) : Json(nullptr); };
    auto split = [](const ClassSplit& c) {
        return Json{{"pairs", c.pairs}, {"profit_usd", format_decimal(c.profit_usd, 2)}, {"unpriced_pairs", c.unpriced_pairs}};
    };
    Json chains = Json::array();
    for (const auto& c : r.chain_pairs)
        chains.push_back(Json{{"source_chain", c.source},
                              {"destination_chain", c.destination},
                              {"pairs", c.pairs},
                              {"profit_usd", format_decimal(c.profit_usd, 2)},
                              {"volume_usd", usd(c.volume_usd)},
                              {"unpriced_pairs", c.unpriced_pairs}});
    Json pools = Json::array();
    for (const auto& p : r.pools) pools.push_back(Json{{"chain_id", p.chain}, {"pool", p.pool.hex()}, {"attacks", p.attacks}});
    return Json{{"total_pairs", r.total_pairs},
                {"cross_chain", split(r.cross_chain)},
                {"single_chain", split(r.single_chain)},
                {"max_profit_usd", usd(r.max_profit_usd)},
                {"total_volume_usd", usd(r.total_volume_usd)},
                {"chain_pairs", std::move(chains)},
                {"pools", std::move(pools)},
                {"front_position_all", r.front_position_all},
                {"front_position_profitable", r.front_position_profitable},
                {"back_position_all", r.back_position_all},
                {"back_position_profitable", r.back_position_profitable},
                {"gas",
                 Json{{"pairs", r.gas.pairs},
                      {"front_below_victim", r.gas.front_below_victim},
                      {"zero_gas_front", r.gas.zero_gas_front},
                      {"back_delta", r.gas.back_delta}}}};
}

// ---- Files ---------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_document(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Parse, source + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) { return parse_document(read_file(path), path); }

/// One JSON value per line. Blank lines and lines starting with '#' are skipped.
inline std::vector<Json> parse_jsonl(const std::string& text, const std::string& source) {
    std::vector<Json> out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::Parse, source + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<Json> read_jsonl_file(const std::string& path) { return parse_jsonl(read_file(path), path); }

template <class T, class F>
std::vector<T> decode_lines(const std::vector<Json>& lines, const std::string& source, F&& decode) {
    std::vector<T> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(decode(lines[i]));
        } catch (const Error& e) {
            throw Error(e.code(), source + " record " + std::to_string(i + 1) + ": " + e.message());
        }
    }
    return out;
}

inline std::vector<SwapLog> read_swap_logs(const std::string& path) {
    return decode_lines<SwapLog>(read_jsonl_file(path), path, [](const Json& j) { return swap_log_from_json(j); });
}
inline std::vector<CrossChainTx> read_records(const std::string& path) {
    return decode_lines<CrossChainTx>(read_jsonl_file(path), path, [](const Json& j) { return cross_chain_tx_from_json(j); });
}
inline std::vector<SandwichPair> read_pairs(const std::string& path) {
    return decode_lines<SandwichPair>(read_jsonl_file(path), path, [](const Json& j) { return sandwich_pair_from_json(j); });
}
inline std::vector<PoolTimeline> read_timelines(const std::string& path) {
    return decode_lines<PoolTimeline>(read_jsonl_file(path), path, [](const Json& j) { return pool_timeline_from_json(j); });
}

template <class Range>
std::string to_jsonl(const Range& items) {
    std::string out;
    for (const auto& it : items) {
        out += to_json(it).dump();
        out += '\n';
    }
    return out;
}

} // namespace xsw::io
