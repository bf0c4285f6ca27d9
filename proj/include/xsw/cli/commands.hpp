#pragma once

// Subcommands of the `xsw` tool. Every subcommand reports through the two streams it
// is given and signals failure by throwing xsw::Error; `run` maps errors to exit codes.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xsw/amm.hpp"
#include "xsw/attack_model.hpp"
#include "xsw/detector.hpp"
#include "xsw/io/abi.hpp"
#include "xsw/io/csv.hpp"
#include "xsw/io/json.hpp"
#include "xsw/io/manifest.hpp"
#include "xsw/io/registry.hpp"
#include "xsw/oracle/amm.hpp"
#include "xsw/oracle/detector.hpp"
#include "xsw/oracle/synthetic.hpp"
#include "xsw/report.hpp"
#include "xsw/sim/metrics.hpp"

namespace xsw::cli {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr const char* kConfigEnv = "XSW_CONFIG";

inline int exit_code(ErrorCode c) { return c == ErrorCode::Io ? kExitIo : kExitInvalid; }

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "'");
    return std::filesystem::path(dir);
}

/// Writes `body` under the manifest header and records the file as an output.
inline void emit(io::RunManifest& m, const std::filesystem::path& path, const std::string& body) {
    io::write_file(path.string(), m.header_line() + body);
    m.outputs.push_back(path.string());
}

inline void emit_json(io::RunManifest& m, const std::filesystem::path& path, const Json& doc) {
    io::write_file(path.string(), doc.dump(2) + "\n");
    m.outputs.push_back(path.string());
}

inline Rational parse_flag_rational(const std::string& text, const std::string& flag) {
    try {
        return parse_rational(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, flag + ": " + e.message());
    }
}

template <class T>
T parse_flag_fraction(const std::string& text, const std::string& flag) {
    Rational r = parse_flag_rational(text, flag);
    BigInt n = mp::numerator(r), d = mp::denominator(r);
    if (n < 0 || n > std::numeric_limits<std::uint64_t>::max() || d > std::numeric_limits<std::uint64_t>::max())
        throw Error(ErrorCode::InvalidArgument, flag + ": out of range");
    try {
        return T(n.convert_to<std::uint64_t>(), d.convert_to<std::uint64_t>());
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, flag + ": " + e.message());
    }
}

inline std::string read_input(io::RunManifest& m, const std::string& role, const std::string& path) {
    std::string text = io::read_file(path);
    m.add_input(role, path, text);
    return text;
}

template <class T, class F>
std::vector<T> read_lines(io::RunManifest& m, const std::string& role, const std::string& path, F&& decode) {
    return io::decode_lines<T>(io::parse_jsonl(read_input(m, role, path), path), path, decode);
}

} // namespace detail

// ---- simulate ----------------------------------------------------------------

struct SimulateOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

/// The raw receipt logs a chain indexer would return for the simulated corpus.
inline std::vector<io::RawLogRecord> raw_export(const sim::SimTrace& trace, const sim::Corpus& corpus) {
    const auto& reg = io::SignatureRegistry::builtin();
    std::map<Address, Protocol> proto;
    for (const auto& p : trace.initial_pools) proto[p.address] = p.protocol;
    std::vector<io::RawLogRecord> raw;
    raw.reserve(corpus.logs.size() + corpus.records.size());
    for (const auto& r : corpus.records) raw.push_back(io::encode_bridge_intent(io::intent_of(r), reg));
    for (const auto& l : corpus.logs) raw.push_back(io::encode_swap_log(l, io::layout_for(proto.at(l.pool)), reg));
    return raw;
}

inline io::PoolDirectory pool_directory(const sim::SimTrace& trace, ChainId chain) {
    io::PoolDirectory dir;
    for (const auto& p : trace.initial_pools) dir[p.address] = io::PoolMeta{chain, p.token_x, p.token_y, p.protocol};
    return dir;
}

inline int simulate(const SimulateOptions& o, std::ostream& out) {
    if (o.config.empty()) throw Error(ErrorCode::InvalidArgument, std::string("--config: required (or set ") + kConfigEnv + ")");
    io::RunManifest m;
    m.command = "simulate";
    Json doc = io::parse_document(detail::read_input(m, "config", o.config), o.config);
    if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, o.config + ": expected an object");
    DetectionConfig dcfg;
    if (auto it = doc.find("detection"); it != doc.end()) {
        dcfg = io::detection_config_from_json(*it);
        doc.erase(it);
    }
    sim::SimConfig cfg = io::sim_config_from_json(doc);
    if (o.seed) cfg.seed = *o.seed;
    m.seed = cfg.seed;
    m.config = Json{{"simulation", io::to_json(cfg)}, {"detection", io::to_json(dcfg)}};

    const auto dir = detail::prepare_dir(o.out);
    sim::SimResult r = sim::run(cfg, dcfg);
    const auto& c = r.corpus;
    Json pools_out = Json::array();

    detail::emit(m, dir / "trace.jsonl", io::to_jsonl(r.trace.events));
    detail::emit(m, dir / "logs.jsonl", io::to_jsonl(c.logs));
    detail::emit(m, dir / "records.jsonl", io::to_jsonl(c.records));
    detail::emit(m, dir / "timelines.jsonl", io::to_jsonl(c.timelines));
    detail::emit(m, dir / "truth.jsonl", io::to_jsonl(c.truth));
    detail::emit(m, dir / "raw_logs.jsonl", io::to_jsonl(raw_export(r.trace, c)));
    std::string pools;
    for (const auto& [a, meta] : pool_directory(r.trace, cfg.destination.chain_id)) pools += io::to_json(meta, a).dump() + "\n";
    detail::emit(m, dir / "pools.jsonl", pools);
    m.outputs.push_back((dir / "metrics.json").string());
    m.outputs.push_back((dir / "manifest.json").string());
    io::write_file((dir / "metrics.json").string(), Json{{"manifest", m.to_json()}, {"metrics", io::to_json(r.metrics)}}.dump(2) + "\n");
    io::write_file((dir / "manifest.json").string(), m.to_json().dump(2) + "\n");

    const auto& k = r.metrics;
    out << "victims=" << k.victims << " executed=" << k.executed << " reverted=" << k.reverted << " no_quorum=" << k.no_quorum << "\n";
    out << "attacks_completed=" << k.attacks_completed << " bot_attacks=" << k.bot_attacks << " detected_pairs=" << k.detected_pairs
        << " single_chain_pairs=" << k.single_chain_pairs << "\n";
    out << "planted_recovered=" << k.planted_recovered << "/" << k.planted_in_scope << "\n";
    out << "digest=" << m.digest() << "\n";
    return kExitOk;
}

// ---- detect --------------------------------------------------------------------

struct DetectOptions {
    std::string records;
    std::string logs;
    std::string config;
    std::string out;
};

inline int detect(const DetectOptions& o, std::ostream& out) {
    io::RunManifest m;
    m.command = "detect";
    DetectionConfig cfg;
    if (!o.config.empty()) {
        Json doc = io::parse_document(detail::read_input(m, "config", o.config), o.config);
        // A full simulator config carries its detection settings under "detection".
        if (doc.is_object() && doc.contains("pools")) doc = doc.value("detection", Json::object());
        cfg = io::detection_config_from_json(doc);
    }
    m.config = io::to_json(cfg);
    auto records = detail::read_lines<CrossChainTx>(m, "records", o.records, [](const Json& j) { return io::cross_chain_tx_from_json(j); });
    auto logs = detail::read_lines<SwapLog>(m, "logs", o.logs, [](const Json& j) { return io::swap_log_from_json(j); });

    auto kept = prefilter(records, cfg);
    LogIndex index(std::move(logs));
    auto pairs = detect_all(kept, index, cfg);

    const auto dir = detail::prepare_dir(o.out);
    detail::emit(m, dir / "pairs.jsonl", io::to_jsonl(pairs));
    m.outputs.push_back((dir / "manifest.json").string());
    io::write_file((dir / "manifest.json").string(), m.to_json().dump(2) + "\n");

    std::size_t single = std::count_if(pairs.begin(), pairs.end(), [](const SandwichPair& p) { return p.classification == PairClass::SingleChain; });
    out << "records=" << records.size() << " in_scope=" << kept.size() << " pairs=" << pairs.size() << " cross_chain=" << pairs.size() - single
        << " single_chain=" << single << "\n";
    return kExitOk;
}

// ---- params --------------------------------------------------------------------

struct ParamsOptions {
    std::string timelines;
    std::string theta = "1";
    std::string pairs;
    std::string percentile = "95";
    std::string q, p, r_plus, r_minus;
};

inline int params(const ParamsOptions& o, std::ostream& out) {
    std::optional<Rational> q, p, rp, rm;
    if (!o.timelines.empty()) {
        auto theta = detail::parse_flag_fraction<ExtractionFraction>(o.theta, "--theta");
        auto tls = io::read_timelines(o.timelines);
        NoiseEstimate est = estimate_noise_params(tls, theta);
        out << "timelines=" << est.timelines << " empty=" << est.empty << " with_noise=" << est.with_noise
            << " no_room=" << est.with_noise_no_room << " non_loss=" << est.non_loss << "\n";
        q = est.q;
        p = est.p;
    }
    if (!o.pairs.empty()) {
        auto pct = detail::parse_flag_rational(o.percentile, "--percentile");
        auto pairs = io::read_pairs(o.pairs);
        std::vector<Rational> rates;
        rates.reserve(pairs.size());
        for (const auto& x : pairs) rates.push_back(x.profit_rate);
        ReturnRates rr = estimate_return_rates(rates, pct);
        rp = rr.r_plus;
        rm = rr.r_minus;
    }
    if (!o.q.empty()) q = detail::parse_flag_rational(o.q, "--q");
    if (!o.p.empty()) p = detail::parse_flag_rational(o.p, "--p");
    if (!o.r_plus.empty()) rp = detail::parse_flag_rational(o.r_plus, "--r-plus");
    if (!o.r_minus.empty()) rm = detail::parse_flag_rational(o.r_minus, "--r-minus");

    if (!q) throw Error(ErrorCode::InvalidArgument, "q: pass --timelines or --q");
    if (!p) throw Error(ErrorCode::InvalidArgument, "p: no timeline had both noise and room to attack; pass --p");
    NoiseParams np{*q, *p};
    try {
        np.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("--q/--p: ") + e.message());
    }
    out << "q=" << format_decimal(*q, 4) << "\n";
    out << "p=" << format_decimal(*p, 4) << "\n";
    if (rp && rm) {
        ReturnRates rr{*rp, *rm};
        try {
            rr.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidArgument, std::string("--r-plus/--r-minus: ") + e.message());
        }
        out << "r_plus=" << format_percent(*rp, 4) << "\n";
        out << "r_minus=" << format_percent(*rm, 4) << "\n";
        out << "E(r)=" << format_percent(expected_profit_rate(np, rr), 4) << "\n";
    } else if (rp || rm) {
        throw Error(ErrorCode::InvalidArgument, "r_plus/r_minus: both are needed");
    }
    out << "success=" << format_percent(success_probability(np), 2) << "\n";
    return kExitOk;
}

// ---- analyze -------------------------------------------------------------------

struct AnalyzeOptions {
    std::string pairs;
    std::string prices;
    std::string records;
    std::string out;
    std::uint64_t num = 100;
    bool strict_prices = false;
};

inline int analyze(const AnalyzeOptions& o, std::ostream& out) {
    io::RunManifest m;
    m.command = "analyze";
    m.config = Json{{"num", o.num}, {"strict_prices", o.strict_prices}};
    if (o.num < 1) throw Error(ErrorCode::InvalidArgument, "--num: must be at least 1");
    auto pairs = detail::read_lines<SandwichPair>(m, "pairs", o.pairs, [](const Json& j) { return io::sandwich_pair_from_json(j); });
    PriceTable prices = io::parse_price_table(detail::read_input(m, "prices", o.prices), o.prices);
    std::vector<CrossChainTx> records;
    if (!o.records.empty())
        records = detail::read_lines<CrossChainTx>(m, "records", o.records, [](const Json& j) { return io::cross_chain_tx_from_json(j); });

    PricedPairs priced = classify_and_price(std::move(pairs), prices, o.strict_prices);
    Report rep = aggregate(priced.pairs, records, prices, o.num);

    const auto dir = detail::prepare_dir(o.out);
    detail::emit(m, dir / "priced_pairs.jsonl", io::to_jsonl(priced.pairs));
    detail::emit(m, dir / "summary.csv", io::summary_csv(rep));
    detail::emit(m, dir / "chain_pairs.csv", io::chain_pairs_csv(rep));
    detail::emit(m, dir / "pools.csv", io::pools_csv(rep));
    detail::emit(m, dir / "positions.csv", io::positions_csv(rep));
    detail::emit(m, dir / "gas.csv", io::gas_csv(rep));
    m.outputs.push_back((dir / "report.json").string());
    Json missing(priced.missing);
    io::write_file((dir / "report.json").string(),
                   Json{{"manifest", m.to_json()}, {"report", io::to_json(rep)}, {"unpriced_tokens", missing}}.dump(2) + "\n");

    out << "pairs=" << rep.total_pairs << " cross_chain=" << rep.cross_chain.pairs << " single_chain=" << rep.single_chain.pairs << "\n";
    out << "profit_usd=" << format_decimal(rep.cross_chain.profit_usd + rep.single_chain.profit_usd, 2)
        << " unpriced_tokens=" << priced.missing.size() << "\n";
    return kExitOk;
}

// ---- decode --------------------------------------------------------------------

struct DecodeOptions {
    std::string raw;
    std::string pools;
    std::string out;
    std::string intents;
};

inline int decode(const DecodeOptions& o, std::ostream& out) {
    io::RunManifest m;
    m.command = "decode";
    const auto& reg = io::SignatureRegistry::builtin();
    auto raw = detail::read_lines<io::RawLogRecord>(m, "raw", o.raw, [](const Json& j) { return io::raw_log_from_json(j); });
    io::PoolDirectory dir;
    if (!o.pools.empty()) dir = io::pool_directory_from_jsonl(io::parse_jsonl(detail::read_input(m, "pools", o.pools), o.pools), o.pools);

    std::string logs;
    std::size_t swaps = 0, skipped = 0;
    std::map<std::string, std::size_t> v2_like;
    std::vector<Hash32> tx_order;
    std::map<Hash32, std::vector<io::RawLogRecord>> by_tx;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& r = raw[i];
        bool request = false;
        if (!r.topics.empty())
            for (const auto* e : reg.find_event(r.topics.front())) request |= e->layout == io::LogLayout::OracleRequest;
        if (request) {
            if (!by_tx.count(r.tx_hash)) tx_order.push_back(r.tx_hash);
            by_tx[r.tx_hash].push_back(r);
            continue;
        }
        std::optional<io::DecodedSwap> d;
        try {
            d = io::decode_swap_log(r, reg, dir);
        } catch (const Error& e) {
            throw Error(e.code(), o.raw + " record " + std::to_string(i + 1) + ": " + e.message());
        }
        if (!d) {
            ++skipped;
            continue;
        }
        ++swaps;
        if (d->protocol == "V2-like") ++v2_like[d->protocol];
        logs += io::to_json(d->log).dump() + "\n";
    }

    std::string intents;
    for (const auto& h : tx_order) {
        try {
            intents += io::to_json(io::decode_bridge_intent(by_tx[h], reg)).dump() + "\n";
        } catch (const Error& e) {
            throw Error(e.code(), o.raw + " tx " + h.hex() + ": " + e.message());
        }
    }

    detail::emit(m, o.out, logs);
    if (!o.intents.empty()) detail::emit(m, o.intents, intents);
    out << "swaps=" << swaps << " intents=" << tx_order.size() << " skipped=" << skipped << " v2_like=" << v2_like["V2-like"] << "\n";
    return kExitOk;
}

// ---- selftest ------------------------------------------------------------------

/// Small, fast scenario used by the codec round-trip check.
inline const char* selftest_config() {
    return R"({
  "seed": 11, "horizon": "inf", "victim_count": 300,
  "relay": {"delay": {"family": "log_normal", "p95": 100, "sigma": 0.5}},
  "pools": [
    {"token_x": "WETH", "token_y": "USDT", "reserve_x": "1000000000000000000000", "reserve_y": "3000000000000000000000000", "fee_bps": 30, "protocol": "uniswap_v2"},
    {"token_x": "WBNB", "token_y": "CAKE", "reserve_x": "500000000000000000000", "reserve_y": "90000000000000000000000", "fee_bps": 25, "protocol": "pancake_v2"},
    {"token_x": "WETH", "token_y": "LINK", "reserve_x": "800000000000000000000", "reserve_y": "150000000000000000000000", "fee_bps": 5, "protocol": "uniswap_v3"},
    {"token_x": "WBNB", "token_y": "BTCB", "reserve_x": "900000000000000000000", "reserve_y": "10000000000000000000", "fee_bps": 100, "protocol": "pancake_v3"}
  ],
  "paths": [{"pools": [0], "directions": ["x_for_y"]}, {"pools": [1, 3], "directions": ["y_for_x", "x_for_y"]}, {"pools": [2], "directions": ["y_for_x"]}],
  "victims": {"arrival_rate": 0.2},
  "noise": {"arrival_rate": 0.02}
})";
}

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::optional<std::string> failure;
};

namespace detail {

inline oracle::PoolState oracle_state(const Pool& p, Direction d) {
    return {to_big(p.reserve_in(d)), to_big(p.reserve_out(d)), BigInt(p.fee.num), BigInt(p.fee.den)};
}

inline Pool random_pool(std::mt19937_64& rng) {
    const std::uint64_t fees[] = {0, 5, 30, 100};
    std::uniform_real_distribution<double> e10(3.0, 18.0);
    Pool p;
    p.token_x = "X";
    p.token_y = "Y";
    p.reserve_x = to_amount(BigInt(static_cast<unsigned long long>(std::pow(10.0, e10(rng)))));
    p.reserve_y = to_amount(BigInt(static_cast<unsigned long long>(std::pow(10.0, e10(rng)))));
    p.fee = FeeRate::bps(fees[rng() % 4]);
    return p;
}

inline CheckResult check_quotes(std::uint64_t seed, std::size_t n) {
    CheckResult r{"swap quote equals largest output the invariant accepts", 0, {}};
    std::mt19937_64 rng(seed);
    while (r.cases < n) {
        Pool p = random_pool(rng);
        Direction d = rng() % 2 ? Direction::XforY : Direction::YforX;
        BigInt dx = to_big(p.reserve_in(d)) / (BigInt(rng() % 1000) + 1) + 1;
        BigInt got = to_big(quote_output(p, d, to_amount(dx)));
        BigInt want = oracle::quote_bisect(oracle_state(p, d), dx);
        ++r.cases;
        if (got != want) {
            r.failure = "reserves " + to_string(p.reserve_x) + "/" + to_string(p.reserve_y) + " in " + dx.str() + ": " + got.str() + " vs " + want.str();
            return r;
        }
    }
    return r;
}

inline CheckResult check_frontrun(std::uint64_t seed, std::size_t n) {
    CheckResult r{"front-run bound is maximal and equals bisection", 0, {}};
    std::mt19937_64 rng(seed);
    while (r.cases < n) {
        Pool p = random_pool(rng);
        BigInt v = to_big(p.reserve_x) / (BigInt(rng() % 10000) + 2) + 1;
        SlippageTolerance s(1 + rng() % 50, 1000);
        ExtractionFraction theta = rng() % 2 ? ExtractionFraction(1, 1) : ExtractionFraction(1, 2);
        TokenAmount quote = quote_output(p, Direction::XforY, to_amount(v));
        if (quote == 0) continue;
        ++r.cases;
        BigInt a = to_big(optimal_frontrun_input(p, to_amount(v), s, theta));
        auto st = oracle_state(p, Direction::XforY);
        BigInt target = oracle::min_out(to_big(quote), Rational(BigInt(s.num), BigInt(s.den)) * Rational(BigInt(theta.num), BigInt(theta.den)));
        BigInt want = oracle::frontrun_bisect(st, v, target);
        bool maximal = oracle::victim_out(st, a, v) >= target && oracle::victim_out(st, a + 1, v) < target;
        if (a != want || !maximal) {
            r.failure = "victim " + v.str() + ": solver " + a.str() + " vs bisection " + want.str();
            return r;
        }
    }
    return r;
}

inline CheckResult check_detector(std::uint64_t seed, std::size_t n) {
    CheckResult r{"detector equals brute-force enumeration", 0, {}};
    for (std::uint64_t i = 0; i < n; ++i) {
        auto c = oracle::synthetic_corpus(seed + i);
        DetectionConfig cfg;
        cfg.num = 1 + (seed + i) % 5;
        auto pairs = detect_all(c.records, LogIndex(c.logs), cfg);
        std::vector<oracle::PairKey> got;
        for (const auto& p : pairs)
            got.emplace_back(p.record_id, p.hop_index, p.front.tx_hash.hex(), p.front.log_index, p.back.tx_hash.hex(), p.back.log_index);
        std::sort(got.begin(), got.end());
        ++r.cases;
        if (got != oracle::detect_brute(c.records, c.logs, cfg.num, {})) {
            r.failure = "corpus seed " + std::to_string(seed + i);
            return r;
        }
    }
    return r;
}

inline CheckResult check_expected_rate(std::uint64_t seed, std::size_t n) {
    CheckResult r{"expected profit rate equals the success-weighted average", 0, {}};
    std::mt19937_64 rng(seed);
    auto frac = [&](std::uint64_t den) { return Rational(BigInt(rng() % (den + 1)), BigInt(den)); };
    for (; r.cases < n; ++r.cases) {
        NoiseParams np{frac(1000), frac(1000)};
        ReturnRates rr{frac(200), -frac(200)};
        Rational longhand = np.q * rr.r_plus + (1 - np.q) * (np.p * rr.r_plus + (1 - np.p) * rr.r_minus);
        if (expected_profit_rate(np, rr) != longhand) {
            r.failure = "q=" + rational_to_string(np.q) + " p=" + rational_to_string(np.p);
            return r;
        }
    }
    return r;
}

template <class T, class Enc, class Dec>
bool json_round_trip(const std::vector<T>& items, Enc&& enc, Dec&& dec) {
    for (const auto& x : items)
        if (!(dec(Json::parse(enc(x).dump())) == x)) return false;
    return true;
}

inline CheckResult check_codecs() {
    CheckResult r{"simulator exports round-trip through every codec", 0, {}};
    sim::SimConfig cfg = io::sim_config_from_json(Json::parse(selftest_config()));
    sim::SimResult res = sim::run(cfg);
    const auto& c = res.corpus;
    const auto& reg = io::SignatureRegistry::builtin();
    auto dir = pool_directory(res.trace, cfg.destination.chain_id);
    auto raw = raw_export(res.trace, c);

    std::size_t ri = 0;
    for (const auto& rec : c.records) {
        auto bi = io::decode_bridge_intent({raw[ri++]}, reg);
        if (!(bi == io::intent_of(rec))) {
            r.failure = "bridge intent of record " + std::to_string(rec.id);
            return r;
        }
    }
    for (const auto& l : c.logs) {
        auto d = io::decode_swap_log(raw[ri], reg, dir);
        if (!d || !(d->log == l) || !(io::raw_log_from_json(Json::parse(io::to_json(raw[ri]).dump())) == raw[ri])) {
            r.failure = "swap log " + l.tx_hash.hex();
            return r;
        }
        ++ri;
    }
    auto pairs = detect_all(c.records, LogIndex(c.logs), DetectionConfig{});
    bool ok = json_round_trip(c.logs, [](const auto& x) { return io::to_json(x); }, [](const Json& j) { return io::swap_log_from_json(j); }) &&
              json_round_trip(c.records, [](const auto& x) { return io::to_json(x); }, [](const Json& j) { return io::cross_chain_tx_from_json(j); }) &&
              json_round_trip(pairs, [](const auto& x) { return io::to_json(x); }, [](const Json& j) { return io::sandwich_pair_from_json(j); }) &&
              json_round_trip(c.truth, [](const auto& x) { return io::to_json(x); }, [](const Json& j) { return io::planted_attack_from_json(j); });
    for (const auto& t : c.timelines) {
        auto back = io::pool_timeline_from_json(Json::parse(io::to_json(t).dump()));
        ok = ok && io::to_json(back) == io::to_json(t);
    }
    ok = ok && io::sim_config_from_json(io::to_json(cfg)).seed == cfg.seed && io::to_json(io::sim_config_from_json(io::to_json(cfg))) == io::to_json(cfg);
    r.cases = raw.size() + pairs.size() + c.timelines.size();
    if (!ok) r.failure = "JSON record round-trip";
    if (c.logs.empty() || c.records.empty()) r.failure = "scenario produced no logs";
    return r;
}

} // namespace detail

inline std::vector<CheckResult> run_selftest(std::uint64_t seed = 2024) {
    return {detail::check_quotes(seed, 500), detail::check_frontrun(seed + 1, 300), detail::check_detector(seed + 2, 200),
            detail::check_expected_rate(seed + 3, 500), detail::check_codecs()};
}

inline int selftest(std::ostream& out) {
    bool all = true;
    for (const auto& c : run_selftest()) {
        if (c.failure) {
            all = false;
            out << "FAIL " << c.name << ": " << *c.failure << "\n";
        } else {
            out << "PASS " << c.name << " (" << c.cases << " cases)\n";
        }
    }
    return all ? kExitOk : kExitInvalid;
}

// ---- entry point ---------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-chain sandwich simulation, detection and analysis"};
    app.name("xsw");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::kToolVersion));

    SimulateOptions so;
    auto* sim = app.add_subcommand("simulate", "Run the bridge simulator and export trace and corpus");
    sim->add_option("--config", so.config, "Simulation config (JSON)")->envname(kConfigEnv);
    sim->add_option("--out", so.out, "Output directory")->required();
    sim->add_option("--seed", so.seed, "Override the config seed");

    DetectOptions dopt;
    auto* det = app.add_subcommand("detect", "Find sandwich pairs around cross-chain victims");
    det->add_option("--records", dopt.records, "Cross-chain records (JSONL)")->required();
    det->add_option("--logs", dopt.logs, "Destination swap logs (JSONL)")->required();
    det->add_option("--config", dopt.config, "Detection config (JSON)")->envname(kConfigEnv);
    det->add_option("--out", dopt.out, "Output directory")->required();

    ParamsOptions po;
    auto* par = app.add_subcommand("params", "Estimate q, p and r and evaluate the expected profit rate");
    par->add_option("--timelines", po.timelines, "Pool timelines (JSONL)");
    par->add_option("--theta", po.theta, "Extraction fraction, e.g. 1 or 1/2");
    par->add_option("--pairs", po.pairs, "Detected pairs (JSONL) for r+ and r-");
    par->add_option("--percentile", po.percentile, "Keep rates up to this |rate| percentile");
    par->add_option("--q", po.q, "Override q");
    par->add_option("--p", po.p, "Override p");
    par->add_option("--r-plus", po.r_plus, "Override r+");
    par->add_option("--r-minus", po.r_minus, "Override r-");

    AnalyzeOptions ao;
    auto* ana = app.add_subcommand("analyze", "Aggregate priced reports over detected pairs");
    ana->add_option("--pairs", ao.pairs, "Detected pairs (JSONL)")->required();
    ana->add_option("--prices", ao.prices, "Token prices (CSV)")->required();
    ana->add_option("--records", ao.records, "Cross-chain records (JSONL) for volume");
    ana->add_option("--num", ao.num, "Back-run window in blocks");
    ana->add_flag("--strict-prices", ao.strict_prices, "Fail when a profit token has no price");
    ana->add_option("--out", ao.out, "Output directory")->required();

    DecodeOptions deo;
    auto* dec = app.add_subcommand("decode", "Decode raw receipt logs into swap logs and bridge intents");
    dec->add_option("--raw", deo.raw, "Raw logs (JSONL)")->required();
    dec->add_option("--pools", deo.pools, "Pool metadata (JSONL)");
    dec->add_option("--out", deo.out, "Decoded swap logs (JSONL)")->required();
    dec->add_option("--intents", deo.intents, "Decoded bridge intents (JSONL)");

    auto* st = app.add_subcommand("selftest", "Check the library against its reference oracles");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (sim->parsed()) return simulate(so, out);
        if (det->parsed()) return detect(dopt, out);
        if (par->parsed()) return params(po, out);
        if (ana->parsed()) return analyze(ao, out);
        if (dec->parsed()) return decode(deo, out);
        if (st->parsed()) return selftest(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}

inline int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace xsw::cli
