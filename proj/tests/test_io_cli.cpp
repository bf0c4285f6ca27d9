#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "xsw/cli/commands.hpp"

using namespace xsw;
using namespace xsw::io;
namespace fs = std::filesystem;

namespace {

// Big-endian 32-byte word of a small signed value, built by hand.
std::vector<std::uint8_t> word(long long v) {
    std::vector<std::uint8_t> w(32, v < 0 ? 0xff : 0x00);
    unsigned long long u = static_cast<unsigned long long>(v);
    for (int i = 0; i < 8; ++i) w[31 - i] = static_cast<std::uint8_t>(u >> (8 * i));
    return w;
}

std::vector<std::uint8_t> words(std::initializer_list<long long> vs) {
    std::vector<std::uint8_t> out;
    for (auto v : vs) {
        auto w = word(v);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

Hash32 topic_word(const Address& a) {
    Hash32 h;
    std::copy(a.bytes.begin(), a.bytes.end(), h.bytes.begin() + 12);
    return h;
}

const Address kPool = Address::from_counter(0x70, 1);
const Address kSender = Address::from_counter(0x71, 1);
const Address kTo = Address::from_counter(0x72, 1);

RawLogRecord swap_raw(const char* topic, std::vector<std::uint8_t> data) {
    RawLogRecord r;
    r.tx_hash = Hash32::from_counter(1, 2);
    r.block_number = 7;
    r.log_index = 3;
    r.address = kPool;
    r.chain_id = 56;
    r.topics = {Hash32::from_hex(topic), topic_word(kSender), topic_word(kTo)};
    r.data = std::move(data);
    return r;
}

constexpr const char* kV2 = "0xd78ad95fa46c994b6551d0da85fc275fe613ce37657fb8d5e3d130840159d822";
constexpr const char* kV3 = "0xc42079f94a6350d7e6235f29174924f928cc2ac818eb64fed8004e115fbcca67";
constexpr const char* kPcsV3 = "0x19b47279256b2a23a1665c810c8d55a1758940ee09377d4f8d26497a3577dc83";
constexpr const char* kOracleRequest = "0x532dbb6d061eee97ab4370060f60ede10b3dc361cc1214c07ae5e34dd86e6aaf";

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::Io;
}

RawLogRecord intent_raw(const char* selector_hex, std::vector<std::uint8_t> body) {
    RawLogRecord r;
    r.tx_hash = Hash32::from_counter(9, 9);
    r.chain_id = 1;
    r.block_number = 12;
    r.timestamp = 144;
    r.topics = {Hash32::from_hex(kOracleRequest)};
    r.data = parse_hex_bytes(selector_hex);
    r.data.insert(r.data.end(), body.begin(), body.end());
    return r;
}

std::vector<std::uint8_t> address_word(const Address& a) {
    std::vector<std::uint8_t> w(12, 0);
    w.insert(w.end(), a.bytes.begin(), a.bytes.end());
    return w;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int n = 0;
        path = fs::temp_directory_path() / ("xsw_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

const std::string kConfigs = XSW_SOURCE_DIR "/configs";

} // namespace

// ---- registry -------------------------------------------------------------------

TEST(Registry, EventRowsAreExact) {
    const auto& reg = SignatureRegistry::builtin();
    struct Row {
        const char *protocol, *event, *topic;
    };
    const std::vector<Row> want = {
        {"Uniswap V2", "Swap", kV2},
        {"PancakeSwap V2", "Swap", kV2},
        {"Uniswap V3", "Swap", kV3},
        {"PancakeSwap V3", "Swap", kPcsV3},
        {"Symbiosis", "OracleRequest", kOracleRequest},
    };
    ASSERT_EQ(reg.events().size(), want.size());
    for (const auto& w : want) {
        const EventEntry* e = reg.find_event(w.protocol, w.event);
        ASSERT_NE(e, nullptr) << w.protocol;
        EXPECT_EQ(e->topic.hex(), w.topic);
        bool listed = false;
        for (const auto* r : reg.find_event(Hash32::from_hex(w.topic))) listed |= r == e;
        EXPECT_TRUE(listed) << w.protocol;
    }
    EXPECT_EQ(reg.find_event(Hash32::from_hex(kV2)).size(), 2u);
}

TEST(Registry, FunctionRowsAreExact) {
    const auto& reg = SignatureRegistry::builtin();
    struct Row {
        const char *protocol, *function, *selector;
    };
    const std::vector<Row> want = {
        {"Symbiosis", "metaMintSyntheticToken", "0xc29a91bc"}, {"Symbiosis", "metaBurnSyntheticToken", "0xe66bb550"},
        {"Symbiosis", "receiveRequestV2Signed", "0x84d61c97"}, {"Symbiosis", "metaUnsynthesize", "0xc23a4c88"},
        {"Symbiosis", "externalCall", "0xf5b697a5"},           {"1inch", "swap", "0x12aa3caf"},
        {"1inch", "uniswapV3SwapTo", "0xbc80f1a8"},            {"OpenOcean", "swap", "0x90411a32"},
        {"Uniswap V2", "swapExactTokensForTokens", "0x38ed1739"}, {"Uniswap V2", "swapExactTokensForETH", "0x18cbafe5"},
    };
    ASSERT_EQ(reg.functions().size(), want.size());
    for (const auto& w : want) {
        const FunctionEntry* f = reg.find_function(w.protocol, w.function);
        ASSERT_NE(f, nullptr) << w.function;
        EXPECT_EQ(f->selector.hex(), w.selector);
        const FunctionEntry* by_sel = reg.find_function(Selector::from_hex(w.selector));
        ASSERT_NE(by_sel, nullptr);
        EXPECT_EQ(by_sel->function, w.function);
        EXPECT_EQ(by_sel->protocol, w.protocol);
    }
    EXPECT_EQ(reg.find_function(Selector::from_hex("0xdeadbeef")), nullptr);
}

// ---- swap log decoding ----------------------------------------------------------

TEST(DecodeSwap, V2Directions) {
    const auto& reg = SignatureRegistry::builtin();
    auto x = decode_swap_log(swap_raw(kV2, words({100, 0, 0, 97})), reg);
    ASSERT_TRUE(x);
    EXPECT_EQ(x->log.direction, Direction::XforY);
    EXPECT_EQ(x->log.amount_in, 100);
    EXPECT_EQ(x->log.amount_out, 97);
    EXPECT_EQ(x->log.sender, kSender);
    EXPECT_EQ(x->log.recipient, kTo);
    EXPECT_EQ(x->log.pool, kPool);
    EXPECT_EQ(x->log.token_in, "token0");
    auto y = decode_swap_log(swap_raw(kV2, words({0, 50, 40, 0})), reg);
    ASSERT_TRUE(y);
    EXPECT_EQ(y->log.direction, Direction::YforX);
    EXPECT_EQ(y->log.amount_in, 50);
    EXPECT_EQ(y->log.amount_out, 40);
}

TEST(DecodeSwap, V2AmbiguousInputsAreMalformed) {
    const auto& reg = SignatureRegistry::builtin();
    EXPECT_EQ(code_of([&] { decode_swap_log(swap_raw(kV2, words({100, 5, 0, 97})), reg); }), ErrorCode::MalformedData);
    EXPECT_EQ(code_of([&] { decode_swap_log(swap_raw(kV2, words({0, 0, 3, 97})), reg); }), ErrorCode::MalformedData);
}

TEST(DecodeSwap, V3SignConvention) {
    const auto& reg = SignatureRegistry::builtin();
    auto x = decode_swap_log(swap_raw(kV3, words({100, -97, 1, 1, -3})), reg);
    ASSERT_TRUE(x);
    EXPECT_EQ(x->protocol, "Uniswap V3");
    EXPECT_EQ(x->log.direction, Direction::XforY);
    EXPECT_EQ(x->log.amount_in, 100);
    EXPECT_EQ(x->log.amount_out, 97);
    auto y = decode_swap_log(swap_raw(kPcsV3, words({-97, 100, 1, 1, 0, 4, 4})), reg);
    ASSERT_TRUE(y);
    EXPECT_EQ(y->protocol, "PancakeSwap V3");
    EXPECT_EQ(y->log.direction, Direction::YforX);
    EXPECT_EQ(y->log.amount_in, 100);
    EXPECT_EQ(y->log.amount_out, 97);
    EXPECT_EQ(code_of([&] { decode_swap_log(swap_raw(kV3, words({100, 97, 1, 1, 0})), reg); }), ErrorCode::MalformedData);
}

TEST(DecodeSwap, ShortOrMisshapenLogs) {
    const auto& reg = SignatureRegistry::builtin();
    EXPECT_EQ(code_of([&] { decode_swap_log(swap_raw(kV3, words({100, -97, 1, 1})), reg); }), ErrorCode::MalformedData);
    EXPECT_EQ(code_of([&] { decode_swap_log(swap_raw(kPcsV3, words({100, -97, 1, 1, 0})), reg); }), ErrorCode::MalformedData);
    auto raw = swap_raw(kV2, words({100, 0, 0, 97}));
    raw.data.pop_back();
    EXPECT_EQ(code_of([&] { decode_swap_log(raw, reg); }), ErrorCode::MalformedData);
    raw = swap_raw(kV2, words({100, 0, 0, 97}));
    raw.topics.pop_back();
    EXPECT_EQ(code_of([&] { decode_swap_log(raw, reg); }), ErrorCode::MalformedData);
}

TEST(DecodeSwap, UnknownTopicsAreSkipped) {
    const auto& reg = SignatureRegistry::builtin();
    auto transfer = swap_raw("0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef", words({1}));
    EXPECT_FALSE(decode_swap_log(transfer, reg));
    RawLogRecord none;
    EXPECT_FALSE(decode_swap_log(none, reg));
    EXPECT_FALSE(decode_swap_log(intent_raw("0xc29a91bc", {}), reg));
}

TEST(DecodeSwap, SharedV2TopicResolvesThroughPoolMetadata) {
    const auto& reg = SignatureRegistry::builtin();
    auto raw = swap_raw(kV2, words({100, 0, 0, 97}));
    EXPECT_EQ(decode_swap_log(raw, reg)->protocol, "V2-like");
    PoolDirectory dir;
    dir[kPool] = PoolMeta{56, "WBNB", "CAKE", Protocol::PancakeV2};
    auto d = decode_swap_log(raw, reg, dir);
    EXPECT_EQ(d->protocol, "PancakeSwap V2");
    EXPECT_EQ(d->log.token_in, "WBNB");
    EXPECT_EQ(d->log.token_out, "CAKE");
    dir[kPool].protocol = Protocol::UniswapV2;
    EXPECT_EQ(decode_swap_log(raw, reg, dir)->protocol, "Uniswap V2");
    dir[kPool].protocol.reset();
    EXPECT_EQ(decode_swap_log(raw, reg, dir)->protocol, "V2-like");
}

TEST(DecodeSwap, EncodeRoundTrip) {
    const auto& reg = SignatureRegistry::builtin();
    std::mt19937_64 rng(8);
    for (int i = 0; i < 300; ++i) {
        SwapLog l;
        l.tx_hash = Hash32::from_counter(3, static_cast<std::uint64_t>(i));
        l.block_number = rng() % 1000;
        l.log_index = rng() % 50;
        l.pool = kPool;
        l.chain_id = 56;
        l.direction = rng() % 2 ? Direction::XforY : Direction::YforX;
        l.token_in = l.direction == Direction::XforY ? "A" : "B";
        l.token_out = l.direction == Direction::XforY ? "B" : "A";
        l.amount_in = TokenAmount(1 + rng() % 1'000'000) * TokenAmount(rng());
        l.amount_out = TokenAmount(1 + rng() % 1'000'000) * TokenAmount(1 + rng());
        l.sender = kSender;
        l.recipient = Address::from_counter(0x72, rng());
        l.gas_price = rng() % 10'000'000'000ull;
        l.timestamp = static_cast<double>(rng() % 100000);
        PoolDirectory dir;
        dir[kPool] = PoolMeta{56, "A", "B", Protocol::UniswapV3};
        for (auto layout : {LogLayout::V2Swap, LogLayout::V3Swap, LogLayout::PancakeV3Swap}) {
            RawLogRecord raw = encode_swap_log(l, layout, reg);
            auto back = decode_swap_log(raw, reg, dir);
            ASSERT_TRUE(back);
            ASSERT_EQ(back->log, l);
            ASSERT_EQ(raw_log_from_json(to_json(raw)), raw);
        }
    }
}

// ---- bridge intents -------------------------------------------------------------

TEST(BridgeIntent, DecodesHandBuiltPayload) {
    const auto& reg = SignatureRegistry::builtin();
    std::vector<std::uint8_t> body = words({42, 56});
    auto rcpt = address_word(kTo);
    body.insert(body.end(), rcpt.begin(), rcpt.end());
    auto rest = words({1});
    body.insert(body.end(), rest.begin(), rest.end());
    auto pool = address_word(kPool);
    body.insert(body.end(), pool.begin(), pool.end());
    rest = words({1, 1000, 950});
    body.insert(body.end(), rest.begin(), rest.end());

    RawLogRecord noise = swap_raw(kV2, words({1, 0, 0, 1}));
    BridgeIntent bi = decode_bridge_intent({noise, intent_raw("0xe66bb550", body)}, reg);
    EXPECT_EQ(bi.function, "metaBurnSyntheticToken");
    EXPECT_EQ(bi.protocol, "Symbiosis");
    EXPECT_EQ(bi.request_id, 42u);
    EXPECT_EQ(bi.dest_chain, 56u);
    EXPECT_EQ(bi.recipient, kTo);
    ASSERT_EQ(bi.hops.size(), 1u);
    EXPECT_EQ(bi.hops[0].pool, kPool);
    EXPECT_EQ(bi.hops[0].direction, Direction::YforX);
    EXPECT_EQ(bi.hops[0].amount_in, 1000);
    EXPECT_EQ(bi.hops[0].min_return, 950);
    EXPECT_EQ(bi.source.timestamp, 144.0);
}

TEST(BridgeIntent, Errors) {
    const auto& reg = SignatureRegistry::builtin();
    EXPECT_EQ(code_of([&] { decode_bridge_intent({swap_raw(kV2, words({1, 0, 0, 1}))}, reg); }), ErrorCode::MissingOracleRequest);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({}, reg); }), ErrorCode::MissingOracleRequest);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({intent_raw("0xdeadbeef", words({1, 56, 0, 0}))}, reg); }), ErrorCode::UnknownSelector);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({intent_raw("0xc29a", {})}, reg); }), ErrorCode::MalformedPayload);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({intent_raw("0xc29a91bc", words({1, 56, 0}))}, reg); }), ErrorCode::MalformedPayload);
    // hop_count says 2 but one hop follows.
    EXPECT_EQ(code_of([&] { decode_bridge_intent({intent_raw("0xc29a91bc", words({1, 56, 0, 2, 0, 0, 1, 1}))}, reg); }),
              ErrorCode::MalformedPayload);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({intent_raw("0xc29a91bc", words({1, 56, 0, 1, 0, 2, 1, 1}))}, reg); }),
              ErrorCode::MalformedPayload);
    auto ragged = intent_raw("0xc29a91bc", words({1, 56, 0, 1, 0, 0, 1, 1}));
    ragged.data.push_back(0);
    EXPECT_EQ(code_of([&] { decode_bridge_intent({ragged}, reg); }), ErrorCode::MalformedPayload);
}

TEST(BridgeIntent, RoundTripOverSimulatorRecords) {
    const auto& reg = SignatureRegistry::builtin();
    Json doc = parse_document(slurp(kConfigs + "/demo.json"), "demo.json");
    doc.erase("detection");
    auto cfg = sim_config_from_json(doc);
    auto r = sim::run(cfg);
    ASSERT_GT(r.corpus.records.size(), 100u);
    for (const auto& rec : r.corpus.records) {
        BridgeIntent bi = intent_of(rec);
        RawLogRecord raw = encode_bridge_intent(bi, reg);
        ASSERT_EQ(decode_bridge_intent({raw}, reg), bi);
        ASSERT_EQ(cross_chain_tx_from_json(to_json(rec)), rec);
    }
    for (const auto& l : r.corpus.logs) ASSERT_EQ(swap_log_from_json(to_json(l)), l);
}

// ---- prices ---------------------------------------------------------------------

TEST(Prices, ParsesTable) {
    auto t = parse_price_table("# snapshot\ntoken_id,symbol,usd_price,decimals\nWETH,WETH,3000.5,18\n\"USDC\",USDC,1,6\nX,,1/3\n", "p.csv");
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.find("WETH")->usd_price, Rational(6001, 2));
    EXPECT_EQ(t.find("USDC")->decimals, 6u);
    EXPECT_EQ(t.find("X")->decimals, 18u);
    EXPECT_EQ(t.find("X")->symbol, "X");
    EXPECT_EQ(*t.usd("USDC", BigInt(2'500'000)), Rational(5, 2));
    auto real = parse_price_table(slurp(kConfigs + "/prices.csv"), "prices.csv");
    EXPECT_GE(real.size(), 5u);
}

TEST(Prices, Errors) {
    EXPECT_EQ(code_of([] { parse_price_table("WETH,3000\n", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("token_id,price\n", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("token_id,usd_price\nA,abc\n", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("token_id,usd_price\nA,0\n", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("token_id,usd_price,decimals\nA,1,78\n", "p"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_price_table("token_id,usd_price\n,1\n", "p"); }), ErrorCode::Parse);
}

// ---- manifests ------------------------------------------------------------------

TEST(Manifest, DigestTracksInputsOnly) {
    RunManifest a;
    a.command = "detect";
    a.config = Json{{"num", 100}};
    a.add_input("records", "/a/records.jsonl", "r1");
    a.add_input("logs", "/a/logs.jsonl", "l1");

    RunManifest moved = a;
    moved.inputs[0].path = "/elsewhere/records.jsonl";
    moved.outputs = {"pairs.jsonl"};
    EXPECT_EQ(moved.digest(), a.digest());

    auto differs = [&](auto change) {
        RunManifest m = a;
        change(m);
        return m.digest() != a.digest();
    };
    EXPECT_TRUE(differs([](RunManifest& m) { m.inputs[1] = InputDigest{"logs", "/a/logs.jsonl", sha256_hex("l2")}; }));
    EXPECT_TRUE(differs([](RunManifest& m) { m.config["num"] = 99; }));
    EXPECT_TRUE(differs([](RunManifest& m) { m.seed = 1; }));
    EXPECT_TRUE(differs([](RunManifest& m) { m.command = "analyze"; }));
    EXPECT_TRUE(differs([](RunManifest& m) { std::swap(m.inputs[0].role, m.inputs[1].role); }));
    EXPECT_EQ(manifest_digest_of(a.header_line() + "{}\n"), a.digest());
    EXPECT_FALSE(manifest_digest_of("{}\n"));
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// ---- command line ---------------------------------------------------------------

TEST(Cli, ParamsWithPublishedValues) {
    auto r = invoke({"params", "--q", "0.57", "--p", "0.68", "--r-plus", "0.045", "--r-minus", "-0.047"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("E(r)=3.2341%"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("success=86.24%"), std::string::npos) << r.out;
    auto frac = invoke({"params", "--q", "57/100", "--p", "68/100", "--r-plus", "45/1000", "--r-minus", "-47/1000"});
    EXPECT_EQ(frac.out, r.out);
}

TEST(Cli, ValidationFailuresExitOne) {
    auto bad = invoke({"params", "--q", "1.5", "--p", "0.5", "--r-plus", "0.1", "--r-minus", "-0.1"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("q"), std::string::npos);
    EXPECT_EQ(invoke({"params", "--q", "x", "--p", "0.5", "--r-plus", "0.1", "--r-minus", "-0.1"}).code, 1);
    EXPECT_EQ(invoke({"params", "--q", "0.5"}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"detect", "--records", "a"}).code, 1);
    EXPECT_EQ(invoke({"--version"}).code, 0);

    TempDir dir;
    std::string typo = slurp(kConfigs + "/demo.json");
    typo.replace(typo.find("\"arrival_rate\""), 14, "\"arival_rate\"");
    std::ofstream(dir / "bad.json") << typo;
    auto r = invoke({"simulate", "--config", dir / "bad.json", "--out", dir / "out"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("arival_rate"), std::string::npos) << r.err;
    std::ofstream(dir / "broken.json") << "{";
    EXPECT_EQ(invoke({"simulate", "--config", dir / "broken.json", "--out", dir / "out"}).code, 1);
}

TEST(Cli, MissingFilesExitTwo) {
    TempDir dir;
    EXPECT_EQ(invoke({"simulate", "--config", dir / "nope.json", "--out", dir / "out"}).code, 2);
    EXPECT_EQ(invoke({"detect", "--records", dir / "r.jsonl", "--logs", dir / "l.jsonl", "--out", dir / "out"}).code, 2);
}

TEST(Cli, SimulateIsReproducibleAndFeedsTheRest) {
    TempDir dir;
    const std::string cfg = kConfigs + "/demo.json";
    auto a = invoke({"simulate", "--config", cfg, "--out", dir / "a"});
    auto b = invoke({"simulate", "--config", cfg, "--out", dir / "b"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    for (const char* f : {"trace.jsonl", "logs.jsonl", "records.jsonl", "timelines.jsonl", "truth.jsonl", "raw_logs.jsonl"})
        EXPECT_EQ(slurp(dir / (std::string("a/") + f)), slurp(dir / (std::string("b/") + f))) << f;
    auto c = invoke({"simulate", "--config", cfg, "--out", dir / "c", "--seed", "8"});
    EXPECT_NE(manifest_digest_of(slurp(dir / "c/records.jsonl")), manifest_digest_of(slurp(dir / "a/records.jsonl")));
    EXPECT_NE(a.out.find("planted_recovered=81/81"), std::string::npos) << a.out;

    auto d = invoke({"detect", "--records", dir / "a/records.jsonl", "--logs", dir / "a/logs.jsonl", "--config",
                  kConfigs + "/detection.json", "--out", dir / "det"});
    ASSERT_EQ(d.code, 0) << d.err;
    auto pairs = read_pairs(dir / "det/pairs.jsonl");
    EXPECT_GT(pairs.size(), 0u);
    EXPECT_NE(d.out.find("pairs=" + std::to_string(pairs.size())), std::string::npos) << d.out;

    auto an = invoke({"analyze", "--pairs", dir / "det/pairs.jsonl", "--prices", kConfigs + "/prices.csv", "--records",
                   dir / "a/records.jsonl", "--out", dir / "an"});
    ASSERT_EQ(an.code, 0) << an.err;
    for (const char* f : {"summary.csv", "chain_pairs.csv", "pools.csv", "positions.csv", "gas.csv", "priced_pairs.jsonl", "report.json"})
        EXPECT_TRUE(fs::exists(dir / (std::string("an/") + f))) << f;
    EXPECT_EQ(invoke({"analyze", "--pairs", dir / "det/pairs.jsonl", "--prices", kConfigs + "/prices.csv", "--strict-prices",
                   "--out", dir / "an2"})
                  .code,
              0);

    auto dec = invoke({"decode", "--raw", dir / "a/raw_logs.jsonl", "--pools", dir / "a/pools.jsonl", "--out", dir / "dec.jsonl",
                    "--intents", dir / "intents.jsonl"});
    ASSERT_EQ(dec.code, 0) << dec.err;
    EXPECT_EQ(read_swap_logs(dir / "dec.jsonl"), read_swap_logs(dir / "a/logs.jsonl"));

    auto par = invoke({"params", "--timelines", dir / "a/timelines.jsonl", "--pairs", dir / "det/pairs.jsonl"});
    ASSERT_EQ(par.code, 0) << par.err;
    EXPECT_NE(par.out.find("E(r)="), std::string::npos);
}

TEST(Cli, DetectOnEmptyLogs) {
    TempDir dir;
    std::ofstream(dir / "records.jsonl") << "";
    std::ofstream(dir / "logs.jsonl") << "";
    auto r = invoke({"detect", "--records", dir / "records.jsonl", "--logs", dir / "logs.jsonl", "--out", dir / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string body = slurp(dir / "out/pairs.jsonl");
    ASSERT_TRUE(manifest_digest_of(body));
    EXPECT_EQ(body.find('\n'), body.size() - 1); // header line only
}

TEST(Cli, ConfigPathFromEnvironment) {
    TempDir dir;
    ASSERT_EQ(::setenv(cli::kConfigEnv, (kConfigs + "/demo.json").c_str(), 1), 0);
    auto env = invoke({"simulate", "--out", dir / "env"});
    ASSERT_EQ(::setenv(cli::kConfigEnv, (dir / "missing.json").c_str(), 1), 0);
    auto flag_wins = invoke({"simulate", "--config", kConfigs + "/demo.json", "--out", dir / "flag"});
    ::unsetenv(cli::kConfigEnv);
    EXPECT_EQ(env.code, 0) << env.err;
    EXPECT_EQ(flag_wins.code, 0) << flag_wins.err;
    EXPECT_EQ(env.out, flag_wins.out);
    EXPECT_EQ(invoke({"simulate", "--out", dir / "none"}).code, 1);
}

TEST(Cli, Selftest) {
    auto r = invoke({"selftest"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}
