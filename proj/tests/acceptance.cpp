// Acceptance suite. One PASS/FAIL line per criterion; exit status is non-zero when any
// criterion fails. Every tolerance used below is a named constant in this file.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "xsw/io/csv.hpp"
#include "xsw/io/json.hpp"
#include "xsw/oracle/amm.hpp"
#include "xsw/oracle/detector.hpp"
#include "xsw/oracle/synthetic.hpp"
#include "xsw/report.hpp"
#include "xsw/sim/metrics.hpp"

using namespace xsw;

namespace {

// ---- pinned tolerances ----------------------------------------------------------
constexpr double kAc1MaxSeconds = 1.0;
constexpr std::size_t kAc2Pools = 1000;
constexpr double kAc2MaxSeconds = 10.0;
constexpr std::size_t kAc3Instances = 1000;
constexpr long kAc3MaxUnits = 2;
constexpr long kAc4SlackUnits = 2;
constexpr std::size_t kAc5Corpora = 200;
constexpr std::size_t kAc5MinPlanted = 500;
constexpr double kAc5MaxSeconds = 30.0;
constexpr double kAc6MaxSeconds = 60.0;
constexpr double kAc6MaxSameBlockShare = 0.01;
constexpr double kAc7QTolerance = 0.02;
constexpr double kAc7RateTolerance = 0.005; // 0.5 percentage points
constexpr std::size_t kAc8Pairs = 316809;
constexpr std::size_t kAc8SameBlock = 269;
constexpr double kAc8ProfitUsd = 5273857.0;
constexpr double kAc8ProfitRelTol = 0.02;
constexpr double kAc8GasShare = 0.9956;
constexpr double kAc8GasShareTol = 0.0005;
constexpr std::size_t kAc8ZeroGas = 31311;

const std::string kConfigs = XSW_SOURCE_DIR "/configs";

int failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << id << " " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int places) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(places);
    os << v;
    return os.str();
}

sim::SimConfig load_config(const std::string& name) {
    io::Json doc = io::read_json_file(kConfigs + "/" + name);
    doc.erase("detection");
    return io::sim_config_from_json(doc);
}

oracle::PoolState ostate(const Pool& p) { return {to_big(p.reserve_x), to_big(p.reserve_y), BigInt(p.fee.num), BigInt(p.fee.den)}; }

Pool random_pool(std::mt19937_64& rng, bool zero_fee) {
    static const std::uint64_t fees[] = {0, 5, 30, 100};
    std::uniform_real_distribution<double> e10(3.0, 18.0);
    Pool p;
    p.token_x = "X";
    p.token_y = "Y";
    p.reserve_x = to_amount(BigInt(static_cast<unsigned long long>(std::pow(10.0, e10(rng)))));
    p.reserve_y = to_amount(BigInt(static_cast<unsigned long long>(std::pow(10.0, e10(rng)))));
    p.fee = FeeRate::bps(zero_fee ? 0 : fees[rng() % 4]);
    return p;
}

BigInt victim_size(std::mt19937_64& rng, const Pool& p) {
    // Fraction of the input reserve, log-uniform over 1e-6 .. 1e-1.
    double frac = std::pow(10.0, std::uniform_real_distribution<double>(-6.0, -1.0)(rng));
    BigInt v(static_cast<unsigned long long>(std::floor(to_big(p.reserve_x).convert_to<double>() * frac)));
    return v < 1 ? BigInt(1) : v;
}

std::string capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return out;
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    ::pclose(pipe);
    return out;
}

// ---- AC1 ------------------------------------------------------------------------

void ac1() {
    auto t0 = std::chrono::steady_clock::now();
    std::string out = capture(std::string("\"") + XSW_CLI + "\" params --q 0.57 --p 0.68 --r-plus 0.045 --r-minus -0.047");
    double s = seconds_since(t0);
    bool er = out.find("E(r)=3.2341%") != std::string::npos;
    bool su = out.find("success=86.24%") != std::string::npos;
    report(er && su && s < kAc1MaxSeconds, "AC1",
           std::string("params printed E(r)=3.2341%: ") + (er ? "yes" : "no") + ", success=86.24%: " + (su ? "yes" : "no") + ", " +
               fmt(s, 3) + " s (limit " + fmt(kAc1MaxSeconds, 1) + " s)");
}

// ---- AC2 ------------------------------------------------------------------------

void ac2() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2002);
    std::size_t cases = 0, ok = 0;
    std::string first_bad;
    while (cases < kAc2Pools) {
        Pool p = random_pool(rng, false);
        BigInt v = victim_size(rng, p);
        // s_v in [0.1%, 5%] at 0.1 bp resolution.
        SlippageTolerance s(10 + rng() % 491, 10000);
        ExtractionFraction theta = rng() % 2 ? ExtractionFraction(1, 1) : ExtractionFraction(1, 2);
        auto st = ostate(p);
        BigInt quote = oracle::quote_bisect(st, v);
        if (quote == 0) continue;
        ++cases;
        BigInt target = oracle::min_out(quote, s.value() * theta.value());
        BigInt a = to_big(optimal_frontrun_input(p, to_amount(v), s, theta));
        bool executes = oracle::victim_out(st, a, v) >= target;
        bool maximal = oracle::victim_out(st, a + 1, v) < target;
        bool equal = a == oracle::frontrun_bisect(st, v, target);
        if (executes && maximal && equal)
            ++ok;
        else if (first_bad.empty())
            first_bad = " first failure: reserves " + to_string(p.reserve_x) + "/" + to_string(p.reserve_y) + " victim " + v.str();
    }
    double sec = seconds_since(t0);
    report(ok == cases && sec < kAc2MaxSeconds, "AC2",
           std::to_string(ok) + "/" + std::to_string(cases) + " pools maximal and equal to bisection, " + fmt(sec, 2) + " s (limit " +
               fmt(kAc2MaxSeconds, 0) + " s)" + first_bad);
}

// ---- AC3 and AC4 ----------------------------------------------------------------
//
// Every floored Y amount costs up to x0/y0 base units of X, so the fixed 2-unit window
// applies to pools where one Y unit is worth at most one X unit (y0 >= x0). Pools of
// the other orientation are checked against 2 + 2*ceil(x0/y0) units instead.

struct ClosedFormStats {
    std::size_t cases = 0, closed_ok = 0, loose_ok = 0, tight_ok = 0, small_cases = 0, small_tight = 0;
    BigInt worst = 0;
};

ClosedFormStats closed_form_run(std::uint64_t seed, bool fine_output_unit) {
    std::mt19937_64 rng(seed);
    ClosedFormStats st;
    while (st.cases < kAc3Instances) {
        Pool p = random_pool(rng, true);
        if (fine_output_unit && p.reserve_y < p.reserve_x) std::swap(p.reserve_x, p.reserve_y);
        BigInt v = victim_size(rng, p);
        SlippageTolerance s(10 + rng() % 491, 10000);
        TokenAmount gas(rng() % 1000);
        SwapRequest victim{Direction::XforY, to_amount(v), TokenAmount(0), {}, {}};
        SandwichPlan plan = plan_sandwich(p, victim, s, ExtractionFraction(1, 1), gas);
        if (plan.victim_quote == 0 || plan.frontrun_in == 0) continue;
        ++st.cases;

        const BigInt x0 = to_big(p.reserve_x), y0 = to_big(p.reserve_y), k = x0 * y0;
        const BigInt unit = fine_output_unit ? BigInt(0) : 2 * ceil_div(x0, y0);
        const BigInt closed = (x0 + v) - ceil_div(k, y0 - to_big(plan.victim_min_out)) - to_big(gas);
        BigInt err = mp::abs(plan.profit - closed);
        if (err > st.worst) st.worst = err;
        if (err <= kAc3MaxUnits + unit) ++st.closed_ok;

        const Rational extracted(plan.profit + to_big(gas));
        const Rational sdx = s.value() * Rational(v);
        if (extracted <= sdx * Rational(x0 + v, x0) + kAc4SlackUnits + unit) ++st.loose_ok;
        bool tight = extracted <= sdx;
        if (tight) ++st.tight_ok;
        if (Rational(v, x0) < Rational(1, 10000)) {
            ++st.small_cases;
            if (tight) ++st.small_tight;
        }
    }
    return st;
}

void ac3_ac4() {
    ClosedFormStats a = closed_form_run(3003, true);
    ClosedFormStats b = closed_form_run(3004, false);
    auto frac = [](std::size_t n, std::size_t d) { return std::to_string(n) + "/" + std::to_string(d); };
    auto pct = [](std::size_t n, std::size_t d) {
        return d ? fmt(100.0 * static_cast<double>(n) / static_cast<double>(d), 1) + "%" : std::string("n/a");
    };
    report(a.closed_ok == a.cases && b.closed_ok == b.cases, "AC3",
           frac(a.closed_ok, a.cases) + " replays within " + std::to_string(kAc3MaxUnits) + " units of the f=0 closed form on pools with y0 >= x0 (worst " +
               a.worst.str() + "); " + frac(b.closed_ok, b.cases) + " unrestricted pools within " + std::to_string(kAc3MaxUnits) +
               " + 2*ceil(x0/y0) units");
    report(a.loose_ok == a.cases && b.loose_ok == b.cases, "AC4",
           frac(a.loose_ok, a.cases) + " satisfy P+G_c <= s_v*dx_v*(x0+dx_v)/x0 + " + std::to_string(kAc4SlackUnits) + " (y0 >= x0), " +
               frac(b.loose_ok, b.cases) + " unrestricted with the price-scaled slack; tighter s_v*dx_v bound holds in " +
               pct(a.tight_ok, a.cases) + " overall and " + pct(a.small_tight, a.small_cases) + " of " + std::to_string(a.small_cases) +
               " cases with dx_v/x0 < 1e-4");
}

// ---- AC5 ------------------------------------------------------------------------

void ac5() {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t equal = 0, pairs = 0;
    for (std::uint64_t i = 0; i < kAc5Corpora; ++i) {
        auto c = oracle::synthetic_corpus(50000 + i);
        DetectionConfig cfg;
        cfg.num = 1 + i % 6;
        auto got_pairs = detect_all(c.records, LogIndex(c.logs), cfg);
        std::vector<oracle::PairKey> got;
        for (const auto& p : got_pairs)
            got.emplace_back(p.record_id, p.hop_index, p.front.tx_hash.hex(), p.front.log_index, p.back.tx_hash.hex(), p.back.log_index);
        std::sort(got.begin(), got.end());
        if (got == oracle::detect_brute(c.records, c.logs, cfg.num, {})) ++equal;
        pairs += got.size();
    }
    sim::SimConfig cfg = load_config("ordering_stress.json");
    cfg.seed = 505;
    auto run = sim::run(cfg);
    double sec = seconds_since(t0);
    const auto& m = run.metrics;
    bool ok = equal == kAc5Corpora && m.planted_in_scope >= kAc5MinPlanted && m.planted_recovered == m.planted_in_scope &&
              sec < kAc5MaxSeconds;
    report(ok, "AC5",
           std::to_string(equal) + "/" + std::to_string(kAc5Corpora) + " synthetic corpora equal the enumeration oracle (" +
               std::to_string(pairs) + " pairs); simulator recall " + std::to_string(m.planted_recovered) + "/" +
               std::to_string(m.planted_in_scope) + " planted attacks; " + fmt(sec, 2) + " s (limit " + fmt(kAc5MaxSeconds, 0) + " s)");
}

// ---- AC6 ------------------------------------------------------------------------

void ac6() {
    auto t0 = std::chrono::steady_clock::now();
    auto stress = sim::run(load_config("ordering_stress.json"));
    auto calibrated = sim::run(load_config("calibrated.json"));
    double sec = seconds_since(t0);
    auto share = [](const sim::SimMetrics& m) {
        return m.detected_pairs ? static_cast<double>(m.single_chain_pairs) / static_cast<double>(m.detected_pairs) : 0.0;
    };
    const auto& a = stress.metrics;
    const auto& b = calibrated.metrics;
    bool order_a = a.contested > 0 && a.contested_front_earlier_block == a.contested;
    bool order_b = b.contested_front_earlier_block == b.contested;
    bool same_b = share(b) < kAc6MaxSameBlockShare;
    report(order_a && order_b && same_b && sec < kAc6MaxSeconds, "AC6",
           "TA1 block < TB1 block in " + std::to_string(a.contested_front_earlier_block) + "/" + std::to_string(a.contested) +
               " contested cases (zero-cost bot) and " + std::to_string(b.contested_front_earlier_block) + "/" +
               std::to_string(b.contested) + " (calibrated); calibrated same-block share " + fmt(100.0 * share(b), 3) + "% of " +
               std::to_string(b.detected_pairs) + " pairs (limit " + fmt(100.0 * kAc6MaxSameBlockShare, 0) +
               "%), zero-cost bot share " + fmt(100.0 * share(a), 1) + "%; " + fmt(sec, 2) + " s (limit " + fmt(kAc6MaxSeconds, 0) + " s)");
}

// ---- AC7 ------------------------------------------------------------------------

void ac7() {
    sim::SimConfig cfg = load_config("fixed_delay.json");
    auto run = sim::run(cfg);
    const auto& trace = run.trace;
    const double interval = cfg.destination.block_interval, offset = cfg.destination.block_offset;
    const double lambda = cfg.noise_arrival_rate;

    // Noise that can land between the commit and T_v arrives after the last destination
    // block at or before the commit and before the block preceding T_v's.
    double analytic = 0;
    std::size_t windows = 0;
    for (const auto& v : trace.victims) {
        if (v.tv == sim::kNone) continue;
        const double tc = trace.events[v.commit_event].time;
        const double last_block = offset + interval * std::floor((tc - offset) / interval);
        const double tv_block = offset + interval * static_cast<double>(trace.txs[v.tv].block);
        const double w = std::max(0.0, (tv_block - interval) - last_block);
        analytic += std::exp(-lambda * w);
        ++windows;
    }
    analytic /= static_cast<double>(windows);

    const auto& est = *run.metrics.noise;
    const double q = to_double(est.q);
    const double p = est.p ? to_double(*est.p) : 1.0;
    ReturnRates rr = estimate_return_rates(run.metrics.attacker_rates, 100);
    const double eq = to_double(expected_profit_rate(NoiseParams{est.q, est.p.value_or(Rational(1))}, rr));
    double mc = 0;
    for (const auto& r : run.metrics.attacker_rates) mc += to_double(r);
    mc /= static_cast<double>(run.metrics.attacker_rates.size());

    bool q_ok = std::abs(q - analytic) <= kAc7QTolerance;
    bool e_ok = std::abs(mc - eq) <= kAc7RateTolerance;
    report(q_ok && e_ok, "AC7",
           "q=" + fmt(q, 4) + " vs analytic " + fmt(analytic, 4) + " over " + std::to_string(windows) + " windows (tol " +
               fmt(kAc7QTolerance, 2) + "); p=" + fmt(p, 4) + " r+=" + fmt(to_double(rr.r_plus), 5) + " r-=" + fmt(to_double(rr.r_minus), 5) +
               "; mean realized rate " + fmt(100.0 * mc, 4) + "% vs expected " + fmt(100.0 * eq, 4) + "% over " +
               std::to_string(run.metrics.attacker_rates.size()) + " attacks (tol " + fmt(100.0 * kAc7RateTolerance, 1) + " pp)");
}

// ---- AC8 ------------------------------------------------------------------------

void ac8() {
    const char* dir = std::getenv("XSW_DATASET_DIR");
    if (!dir || !*dir) {
        std::cout << "SKIP AC8 dataset reproduction not run: XSW_DATASET_DIR is unset; criteria AC1-AC7 are the full acceptance" << std::endl;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path root(dir);
    auto records = io::read_records((root / "records.jsonl").string());
    auto logs = io::read_swap_logs((root / "logs.jsonl").string());
    auto prices = io::parse_price_table(io::read_file((root / "prices.csv").string()), "prices.csv");
    DetectionConfig cfg;
    auto pairs = detect_all(prefilter(records, cfg), LogIndex(std::move(logs)), cfg);
    auto priced = classify_and_price(std::move(pairs), prices).pairs;
    Report r = aggregate(priced, records, prices, cfg.num);
    const double profit = to_double(r.cross_chain.profit_usd + r.single_chain.profit_usd);
    const double gas_share = r.gas.pairs ? static_cast<double>(r.gas.front_below_victim) / static_cast<double>(r.gas.pairs) : 0.0;
    bool ok = r.total_pairs == kAc8Pairs && r.single_chain.pairs == kAc8SameBlock &&
              std::abs(profit - kAc8ProfitUsd) <= kAc8ProfitRelTol * kAc8ProfitUsd && std::abs(gas_share - kAc8GasShare) <= kAc8GasShareTol &&
              r.gas.zero_gas_front == kAc8ZeroGas;
    report(ok, "AC8",
           "pairs=" + std::to_string(r.total_pairs) + " same_block=" + std::to_string(r.single_chain.pairs) + " profit_usd=" + fmt(profit, 0) +
               " front_gas_below_victim=" + fmt(100.0 * gas_share, 2) + "% zero_gas_fronts=" + std::to_string(r.gas.zero_gas_front));
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3/AC4", ac3_ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
    for (const auto& [id, fn] : criteria) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(false, id, std::string("raised: ") + e.what());
        }
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: " + std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
