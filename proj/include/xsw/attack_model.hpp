#pragma once

// Decision model of the cross-chain attacker: ordering scenarios, the noisy
// transaction window between front-run and victim, and the expected-profit
// identity built from the empirical parameters (q, p, r+, r-).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "xsw/amm.hpp"
#include "xsw/core/error.hpp"
#include "xsw/core/numeric.hpp"

namespace xsw {

/// q: probability of an empty noise window. p: probability of no loss given a non-empty one.
struct NoiseParams {
    Rational q;
    Rational p;

    void validate() const {
        if (q < 0 || q > 1 || p < 0 || p > 1) throw Error(ErrorCode::InvalidArgument, "q and p must lie in [0, 1]");
    }
};

struct ReturnRates {
    Rational r_plus;
    Rational r_minus;

    void validate() const {
        if (r_plus < 0 || r_minus > 0) throw Error(ErrorCode::InvalidArgument, "need r_plus >= 0 >= r_minus");
    }
};

inline Rational success_probability(const NoiseParams& params) {
    params.validate();
    return params.q + (1 - params.q) * params.p;
}

/// E(r) = (q + (1-q)p) r+ + (1-q)(1-p) r-
inline Rational expected_profit_rate(const NoiseParams& params, const ReturnRates& rates) {
    params.validate();
    rates.validate();
    return success_probability(params) * rates.r_plus + (1 - params.q) * (1 - params.p) * rates.r_minus;
}

/// Expected profit of a front-run of `frontrun_in`, in the front-run's token.
inline Rational expected_profit(const TokenAmount& frontrun_in, const NoiseParams& params, const ReturnRates& rates) {
    return Rational(to_big(frontrun_in)) * expected_profit_rate(params, rates);
}

enum class TxRole { Ts, TA1, TA2, Tv, TB1, TB2, Noise };

struct TxLabel {
    TxRole role = TxRole::Noise;
    std::size_t index = 0; // only meaningful for Noise

    friend bool operator==(const TxLabel&, const TxLabel&) = default;
};

enum class OrderingScenario {
    NoAttack,
    SingleChainOnly,
    CrossChainNoBot,
    CrossWinsBackrunRace,
    CrossLosesBackrunRace,
    AttackerSandwiched,
};

constexpr std::string_view to_string(OrderingScenario s) noexcept {
    switch (s) {
    case OrderingScenario::NoAttack: return "no_attack";
    case OrderingScenario::SingleChainOnly: return "single_chain_only";
    case OrderingScenario::CrossChainNoBot: return "cross_chain_no_bot";
    case OrderingScenario::CrossWinsBackrunRace: return "cross_wins_backrun_race";
    case OrderingScenario::CrossLosesBackrunRace: return "cross_loses_backrun_race";
    case OrderingScenario::AttackerSandwiched: return "attacker_sandwiched";
    }
    return "unknown";
}

inline constexpr std::size_t kScenarioCount = 6;

/// Scenario of a label sequence. Noise and Ts labels never affect the result.
inline OrderingScenario classify_ordering(std::span<const TxLabel> seq) {
    std::optional<std::size_t> pos[6];
    for (std::size_t i = 0; i < seq.size(); ++i) {
        TxRole r = seq[i].role;
        if (r == TxRole::Noise) continue;
        auto& slot = pos[static_cast<int>(r)];
        if (slot) throw Error(ErrorCode::MalformedSequence, "duplicate non-noise label");
        slot = i;
    }
    const auto& ta1 = pos[static_cast<int>(TxRole::TA1)];
    const auto& ta2 = pos[static_cast<int>(TxRole::TA2)];
    const auto& tb1 = pos[static_cast<int>(TxRole::TB1)];
    const auto& tb2 = pos[static_cast<int>(TxRole::TB2)];
    if (ta1 && ta2 && *ta2 < *ta1) throw Error(ErrorCode::MalformedSequence, "TA2 precedes TA1");
    if (tb1 && tb2 && *tb2 < *tb1) throw Error(ErrorCode::MalformedSequence, "TB2 precedes TB1");

    const bool attacker = ta1 || ta2;
    const bool bot = tb1 || tb2;
    if (!attacker && !bot) return OrderingScenario::NoAttack;
    if (!attacker) return OrderingScenario::SingleChainOnly;
    if (ta1 && tb1 && tb2 && *tb1 < *ta1 && *ta1 < *tb2) return OrderingScenario::AttackerSandwiched;
    if (!bot) return OrderingScenario::CrossChainNoBot;
    if (tb2 && (!ta2 || *tb2 < *ta2)) return OrderingScenario::CrossLosesBackrunRace;
    return OrderingScenario::CrossWinsBackrunRace;
}

struct NoisySwap {
    Direction direction = Direction::XforY;
    TokenAmount amount_in;

    friend bool operator==(const NoisySwap&, const NoisySwap&) = default;
};

/// Pool snapshot when the source-chain event was seen, the third-party swaps that
/// hit the pool before the victim, and the victim with its frozen minimum.
struct PoolTimeline {
    std::uint64_t victim_id = 0;
    Pool pool;
    std::vector<NoisySwap> noisy_swaps;
    SwapRequest victim;
    SlippageTolerance slippage;
};

struct ReplayResult {
    bool victim_executed = false;
    TokenAmount frontrun_out;
    TokenAmount victim_out;
    TokenAmount backrun_out;
};

/// Front-run, every noisy swap, the victim (respecting min_out), then the back-run of
/// the front-run output. The back-run is submitted whether or not the victim executed.
inline ReplayResult replay_timeline(const PoolTimeline& tl, const TokenAmount& frontrun_in) {
    const Direction d = tl.victim.direction;
    Pool state = tl.pool;
    ReplayResult r;
    if (frontrun_in > 0) {
        auto [next, out] = apply_swap(state, d, frontrun_in);
        state = std::move(next);
        r.frontrun_out = out;
    }
    for (const auto& noise : tl.noisy_swaps) {
        if (noise.amount_in == 0) continue;
        state = apply_swap(state, noise.direction, noise.amount_in).first;
    }
    SwapOutcome victim = execute_swap(state, tl.victim);
    r.victim_executed = !victim.reverted;
    r.victim_out = victim.amount_out;
    state = victim.pool_after;
    r.backrun_out = backrun_output(state, r.frontrun_out, d);
    return r;
}

/// The front-run an attacker would place at snapshot time: spend theta of the buffer
/// between the snapshot quote and the victim's frozen min_out.
inline TokenAmount hypothetical_frontrun(const PoolTimeline& tl, const ExtractionFraction& theta) {
    TokenAmount quote = quote_output(tl.pool, tl.victim.direction, tl.victim.amount_in);
    if (tl.victim.min_out == 0 || quote <= tl.victim.min_out) return TokenAmount(0);
    TokenAmount target = buffer_target(quote, tl.victim.min_out, theta);
    return max_frontrun_for_min_out(tl.pool, tl.victim.direction, tl.victim.amount_in, target);
}

struct NoiseEstimate {
    Rational q;
    std::optional<Rational> p; // empty when no timeline had both noise and room to attack
    std::size_t timelines = 0;
    std::size_t empty = 0;
    std::size_t with_noise = 0;
    std::size_t with_noise_no_room = 0;
    std::size_t non_loss = 0;

    NoiseParams params() const { return NoiseParams{q, p.value_or(Rational(1))}; }
};

/// q over all timelines; p over noisy timelines where the hypothetical front-run is
/// positive, counting victim execution with back-run output >= front-run input.
inline NoiseEstimate estimate_noise_params(std::span<const PoolTimeline> timelines, const ExtractionFraction& theta) {
    if (timelines.empty()) throw Error(ErrorCode::EmptyInput, "no timelines");
    NoiseEstimate est;
    est.timelines = timelines.size();
    std::size_t scored = 0;
    for (const auto& tl : timelines) {
        if (tl.noisy_swaps.empty()) {
            ++est.empty;
            continue;
        }
        ++est.with_noise;
        TokenAmount front = hypothetical_frontrun(tl, theta);
        if (front == 0) {
            ++est.with_noise_no_room;
            continue;
        }
        ++scored;
        ReplayResult r = replay_timeline(tl, front);
        if (r.victim_executed && r.backrun_out >= front) ++est.non_loss;
    }
    est.q = Rational(BigInt(est.empty), BigInt(est.timelines));
    if (scored > 0) est.p = Rational(BigInt(est.non_loss), BigInt(scored));
    return est;
}

namespace detail {

// Rates are summed on a 10^-18 grid: exact sums of unrelated denominators grow without bound.
inline const BigInt& rate_scale() {
    static const BigInt s = mp::pow(BigInt(10), 18);
    return s;
}

inline Rational trimmed_mean_by_magnitude(std::vector<Rational> values, const Rational& percentile) {
    if (values.empty()) return Rational(0);
    std::sort(values.begin(), values.end(), [](const Rational& a, const Rational& b) { return mp::abs(a) < mp::abs(b); });
    // Nearest-rank percentile of |rate|; values strictly beyond it are discarded.
    BigInt rank = ceil_rational(percentile * values.size() / 100);
    if (rank < 1) rank = 1;
    std::size_t keep_index = std::min<std::size_t>(rank.convert_to<std::size_t>(), values.size()) - 1;
    Rational threshold = mp::abs(values[keep_index]);
    BigInt sum = 0;
    std::size_t kept = 0;
    for (const auto& v : values) {
        if (mp::abs(v) > threshold) break;
        sum += floor_rational(v * rate_scale() + Rational(1, 2));
        ++kept;
    }
    return Rational(sum, rate_scale() * kept);
}

} // namespace detail

/// Sign-conditioned means with a |rate| percentile trim per class. Zero rates belong
/// to the non-negative class, matching the non-loss convention used for p.
inline ReturnRates estimate_return_rates(std::span<const Rational> rates, const Rational& percentile) {
    if (rates.empty()) throw Error(ErrorCode::EmptyInput, "no profit rates");
    if (percentile <= 0 || percentile > 100) throw Error(ErrorCode::InvalidArgument, "percentile must be in (0, 100]");
    std::vector<Rational> plus, minus;
    for (const auto& r : rates) (r >= 0 ? plus : minus).push_back(r);
    return ReturnRates{detail::trimmed_mean_by_magnitude(std::move(plus), percentile),
                       detail::trimmed_mean_by_magnitude(std::move(minus), percentile)};
}

} // namespace xsw
