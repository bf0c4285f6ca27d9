#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "xsw/attack_model.hpp"
#include "xsw/detector.hpp"
#include "xsw/sim/corpus.hpp"
#include "xsw/sim/simulator.hpp"

namespace xsw::sim {

struct SimMetrics {
    std::size_t victims = 0;
    std::size_t committed = 0;
    std::size_t executed = 0;
    std::size_t reverted = 0;
    std::size_t no_quorum = 0;
    std::size_t dropped_at_horizon = 0;

    std::size_t attacks_submitted = 0;
    std::size_t attacks_completed = 0;
    std::size_t bot_attacks = 0;
    std::array<std::size_t, kScenarioCount> scenarios{};

    // Contested: both the attacker's TA1 and a bot TB1 aimed at T_v executed.
    std::size_t contested = 0;
    std::size_t contested_front_earlier_block = 0;
    std::size_t contested_front_earlier_order = 0;

    std::optional<NoiseEstimate> noise;
    std::vector<Rational> attacker_rates; // (TA2 out - TA1 in) / TA1 in, completed attacks
    std::vector<Rational> bot_rates;

    std::size_t detected_pairs = 0;
    std::size_t single_chain_pairs = 0;
    std::size_t planted_in_scope = 0; // planted attacks whose record passes the prefilter
    std::size_t planted_recovered = 0;
};

/// Same-pool label sequence of one victim in execution order. A bot bracket on T_v
/// takes precedence over one on the attacker's TA1.
inline std::vector<TxLabel> victim_labels(const SimTrace& trace, const VictimInfo& v,
                                          const std::vector<std::vector<std::uint64_t>>& bot_by_target) {
    struct Item {
        std::uint64_t seq;
        TxRole role;
    };
    std::vector<Item> items;
    auto add = [&](std::uint64_t id, TxRole role) {
        if (id == kNone) return;
        const DstTx& tx = trace.txs[id];
        if (tx.status == TxStatus::Executed || (role == TxRole::Tv && tx.status == TxStatus::Reverted))
            items.push_back(Item{tx.exec_seq, role});
    };
    add(v.tv, TxRole::Tv);
    add(v.ta1, TxRole::TA1);
    add(v.ta2, TxRole::TA2);
    auto bracket = [&](std::uint64_t target) -> bool {
        if (target == kNone || target >= bot_by_target.size()) return false;
        bool any = false;
        for (std::uint64_t id : bot_by_target[target]) {
            const DstTx& tx = trace.txs[id];
            if (tx.status != TxStatus::Executed) continue;
            add(id, tx.role);
            any = true;
        }
        return any;
    };
    if (!bracket(v.tv)) bracket(v.ta1);
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.seq < b.seq; });
    std::vector<TxLabel> labels{TxLabel{TxRole::Ts, 0}};
    for (const auto& it : items) labels.push_back(TxLabel{it.role, 0});
    return labels;
}

inline Rational realized_rate(const DstTx& front, const DstTx& back) {
    return Rational(to_big(back.amounts_out.front()) - to_big(front.amounts_in.front()), to_big(front.amounts_in.front()));
}

inline SimMetrics compute_metrics(const SimTrace& trace, const Corpus& corpus, const SimConfig& cfg,
                                  const DetectionConfig& dcfg = {}) {
    SimMetrics m;
    m.victims = trace.victims.size();

    std::vector<std::vector<std::uint64_t>> bot_by_target(trace.txs.size());
    for (const auto& tx : trace.txs)
        if (tx.agent == AgentKind::Bot && tx.target != kNone) bot_by_target[tx.target].push_back(tx.id);

    for (const auto& v : trace.victims) {
        if (v.committed) ++m.committed;
        switch (v.fate) {
        case VictimFate::Executed: ++m.executed; break;
        case VictimFate::Reverted: ++m.reverted; break;
        case VictimFate::NoQuorum: ++m.no_quorum; break;
        default: ++m.dropped_at_horizon; break;
        }
        if (v.ta1 != kNone) ++m.attacks_submitted;
        if (v.fate == VictimFate::Executed || v.fate == VictimFate::Reverted) {
            ++m.scenarios[static_cast<std::size_t>(classify_ordering(victim_labels(trace, v, bot_by_target)))];
        }

        const DstTx* ta1 = v.ta1 == kNone ? nullptr : &trace.txs[v.ta1];
        if (ta1 && ta1->status == TxStatus::Executed && v.ta2 != kNone) {
            const DstTx& ta2 = trace.txs[v.ta2];
            if (ta2.status == TxStatus::Executed) {
                ++m.attacks_completed;
                m.attacker_rates.push_back(realized_rate(*ta1, ta2));
            }
        }
        if (ta1 && ta1->status == TxStatus::Executed && v.tv != kNone) {
            for (std::uint64_t id : bot_by_target[v.tv]) {
                const DstTx& b = trace.txs[id];
                if (b.role != TxRole::TB1 || b.status != TxStatus::Executed) continue;
                ++m.contested;
                if (ta1->block < b.block) ++m.contested_front_earlier_block;
                if (ta1->exec_seq < b.exec_seq) ++m.contested_front_earlier_order;
            }
        }
    }
    for (const auto& tx : trace.txs) {
        if (tx.role == TxRole::TB1 && tx.status == TxStatus::Executed) ++m.bot_attacks;
        if (tx.role == TxRole::TB2 && tx.status == TxStatus::Executed) m.bot_rates.push_back(realized_rate(trace.txs[tx.link], tx));
    }

    if (!corpus.timelines.empty()) m.noise = estimate_noise_params(corpus.timelines, cfg.attacker.theta);

    auto kept = prefilter(corpus.records, dcfg);
    LogIndex index(corpus.logs);
    auto pairs = detect_all(kept, index, dcfg);
    m.detected_pairs = pairs.size();
    for (const auto& p : pairs)
        if (p.classification == PairClass::SingleChain) ++m.single_chain_pairs;

    std::set<std::uint64_t> in_scope;
    for (const auto& r : kept) in_scope.insert(r.id);
    std::set<std::pair<Hash32, Hash32>> found;
    for (const auto& p : pairs) found.emplace(p.front.tx_hash, p.back.tx_hash);
    for (const auto& t : corpus.truth) {
        if (!in_scope.count(t.victim)) continue;
        ++m.planted_in_scope;
        if (found.count({t.front, t.back})) ++m.planted_recovered;
    }
    return m;
}

struct SimResult {
    SimTrace trace;
    Corpus corpus;
    SimMetrics metrics;
};

inline SimResult run(const SimConfig& cfg, const DetectionConfig& dcfg = {}) {
    SimResult r;
    r.trace = simulate(cfg);
    r.corpus = extract_corpus(r.trace);
    r.metrics = compute_metrics(r.trace, r.corpus, cfg, dcfg);
    return r;
}

} // namespace xsw::sim
