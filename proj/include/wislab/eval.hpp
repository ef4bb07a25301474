#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wislab/classifier.hpp"
#include "wislab/dsp.hpp"
#include "wislab/ofdma.hpp"
#include "wislab/types.hpp"

namespace wislab {

/// One recording session: a scene realization of `label` observed for
/// `duration_s`. campaign_index numbers the sessions of a class 0..n-1.
struct Campaign {
    std::string id;
    ActivityClass label = ActivityClass::Empty;
    int campaign_index = 0;
    double duration_s = 0.0;
    std::uint64_t seed = 0;
};

/// Supplies the CFR tensor for a campaign (simulation or capture replay).
using TensorProvider = std::function<CfrTensor(const Campaign&)>;

/// Standard roster: n_per_class sessions of every activity class. Session
/// seeds derive from (class, index) only, so the roster is stable across
/// durations and evaluation settings.
std::vector<Campaign> make_campaigns(int n_per_class, double duration_s, std::uint64_t seed);

/// One cross-validation assignment: per class, campaigns `train` are fit,
/// `val` picks the early-stop epoch, `test` is scored.
struct EvalSet {
    std::array<int, 2> train{};
    int val = 0;
    int test = 0;
    int round = 1;  // 1-based re-initialization round
    std::uint64_t train_seed = 0;
};

/// Leave-one-session-out protocol over exactly four campaigns per class:
/// every (test, val) pair with val != test, repeated n_rounds times with
/// fresh training seeds. Ordering: rounds outer, then test ascending, then
/// val ascending. train_seed depends only on (master seed, round, test, val).
std::vector<EvalSet> make_splits(int n_campaigns, int n_rounds, std::uint64_t master_seed);

struct Metrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

/// Accuracy and macro-averaged F1. Classes absent from both truth and
/// prediction are excluded from the macro average; a class with zero F1
/// denominator contributes zero.
Metrics compute_metrics(const std::vector<ActivityClass>& truth,
                        const std::vector<ActivityClass>& predicted);

struct Percentiles {
    double median = 0.0;
    double p25 = 0.0;
    double p75 = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
};

/// Linear-interpolation percentiles of `values` (position (n-1)*q).
Percentiles summarize(std::vector<double> values);

/// Score of one evaluation set. confusion[truth][predicted] counts test
/// examples.
struct SetResult {
    int round = 1;
    int test_campaign = 0;
    int val_campaign = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::array<std::array<std::uint32_t, kNumClasses>, kNumClasses> confusion{};
};

struct ConfigReport {
    std::string label;
    std::vector<SetResult> sets;
    Percentiles accuracy_pct;
    Percentiles macro_f1_pct;
};

struct SweepOptions {
    DopplerConfig doppler;
    std::size_t n_vectors = 256;  // Doppler vectors pooled per classifier input
    TrainHyper hyper;
    int n_rounds = 9;
    std::uint64_t eval_seed = 1;
    int threads = 0;
};

/// Featurized campaign: the classifier examples one session yields under one
/// front-end configuration.
struct CampaignFeatures {
    ActivityClass label = ActivityClass::Empty;
    int campaign_index = 0;
    std::vector<std::vector<double>> features;

    std::string label_str() const;
};

/// Runs the full cross-validation protocol for one configuration over
/// pre-extracted features.
ConfigReport evaluate_config(const std::string& label,
                             const std::vector<CampaignFeatures>& campaigns,
                             const SweepOptions& options);

/// Subband sweep: each campaign tensor is loaded once, sliced to every
/// requested resource unit, phase-sanitized, reduced to Doppler features, and
/// scored under the shared protocol. Report order follows `rus`.
std::vector<ConfigReport> sweep_ru(const std::vector<Campaign>& campaigns,
                                   const TensorProvider& provider, const std::vector<RuId>& rus,
                                   const SweepOptions& options);

/// Temporal subsampling sweep on the full channel: keep every k-th snapshot
/// before the Doppler transform. Pooling shrinks with k (n_vectors / k) so
/// every configuration spans the same observation time. Labels are
/// "k{k}-N{pool}".
std::vector<ConfigReport> sweep_sampling(const std::vector<Campaign>& campaigns,
                                         const TensorProvider& provider,
                                         const std::vector<int>& factors,
                                         const SweepOptions& options);

/// Per-set rows: header config_label,round,test_campaign,accuracy,macro_f1.
void write_results_csv(const std::string& path, const std::vector<ConfigReport>& reports);

/// Percentile summary per configuration, array order preserved.
void write_summary_json(const std::string& path, const std::vector<ConfigReport>& reports);

}  // namespace wislab
