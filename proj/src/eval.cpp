#include "wislab/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "wislab/errors.hpp"
#include "wislab/rng.hpp"

namespace wislab {

namespace {

constexpr int kSessionsPerClass = 4;

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted.front();
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<std::vector<double>> features_for_tensor(const CfrTensor& sanitized,
                                                     const DopplerConfig& cfg, int subsample,
                                                     std::size_t n_vectors, int threads) {
    const auto stream = doppler_vector_stream(sanitized, cfg, subsample, threads);
    const auto inputs = stack_doppler_vectors(stream, n_vectors);
    std::vector<std::vector<double>> out;
    out.reserve(inputs.size());
    for (const auto& in : inputs) out.push_back(featurize(in).values);
    return out;
}

// Validates the 4-classes x 4-sessions roster and indexes it by (class, idx).
std::array<const CampaignFeatures*, kNumClasses * kSessionsPerClass> index_roster(
    const std::vector<CampaignFeatures>& campaigns) {
    std::array<const CampaignFeatures*, kNumClasses * kSessionsPerClass> slots{};
    for (const auto& c : campaigns) {
        if (c.campaign_index < 0 || c.campaign_index >= kSessionsPerClass) {
            throw UnsupportedProtocolError("campaign index " + std::to_string(c.campaign_index) +
                                           " outside the 4-session protocol");
        }
        auto& slot =
            slots[static_cast<std::size_t>(c.label) * kSessionsPerClass + c.campaign_index];
        if (slot != nullptr) {
            throw UnsupportedProtocolError(std::string("duplicate campaign ") +
                                           to_string(c.label) + "_" +
                                           std::to_string(c.campaign_index));
        }
        slot = &c;
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s] == nullptr) {
            throw UnsupportedProtocolError(
                std::string("missing campaign ") +
                to_string(static_cast<ActivityClass>(s / kSessionsPerClass)) + "_" +
                std::to_string(s % kSessionsPerClass));
        }
        if (slots[s]->features.empty()) {
            throw DegenerateDatasetError("campaign " + slots[s]->label_str() +
                                         " produced no classifier inputs");
        }
    }
    return slots;
}

}  // namespace

std::string CampaignFeatures::label_str() const {
    return std::string(to_string(label)) + "_" + std::to_string(campaign_index);
}

std::vector<Campaign> make_campaigns(int n_per_class, double duration_s, std::uint64_t seed) {
    if (n_per_class < 1) throw std::invalid_argument("n_per_class must be >= 1");
    if (!(duration_s > 0.0)) throw std::invalid_argument("duration_s must be > 0");
    std::vector<Campaign> out;
    out.reserve(static_cast<std::size_t>(n_per_class) * kNumClasses);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto label = static_cast<ActivityClass>(c);
        for (int idx = 0; idx < n_per_class; ++idx) {
            Campaign camp;
            camp.id = std::string(to_string(label)) + "_" + std::to_string(idx);
            camp.label = label;
            camp.campaign_index = idx;
            camp.duration_s = duration_s;
            camp.seed = derive_seed(seed, {static_cast<std::uint64_t>(c) + 1,
                                           static_cast<std::uint64_t>(idx) + 1});
            out.push_back(std::move(camp));
        }
    }
    return out;
}

std::vector<EvalSet> make_splits(int n_campaigns, int n_rounds, std::uint64_t master_seed) {
    if (n_campaigns != kSessionsPerClass) {
        throw UnsupportedProtocolError(
            "leave-one-session-out protocol is defined for 4 campaigns per class, got " +
            std::to_string(n_campaigns));
    }
    if (n_rounds < 1) throw std::invalid_argument("n_rounds must be >= 1");
    std::vector<EvalSet> out;
    out.reserve(static_cast<std::size_t>(n_rounds) * kSessionsPerClass * (kSessionsPerClass - 1));
    for (int round = 1; round <= n_rounds; ++round) {
        for (int test = 0; test < n_campaigns; ++test) {
            for (int val = 0; val < n_campaigns; ++val) {
                if (val == test) continue;
                EvalSet set;
                set.round = round;
                set.test = test;
                set.val = val;
                int slot = 0;
                for (int idx = 0; idx < n_campaigns; ++idx) {
                    if (idx != test && idx != val) set.train[slot++] = idx;
                }
                set.train_seed = derive_seed(
                    master_seed, {static_cast<std::uint64_t>(round),
                                  static_cast<std::uint64_t>(test), static_cast<std::uint64_t>(val)});
                out.push_back(set);
            }
        }
    }
    return out;
}

Metrics compute_metrics(const std::vector<ActivityClass>& truth,
                        const std::vector<ActivityClass>& predicted) {
    if (truth.empty() || truth.size() != predicted.size()) {
        throw std::invalid_argument("metrics need equal-length non-empty truth/prediction");
    }
    std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])]++;
        if (truth[i] == predicted[i]) ++hits;
    }
    Metrics m;
    m.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
    double f1_sum = 0.0;
    std::size_t included = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::size_t tp = counts[c][c];
        std::size_t fn = 0;
        std::size_t fp = 0;
        for (std::size_t o = 0; o < kNumClasses; ++o) {
            if (o == c) continue;
            fn += counts[c][o];
            fp += counts[o][c];
        }
        if (tp + fn + fp == 0) continue;  // class absent everywhere
        ++included;
        const std::size_t denom = 2 * tp + fp + fn;
        if (denom > 0) f1_sum += 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    }
    m.macro_f1 = included == 0 ? 0.0 : f1_sum / static_cast<double>(included);
    return m;
}

Percentiles summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize needs at least one value");
    std::sort(values.begin(), values.end());
    Percentiles p;
    p.median = percentile_sorted(values, 0.50);
    p.p25 = percentile_sorted(values, 0.25);
    p.p75 = percentile_sorted(values, 0.75);
    p.p5 = percentile_sorted(values, 0.05);
    p.p95 = percentile_sorted(values, 0.95);
    return p;
}

ConfigReport evaluate_config(const std::string& label,
                             const std::vector<CampaignFeatures>& campaigns,
                             const SweepOptions& options) {
    const auto slots = index_roster(campaigns);
    const auto splits = make_splits(kSessionsPerClass, options.n_rounds, options.eval_seed);

    ConfigReport report;
    report.label = label;
    report.sets.reserve(splits.size());
    for (const auto& split : splits) {
        Dataset train_set;
        Dataset val_set;
        std::vector<const CampaignFeatures*> test_campaigns;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            for (int idx = 0; idx < kSessionsPerClass; ++idx) {
                const CampaignFeatures* camp = slots[c * kSessionsPerClass + idx];
                Dataset* sink = nullptr;
                if (idx == split.train[0] || idx == split.train[1]) {
                    sink = &train_set;
                } else if (idx == split.val) {
                    sink = &val_set;
                } else {
                    test_campaigns.push_back(camp);
                    continue;
                }
                for (const auto& x : camp->features) {
                    sink->features.push_back(x);
                    sink->labels.push_back(camp->label);
                }
            }
        }

        TrainHyper hyper = options.hyper;
        hyper.seed = split.train_seed;
        const TrainReport trained = train(train_set, hyper, &val_set, options.n_vectors);

        std::vector<ActivityClass> truth;
        std::vector<ActivityClass> pred;
        SetResult result;
        result.round = split.round;
        result.test_campaign = split.test;
        result.val_campaign = split.val;
        for (const CampaignFeatures* camp : test_campaigns) {
            for (const auto& x : camp->features) {
                const Prediction p = predict(trained.model, x);
                truth.push_back(camp->label);
                pred.push_back(p.label);
                result.confusion[static_cast<std::size_t>(camp->label)]
                                [static_cast<std::size_t>(p.label)]++;
            }
        }
        const Metrics metrics = compute_metrics(truth, pred);
        result.accuracy = metrics.accuracy;
        result.macro_f1 = metrics.macro_f1;
        report.sets.push_back(result);
    }

    std::vector<double> acc;
    std::vector<double> f1;
    acc.reserve(report.sets.size());
    f1.reserve(report.sets.size());
    for (const auto& s : report.sets) {
        acc.push_back(s.accuracy);
        f1.push_back(s.macro_f1);
    }
    report.accuracy_pct = summarize(std::move(acc));
    report.macro_f1_pct = summarize(std::move(f1));
    return report;
}

std::vector<ConfigReport> sweep_ru(const std::vector<Campaign>& campaigns,
                                   const TensorProvider& provider, const std::vector<RuId>& rus,
                                   const SweepOptions& options) {
    if (rus.empty()) throw std::invalid_argument("subband sweep needs at least one resource unit");
    options.doppler.validate();

    std::vector<std::vector<CampaignFeatures>> per_ru(rus.size());
    for (const auto& campaign : campaigns) {
        const CfrTensor tensor = provider(campaign);
        for (std::size_t r = 0; r < rus.size(); ++r) {
            const CfrTensor sliced = slice_ru(tensor, rus[r]);
            const CfrTensor clean = sanitize_phase(sliced, nullptr, options.threads);
            CampaignFeatures feats;
            feats.label = campaign.label;
            feats.campaign_index = campaign.campaign_index;
            feats.features =
                features_for_tensor(clean, options.doppler, 1, options.n_vectors, options.threads);
            per_ru[r].push_back(std::move(feats));
        }
    }

    std::vector<ConfigReport> reports;
    reports.reserve(rus.size());
    for (std::size_t r = 0; r < rus.size(); ++r) {
        reports.push_back(evaluate_config(rus[r].name(), per_ru[r], options));
    }
    return reports;
}

std::vector<ConfigReport> sweep_sampling(const std::vector<Campaign>& campaigns,
                                         const TensorProvider& provider,
                                         const std::vector<int>& factors,
                                         const SweepOptions& options) {
    if (factors.empty()) throw std::invalid_argument("sampling sweep needs at least one factor");
    for (int k : factors) {
        if (k < 1) throw std::invalid_argument("sampling factors must be >= 1");
        if (options.n_vectors / static_cast<std::size_t>(k) == 0) {
            throw std::invalid_argument("sampling factor " + std::to_string(k) +
                                        " leaves no vectors to pool");
        }
    }
    options.doppler.validate();

    std::vector<std::vector<CampaignFeatures>> per_factor(factors.size());
    for (const auto& campaign : campaigns) {
        const CfrTensor tensor = provider(campaign);
        const CfrTensor clean = sanitize_phase(tensor, nullptr, options.threads);
        for (std::size_t f = 0; f < factors.size(); ++f) {
            const auto pool = options.n_vectors / static_cast<std::size_t>(factors[f]);
            CampaignFeatures feats;
            feats.label = campaign.label;
            feats.campaign_index = campaign.campaign_index;
            feats.features =
                features_for_tensor(clean, options.doppler, factors[f], pool, options.threads);
            per_factor[f].push_back(std::move(feats));
        }
    }

    std::vector<ConfigReport> reports;
    reports.reserve(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto pool = options.n_vectors / static_cast<std::size_t>(factors[f]);
        const std::string label = "k" + std::to_string(factors[f]) + "-N" + std::to_string(pool);
        reports.push_back(evaluate_config(label, per_factor[f], options));
    }
    return reports;
}

void write_results_csv(const std::string& path, const std::vector<ConfigReport>& reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open results file for writing: " + path);
    out << "config_label,round,test_campaign,accuracy,macro_f1\n";
    for (const auto& report : reports) {
        for (const auto& s : report.sets) {
            out << report.label << ',' << s.round << ',' << s.test_campaign << ','
                << fmt_double(s.accuracy) << ',' << fmt_double(s.macro_f1) << '\n';
        }
    }
    if (!out) throw Error("failed writing results file: " + path);
}

void write_summary_json(const std::string& path, const std::vector<ConfigReport>& reports) {
    nlohmann::ordered_json root;
    root["configs"] = nlohmann::ordered_json::array();
    for (const auto& report : reports) {
        nlohmann::ordered_json cfg;
        cfg["label"] = report.label;
        cfg["n_sets"] = report.sets.size();
        auto pct = [](const Percentiles& p) {
            nlohmann::ordered_json j;
            j["median"] = p.median;
            j["p25"] = p.p25;
            j["p75"] = p.p75;
            j["p5"] = p.p5;
            j["p95"] = p.p95;
            return j;
        };
        cfg["accuracy"] = pct(report.accuracy_pct);
        cfg["macro_f1"] = pct(report.macro_f1_pct);
        root["configs"].push_back(std::move(cfg));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open summary file for writing: " + path);
    out << root.dump(2) << '\n';
    if (!out) throw Error("failed writing summary file: " + path);
}

}  // namespace wislab
