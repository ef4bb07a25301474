#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wislab/dsp.hpp"
#include "wislab/types.hpp"

namespace wislab {

/// N stacked Doppler power vectors (rows) over F frequency bins (columns).
struct ClassifierInput {
    std::size_t n_vectors = 0;  // N
    std::size_t n_bins = 0;     // F
    std::vector<double> power;  // row-major N x F, non-negative

    double at(std::size_t row, std::size_t bin) const { return power[row * n_bins + bin]; }
    void validate() const;
};

/// Pooled feature vector: per-bin mean then per-bin standard deviation of the
/// log-compressed input, 2F values. log_offset is the per-input normalization
/// (global mean log-power) subtracted from the mean half.
struct Features {
    std::vector<double> values;
    double log_offset = 0.0;
};

/// log(1 + power) compression, per-input offset removal, then per-bin mean and
/// population standard deviation over the N vectors. Row-permutation invariant.
Features featurize(const ClassifierInput& input);

/// Groups a Doppler vector stream into consecutive non-overlapping inputs of
/// n_vectors rows each (the tail shorter than n_vectors is dropped).
std::vector<ClassifierInput> stack_doppler_vectors(const std::vector<DopplerVector>& stream,
                                                   std::size_t n_vectors);

struct TrainHyper {
    double learning_rate = 0.5;
    int epochs = 200;
    std::uint64_t seed = 1;
};

/// Labeled feature vectors.
struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<ActivityClass> labels;

    void push(Features f, ActivityClass label) {
        features.push_back(std::move(f.values));
        labels.push_back(label);
    }
    std::size_t size() const { return features.size(); }
};

/// Linear softmax classifier over pooled features, with the training-set
/// standardization baked in (applied again at predict time).
struct Model {
    std::string architecture = "pool-affine-softmax-v1";
    std::size_t fft_len = 0;    // F
    std::size_t n_vectors = 0;  // nominal N the features were pooled over
    std::array<std::string, kNumClasses> class_names{"Empty", "InPlace", "Walking", "Running"};
    std::vector<double> feat_mean;   // 2F
    std::vector<double> feat_scale;  // 2F, multiplicative
    std::vector<double> weights;     // kNumClasses x 2F, row-major
    std::vector<double> bias;        // kNumClasses

    std::size_t feature_dim() const { return feat_mean.size(); }
};

struct Prediction {
    ActivityClass label = ActivityClass::Empty;
    std::array<double, kNumClasses> probabilities{};
};

struct TrainReport {
    Model model;
    std::vector<double> loss_trace;  // mean cross-entropy before each update
    int chosen_epoch = 0;            // epoch whose parameters were returned
};

/// Full-batch gradient descent on mean cross-entropy for `epochs` updates,
/// deterministic in (dataset order, hyper). Requires at least one example of
/// every class. When `validation` is given, the returned parameters are the
/// epoch with the best validation accuracy (ties -> earliest); training is
/// otherwise unaffected. n_vectors_meta is recorded in the model header.
TrainReport train(const Dataset& train_set, const TrainHyper& hyper,
                  const Dataset* validation = nullptr, std::size_t n_vectors_meta = 0);

/// Softmax probabilities and argmax label (ties -> lowest class index).
Prediction predict(const Model& model, const std::vector<double>& features);

struct GradientCheckResult {
    double max_relative_error = 0.0;
    double max_abs_analytic = 0.0;
    double max_abs_numeric = 0.0;
};

/// Central-difference check of the analytic cross-entropy gradient at the
/// model's parameters over the given examples. epsilon must lie in
/// [1e-7, 1e-3]. Deterministic; evaluation order is fixed.
GradientCheckResult gradient_check(const Model& model, const Dataset& data, double epsilon);

/// Versioned flat text format, bit-exact round-trip (shortest float forms).
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace wislab
