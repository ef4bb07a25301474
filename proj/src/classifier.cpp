#include "wislab/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wislab/errors.hpp"
#include "wislab/rng.hpp"

namespace wislab {

namespace {

constexpr double kScaleFloor = 1e-12;

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& what) {
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ConfigError("model file: bad numeric value for " + what + ": '" + token + "'");
    }
    return v;
}

std::vector<double> standardized(const Model& model, const std::vector<double>& x) {
    if (x.size() != model.feature_dim()) {
        throw std::invalid_argument("feature vector has " + std::to_string(x.size()) +
                                    " values, model expects " +
                                    std::to_string(model.feature_dim()));
    }
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        z[j] = (x[j] - model.feat_mean[j]) * model.feat_scale[j];
    }
    return z;
}

// Stable softmax of W z + b into probs; returns the max logit for reuse.
void softmax_logits(const Model& model, const std::vector<double>& z,
                    std::array<double, kNumClasses>& probs) {
    std::array<double, kNumClasses> logits{};
    const std::size_t dim = model.feature_dim();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double acc = model.bias[c];
        const double* w = model.weights.data() + c * dim;
        for (std::size_t j = 0; j < dim; ++j) acc += w[j] * z[j];
        logits[c] = acc;
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        probs[c] = std::exp(logits[c] - peak);
        denom += probs[c];
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) probs[c] /= denom;
}

// Mean cross-entropy over pre-standardized rows; optionally accumulates the
// analytic gradient (same averaging) into grad_w / grad_b.
double mean_cross_entropy(const Model& model, const std::vector<std::vector<double>>& zs,
                          const std::vector<ActivityClass>& labels,
                          std::vector<double>* grad_w = nullptr,
                          std::vector<double>* grad_b = nullptr) {
    const std::size_t dim = model.feature_dim();
    const std::size_t n = zs.size();
    if (grad_w) std::fill(grad_w->begin(), grad_w->end(), 0.0);
    if (grad_b) std::fill(grad_b->begin(), grad_b->end(), 0.0);
    double loss = 0.0;
    std::array<double, kNumClasses> probs{};
    for (std::size_t i = 0; i < n; ++i) {
        softmax_logits(model, zs[i], probs);
        const auto truth = static_cast<std::size_t>(labels[i]);
        loss += -std::log(std::max(probs[truth], std::numeric_limits<double>::min()));
        if (!grad_w) continue;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            const double err = probs[c] - (c == truth ? 1.0 : 0.0);
            (*grad_b)[c] += err;
            double* gw = grad_w->data() + c * dim;
            const double* z = zs[i].data();
            for (std::size_t j = 0; j < dim; ++j) gw[j] += err * z[j];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    if (grad_w) {
        for (double& g : *grad_w) g *= inv;
        for (double& g : *grad_b) g *= inv;
    }
    return loss * inv;
}

double accuracy_on(const Model& model, const std::vector<std::vector<double>>& zs,
                   const std::vector<ActivityClass>& labels) {
    std::size_t hits = 0;
    std::array<double, kNumClasses> probs{};
    for (std::size_t i = 0; i < zs.size(); ++i) {
        softmax_logits(model, zs[i], probs);
        std::size_t best = 0;
        for (std::size_t c = 1; c < kNumClasses; ++c) {
            if (probs[c] > probs[best]) best = c;
        }
        if (best == static_cast<std::size_t>(labels[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(zs.size());
}

void expect_key(std::istringstream& line, const std::string& key) {
    std::string got;
    line >> got;
    if (got != key) {
        throw ConfigError("model file: expected field '" + key + "', found '" + got + "'");
    }
}

std::vector<double> read_values(std::istringstream& line, std::size_t count,
                                const std::string& what) {
    std::vector<double> out;
    out.reserve(count);
    std::string tok;
    while (line >> tok) out.push_back(parse_double(tok, what));
    if (out.size() != count) {
        throw ConfigError("model file: field '" + what + "' has " + std::to_string(out.size()) +
                          " values, expected " + std::to_string(count));
    }
    return out;
}

}  // namespace

void ClassifierInput::validate() const {
    if (n_vectors == 0 || n_bins == 0) {
        throw std::invalid_argument("classifier input must have at least one vector and one bin");
    }
    if (power.size() != n_vectors * n_bins) {
        throw std::invalid_argument("classifier input size mismatch: " +
                                    std::to_string(power.size()) + " values for " +
                                    std::to_string(n_vectors) + " x " + std::to_string(n_bins));
    }
    for (double p : power) {
        if (!(p >= 0.0)) throw std::invalid_argument("classifier input power must be >= 0");
    }
}

Features featurize(const ClassifierInput& input) {
    input.validate();
    const std::size_t n = input.n_vectors;
    const std::size_t f = input.n_bins;
    std::vector<double> logp(input.power.size());
    double total = 0.0;
    for (std::size_t i = 0; i < input.power.size(); ++i) {
        logp[i] = std::log1p(input.power[i]);
        total += logp[i];
    }
    const double offset = total / static_cast<double>(logp.size());

    Features out;
    out.log_offset = offset;
    out.values.assign(2 * f, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < f; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += logp[i * f + j];
        mean *= inv_n;
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = logp[i * f + j] - mean;
            var += d * d;
        }
        out.values[j] = mean - offset;
        out.values[f + j] = std::sqrt(var * inv_n);
    }
    return out;
}

std::vector<ClassifierInput> stack_doppler_vectors(const std::vector<DopplerVector>& stream,
                                                   std::size_t n_vectors) {
    if (n_vectors == 0) throw std::invalid_argument("n_vectors must be >= 1");
    if (stream.size() < n_vectors) {
        throw InsufficientDataError("stacking needs " + std::to_string(n_vectors) +
                                    " Doppler vectors, stream has " +
                                    std::to_string(stream.size()));
    }
    const std::size_t bins = stream.front().power.size();
    for (const auto& v : stream) {
        if (v.power.size() != bins) {
            throw std::invalid_argument("Doppler vectors in one stream must share a bin count");
        }
    }
    std::vector<ClassifierInput> out;
    const std::size_t groups = stream.size() / n_vectors;
    out.reserve(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        ClassifierInput in;
        in.n_vectors = n_vectors;
        in.n_bins = bins;
        in.power.reserve(n_vectors * bins);
        for (std::size_t r = 0; r < n_vectors; ++r) {
            const auto& v = stream[g * n_vectors + r].power;
            in.power.insert(in.power.end(), v.begin(), v.end());
        }
        out.push_back(std::move(in));
    }
    return out;
}

TrainReport train(const Dataset& train_set, const TrainHyper& hyper, const Dataset* validation,
                  std::size_t n_vectors_meta) {
    if (train_set.size() == 0) throw DegenerateDatasetError("training set is empty");
    if (train_set.features.size() != train_set.labels.size()) {
        throw std::invalid_argument("dataset features/labels size mismatch");
    }
    if (hyper.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(hyper.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");

    const std::size_t dim = train_set.features.front().size();
    if (dim == 0 || dim % 2 != 0) {
        throw std::invalid_argument("feature dimension must be a positive even number");
    }
    std::array<std::size_t, kNumClasses> counts{};
    for (std::size_t i = 0; i < train_set.size(); ++i) {
        if (train_set.features[i].size() != dim) {
            throw std::invalid_argument("all feature vectors must share one dimension");
        }
        counts[static_cast<std::size_t>(train_set.labels[i])]++;
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (counts[c] == 0) {
            throw DegenerateDatasetError(std::string("training set has no examples of class ") +
                                         to_string(static_cast<ActivityClass>(c)));
        }
    }

    Model model;
    model.fft_len = dim / 2;
    model.n_vectors = n_vectors_meta;
    model.feat_mean.assign(dim, 0.0);
    model.feat_scale.assign(dim, 1.0);
    const double inv_n = 1.0 / static_cast<double>(train_set.size());
    for (const auto& x : train_set.features) {
        for (std::size_t j = 0; j < dim; ++j) model.feat_mean[j] += x[j];
    }
    for (double& m : model.feat_mean) m *= inv_n;
    std::vector<double> var(dim, 0.0);
    for (const auto& x : train_set.features) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = x[j] - model.feat_mean[j];
            var[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        model.feat_scale[j] = 1.0 / std::max(std::sqrt(var[j] * inv_n), kScaleFloor);
    }

    Rng rng(hyper.seed);
    model.weights.resize(kNumClasses * dim);
    for (double& w : model.weights) w = rng.normal(0.0, 0.1);
    model.bias.assign(kNumClasses, 0.0);

    std::vector<std::vector<double>> zs(train_set.size());
    for (std::size_t i = 0; i < train_set.size(); ++i) {
        zs[i] = standardized(model, train_set.features[i]);
    }
    std::vector<std::vector<double>> val_zs;
    if (validation) {
        if (validation->features.size() != validation->labels.size()) {
            throw std::invalid_argument("validation features/labels size mismatch");
        }
        val_zs.resize(validation->size());
        for (std::size_t i = 0; i < validation->size(); ++i) {
            val_zs[i] = standardized(model, validation->features[i]);
        }
    }

    TrainReport report;
    report.loss_trace.reserve(static_cast<std::size_t>(hyper.epochs));
    std::vector<double> grad_w(model.weights.size());
    std::vector<double> grad_b(kNumClasses);
    std::vector<double> best_w;
    std::vector<double> best_b;
    double best_acc = -1.0;
    int best_epoch = 0;

    for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
        const double loss = mean_cross_entropy(model, zs, train_set.labels, &grad_w, &grad_b);
        report.loss_trace.push_back(loss);
        for (std::size_t j = 0; j < model.weights.size(); ++j) {
            model.weights[j] -= hyper.learning_rate * grad_w[j];
        }
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            model.bias[c] -= hyper.learning_rate * grad_b[c];
        }
        if (validation && !val_zs.empty()) {
            const double acc = accuracy_on(model, val_zs, validation->labels);
            if (acc > best_acc) {
                best_acc = acc;
                best_epoch = epoch;
                best_w = model.weights;
                best_b = model.bias;
            }
        }
    }

    if (validation && !val_zs.empty()) {
        model.weights = std::move(best_w);
        model.bias = std::move(best_b);
        report.chosen_epoch = best_epoch;
    } else {
        report.chosen_epoch = hyper.epochs;
    }
    report.model = std::move(model);
    return report;
}

Prediction predict(const Model& model, const std::vector<double>& features) {
    if (model.weights.size() != kNumClasses * model.feature_dim() ||
        model.bias.size() != kNumClasses || model.feat_scale.size() != model.feature_dim()) {
        throw std::invalid_argument("model parameter shapes are inconsistent");
    }
    const std::vector<double> z = standardized(model, features);
    Prediction out;
    softmax_logits(model, z, out.probabilities);
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumClasses; ++c) {
        if (out.probabilities[c] > out.probabilities[best]) best = c;
    }
    out.label = static_cast<ActivityClass>(best);
    return out;
}

GradientCheckResult gradient_check(const Model& model, const Dataset& data, double epsilon) {
    if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
        throw std::invalid_argument("gradient check epsilon must lie in [1e-7, 1e-3]");
    }
    if (data.size() == 0) throw std::invalid_argument("gradient check needs examples");
    std::vector<std::vector<double>> zs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        zs[i] = standardized(model, data.features[i]);
    }

    const std::size_t dim = model.feature_dim();
    std::vector<double> grad_w(kNumClasses * dim);
    std::vector<double> grad_b(kNumClasses);
    Model probe = model;
    mean_cross_entropy(probe, zs, data.labels, &grad_w, &grad_b);

    GradientCheckResult res;
    auto inspect = [&](double* param, double analytic) {
        const double saved = *param;
        *param = saved + epsilon;
        const double up = mean_cross_entropy(probe, zs, data.labels);
        *param = saved - epsilon;
        const double down = mean_cross_entropy(probe, zs, data.labels);
        *param = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double scale = std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
        res.max_relative_error =
            std::max(res.max_relative_error, std::abs(analytic - numeric) / scale);
        res.max_abs_analytic = std::max(res.max_abs_analytic, std::abs(analytic));
        res.max_abs_numeric = std::max(res.max_abs_numeric, std::abs(numeric));
    };
    for (std::size_t j = 0; j < probe.weights.size(); ++j) {
        inspect(&probe.weights[j], grad_w[j]);
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        inspect(&probe.bias[c], grad_b[c]);
    }
    return res;
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open model file for writing: " + path);
    auto emit_row = [&out](const std::string& key, const double* v, std::size_t n) {
        out << key;
        for (std::size_t j = 0; j < n; ++j) out << ' ' << fmt_double(v[j]);
        out << '\n';
    };
    out << "wislab-model 1\n";
    out << "architecture " << model.architecture << '\n';
    out << "fft_len " << model.fft_len << '\n';
    out << "n_vectors " << model.n_vectors << '\n';
    out << "classes";
    for (const auto& name : model.class_names) out << ' ' << name;
    out << '\n';
    emit_row("feat_mean", model.feat_mean.data(), model.feat_mean.size());
    emit_row("feat_scale", model.feat_scale.data(), model.feat_scale.size());
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        emit_row("weights" + std::to_string(c), model.weights.data() + c * model.feature_dim(),
                 model.feature_dim());
    }
    emit_row("bias", model.bias.data(), model.bias.size());
    if (!out) throw Error("failed writing model file: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path);
    std::string line;
    auto next_line = [&](const std::string& what) -> std::istringstream {
        if (!std::getline(in, line)) {
            throw ConfigError("model file: missing field '" + what + "'");
        }
        return std::istringstream(line);
    };

    {
        auto ls = next_line("header");
        std::string magic;
        int version = -1;
        ls >> magic >> version;
        if (magic != "wislab-model") {
            throw ConfigError("model file: bad magic '" + magic + "'");
        }
        if (version != 1) {
            throw ConfigError("model file: unsupported version " + std::to_string(version));
        }
    }

    Model model;
    {
        auto ls = next_line("architecture");
        expect_key(ls, "architecture");
        ls >> model.architecture;
    }
    {
        auto ls = next_line("fft_len");
        expect_key(ls, "fft_len");
        ls >> model.fft_len;
    }
    {
        auto ls = next_line("n_vectors");
        expect_key(ls, "n_vectors");
        ls >> model.n_vectors;
    }
    {
        auto ls = next_line("classes");
        expect_key(ls, "classes");
        for (auto& name : model.class_names) ls >> name;
    }
    if (model.fft_len == 0) throw ConfigError("model file: fft_len must be >= 1");
    const std::size_t dim = 2 * model.fft_len;
    {
        auto ls = next_line("feat_mean");
        expect_key(ls, "feat_mean");
        model.feat_mean = read_values(ls, dim, "feat_mean");
    }
    {
        auto ls = next_line("feat_scale");
        expect_key(ls, "feat_scale");
        model.feat_scale = read_values(ls, dim, "feat_scale");
    }
    model.weights.clear();
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const std::string key = "weights" + std::to_string(c);
        auto ls = next_line(key);
        expect_key(ls, key);
        auto row = read_values(ls, dim, key);
        model.weights.insert(model.weights.end(), row.begin(), row.end());
    }
    {
        auto ls = next_line("bias");
        expect_key(ls, "bias");
        model.bias = read_values(ls, kNumClasses, "bias");
    }
    return model;
}

}  // namespace wislab
