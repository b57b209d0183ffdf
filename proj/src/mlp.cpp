#include "atlas/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace atlas {

namespace {

Vector column_mean(const Matrix& m) { return m.colwise().mean(); }

Vector column_scale(const Matrix& m, const Vector& mean) {
    const double n = static_cast<double>(m.rows());
    Vector scale(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double var = (m.col(j).array() - mean[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        scale[j] = sd > 0.0 ? sd : 1.0;  // constant feature: leave unscaled
    }
    return scale;
}

Matrix standardize(const Matrix& m, const Vector& mean, const Vector& scale) {
    return (m.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

struct AdamState {
    std::vector<Matrix> mw, vw;
    std::vector<Vector> mb, vb;
    long long t = 0;

    explicit AdamState(const std::vector<DenseLayer>& layers) {
        for (const auto& layer : layers) {
            mw.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
            vw.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
            mb.push_back(Vector::Zero(layer.bias.size()));
            vb.push_back(Vector::Zero(layer.bias.size()));
        }
    }
};

template <typename Tensor>
void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, double lr, double b1,
                 double b2, double eps, double bc1, double bc2) {
    m.array() = b1 * m.array() + (1.0 - b1) * grad.array();
    v.array() = b2 * v.array() + (1.0 - b2) * grad.array().square();
    param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
}

}  // namespace

MlpInverse::MlpInverse(int input_dim, int output_dim, std::vector<DenseLayer> layers)
    : input_dim_(input_dim), output_dim_(output_dim), layers_(std::move(layers)) {
    x_mean_ = Vector::Zero(input_dim);
    x_scale_ = Vector::Ones(input_dim);
    y_mean_ = Vector::Zero(output_dim);
    y_scale_ = Vector::Ones(output_dim);
}

void MlpInverse::set_standardization(Vector x_mean, Vector x_scale, Vector y_mean, Vector y_scale) {
    if (x_mean.size() != input_dim_ || x_scale.size() != input_dim_ ||
        y_mean.size() != output_dim_ || y_scale.size() != output_dim_) {
        throw std::invalid_argument("set_standardization: dimension mismatch");
    }
    x_mean_ = std::move(x_mean);
    x_scale_ = std::move(x_scale);
    y_mean_ = std::move(y_mean);
    y_scale_ = std::move(y_scale);
}

Matrix MlpInverse::forward_std(const Matrix& inputs) const {
    Matrix a = inputs;
    for (const auto& layer : layers_) {
        Matrix z = a * layer.weights.transpose();
        z.rowwise() += layer.bias.transpose();
        if (layer.activation == Activation::Tanh) z = z.array().tanh();
        a = std::move(z);
    }
    return a;
}

Vector MlpInverse::predict(const Vector& y) const {
    if (y.size() != input_dim_) throw std::invalid_argument("predict: dimension mismatch");
    Matrix in(1, input_dim_);
    in.row(0) = ((y - x_mean_).array() / x_scale_.array()).transpose();
    const Matrix out = forward_std(in);
    return (out.row(0).transpose().array() * y_scale_.array() + y_mean_.array()).matrix();
}

Matrix MlpInverse::predict_all(const Matrix& embedded) const {
    if (embedded.cols() != input_dim_) throw std::invalid_argument("predict_all: dimension mismatch");
    const Matrix out = forward_std(standardize(embedded, x_mean_, x_scale_));
    return (out.array().rowwise() * y_scale_.transpose().array()).rowwise() +
           y_mean_.transpose().array();
}

Matrix MlpInverse::jacobian(const Vector& y) const {
    if (y.size() != input_dim_) throw std::invalid_argument("jacobian: dimension mismatch");
    // Chain rule through standardization, the layers, and de-standardization.
    Matrix jac = Matrix::Zero(input_dim_, input_dim_);
    for (int j = 0; j < input_dim_; ++j) jac(j, j) = 1.0 / x_scale_[j];

    Vector a = ((y - x_mean_).array() / x_scale_.array()).matrix();
    for (const auto& layer : layers_) {
        Vector z = layer.weights * a + layer.bias;
        jac = (layer.weights * jac).eval();
        if (layer.activation == Activation::Tanh) {
            a = z.array().tanh().matrix();
            jac.array().colwise() *= (1.0 - a.array().square());
        } else {
            a = std::move(z);
        }
    }
    jac.array().colwise() *= y_scale_.array();
    return jac;
}

bool MlpInverse::is_smooth() const {
    if (layers_.empty()) return false;
    Eigen::Index expect = input_dim_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        if (layer.weights.cols() != expect) return false;
        if (layer.bias.size() != layer.weights.rows()) return false;
        if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
        const Activation want = l + 1 == layers_.size() ? Activation::Identity : Activation::Tanh;
        if (layer.activation != want) return false;
        expect = layer.weights.rows();
    }
    return expect == output_dim_ && x_scale_.minCoeff() > 0.0 && y_scale_.minCoeff() > 0.0;
}

double MlpInverse::mse_std(const Matrix& embedded, const Matrix& targets) const {
    const Matrix pred = forward_std(standardize(embedded, x_mean_, x_scale_));
    const Matrix t = standardize(targets, y_mean_, y_scale_);
    return (pred - t).array().square().mean();
}

MlpInverse init_mlp(int input_dim, int output_dim, int hidden_layers, int hidden_width,
                    std::uint64_t seed) {
    if (input_dim < 1 || output_dim < 1) throw std::invalid_argument("init_mlp: dims must be >= 1");
    if (hidden_layers < 0) throw std::invalid_argument("init_mlp: hidden_layers must be >= 0");
    if (hidden_width <= 0) hidden_width = std::max(64, 2 * output_dim);

    std::mt19937_64 rng(seed);
    std::vector<int> dims;
    dims.push_back(input_dim);
    for (int i = 0; i < hidden_layers; ++i) dims.push_back(hidden_width);
    dims.push_back(output_dim);

    std::vector<DenseLayer> layers;
    layers.reserve(dims.size() - 1);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        const double bound = std::sqrt(3.0 / dims[l]);
        std::uniform_real_distribution<double> dist(-bound, bound);
        layer.weights.resize(dims[l + 1], dims[l]);
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = dist(rng);
        }
        layer.bias = Vector::Zero(dims[l + 1]);
        layer.activation = l + 2 == dims.size() ? Activation::Identity : Activation::Tanh;
        layers.push_back(std::move(layer));
    }
    return MlpInverse(input_dim, output_dim, std::move(layers));
}

double mlp_loss_and_gradients(const std::vector<DenseLayer>& layers, const Matrix& x_std,
                              const Matrix& y_std, MlpGradients& grads, MlpWorkspace& ws) {
    const int L = static_cast<int>(layers.size());
    const Eigen::Index count = x_std.rows();
    ws.acts.resize(L + 1);
    ws.deltas.resize(L + 1);
    grads.weights.resize(L);
    grads.bias.resize(L);

    ws.acts[0] = x_std;
    for (int l = 0; l < L; ++l) {
        Matrix z = ws.acts[l] * layers[l].weights.transpose();
        z.rowwise() += layers[l].bias.transpose();
        if (layers[l].activation == Activation::Tanh) z = z.array().tanh();
        ws.acts[l + 1] = std::move(z);
    }

    const double loss = (ws.acts[L] - y_std).array().square().mean();

    // deltas[l+1] ends up as dLoss/dz of layer l.
    ws.deltas[L] = 2.0 * (ws.acts[L] - y_std) / static_cast<double>(count * y_std.cols());
    for (int l = L - 1; l >= 0; --l) {
        if (layers[l].activation == Activation::Tanh) {
            ws.deltas[l + 1].array() *= 1.0 - ws.acts[l + 1].array().square();
        }
        if (l > 0) {
            ws.deltas[l].resize(count, layers[l].weights.cols());
            ws.deltas[l].noalias() = ws.deltas[l + 1] * layers[l].weights;
        }
    }
    for (int l = 0; l < L; ++l) {
        grads.weights[l].resize(layers[l].weights.rows(), layers[l].weights.cols());
        grads.weights[l].noalias() = ws.deltas[l + 1].transpose() * ws.acts[l];
        grads.bias[l] = ws.deltas[l + 1].colwise().sum();
    }
    return loss;
}

TrainResult train_inverse(const PcaChart& chart, const Matrix& cluster_points,
                          const TrainConfig& cfg) {
    const Eigen::Index n_samples = cluster_points.rows();
    if (n_samples < 2) throw std::invalid_argument("train_inverse: need at least 2 points");
    if (cfg.batch < 1 || cfg.epochs < 0) throw std::invalid_argument("train_inverse: bad config");

    const Matrix inputs = project_all(chart, cluster_points);
    const Matrix& targets = cluster_points;

    const Vector x_mean = column_mean(inputs);
    const Vector x_scale = column_scale(inputs, x_mean);
    const Vector y_mean = column_mean(targets);
    const Vector y_scale = column_scale(targets, y_mean);
    const Matrix x = standardize(inputs, x_mean, x_scale);
    const Matrix y = standardize(targets, y_mean, y_scale);

    TrainResult result;
    result.net = init_mlp(chart.n, static_cast<int>(cluster_points.cols()), cfg.hidden_layers,
                          cfg.hidden_width, cfg.seed);
    result.net.set_standardization(x_mean, x_scale, y_mean, y_scale);
    auto& layers = result.net.layers();
    const int L = static_cast<int>(layers.size());

    result.initial_mse = (result.net.forward_std(x) - y).array().square().mean();

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Eigen::Index> order(n_samples);
    std::iota(order.begin(), order.end(), 0);

    AdamState adam(layers);
    MlpGradients grads;
    MlpWorkspace ws;
    const Eigen::Index batch = std::min<Eigen::Index>(cfg.batch, n_samples);
    Matrix bx(batch, x.cols()), by(batch, y.cols());

    result.epoch_loss.reserve(cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_sum = 0.0;
        int n_batches = 0;
        for (Eigen::Index start = 0; start < n_samples; start += batch) {
            const Eigen::Index count = std::min(batch, n_samples - start);
            bx.resize(count, x.cols());
            by.resize(count, y.cols());
            for (Eigen::Index r = 0; r < count; ++r) {
                bx.row(r) = x.row(order[start + r]);
                by.row(r) = y.row(order[start + r]);
            }

            const double loss = mlp_loss_and_gradients(layers, bx, by, grads, ws);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train_inverse: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch offset " +
                                         std::to_string(start));
            }
            epoch_sum += loss;
            ++n_batches;

            adam.t += 1;
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam.t));
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam.t));
            for (int l = 0; l < L; ++l) {
                adam_update(layers[l].weights, grads.weights[l], adam.mw[l], adam.vw[l],
                            cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, bc1,
                            bc2);
                adam_update(layers[l].bias, grads.bias[l], adam.mb[l], adam.vb[l],
                            cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, bc1,
                            bc2);
            }
        }
        result.epoch_loss.push_back(epoch_sum / std::max(1, n_batches));
    }

    result.final_mse = (result.net.forward_std(x) - y).array().square().mean();
    return result;
}

std::vector<double> cross_validate(const PcaChart& chart, const Matrix& cluster_points, int folds,
                                   const TrainConfig& cfg) {
    const Eigen::Index n = cluster_points.rows();
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (n < folds) throw std::invalid_argument("cross_validate: cluster smaller than fold count");

    std::mt19937_64 rng(cfg.seed ^ 0xc2b2ae3d27d4eb4fULL);
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> scores(folds);
    for (int f = 0; f < folds; ++f) {
        // Fold f takes indices f, f+folds, f+2*folds, ... of the shuffle.
        std::vector<Eigen::Index> train_rows, test_rows;
        for (Eigen::Index i = 0; i < n; ++i) {
            (static_cast<int>(i % folds) == f ? test_rows : train_rows).push_back(order[i]);
        }
        Matrix train(train_rows.size(), cluster_points.cols());
        Matrix test(test_rows.size(), cluster_points.cols());
        for (std::size_t r = 0; r < train_rows.size(); ++r) train.row(r) = cluster_points.row(train_rows[r]);
        for (std::size_t r = 0; r < test_rows.size(); ++r) test.row(r) = cluster_points.row(test_rows[r]);

        TrainConfig fold_cfg = cfg;
        fold_cfg.seed = cfg.seed + static_cast<std::uint64_t>(f + 1);
        const TrainResult result = train_inverse(chart, train, fold_cfg);
        scores[f] = result.net.mse_std(project_all(chart, test), test);
    }
    return scores;
}

}  // namespace atlas
