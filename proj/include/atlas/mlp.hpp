#ifndef ATLAS_MLP_HPP
#define ATLAS_MLP_HPP

#include <cstdint>
#include <vector>

#include "atlas/embedding.hpp"
#include "atlas/point_cloud.hpp"

namespace atlas {

enum class Activation { Tanh, Identity };

struct DenseLayer {
    Matrix weights;  // out x in
    Vector bias;     // out
    Activation activation = Activation::Tanh;
};

/// Fully-connected inverse chart: z_l = W_l x_{l-1} + b_l with tanh hidden
/// activations and an affine output layer. Inputs and targets are standardized
/// per feature; the records live on the network so inference round-trips them.
class MlpInverse {
public:
    MlpInverse() = default;
    MlpInverse(int input_dim, int output_dim, std::vector<DenseLayer> layers);

    int input_dim() const { return input_dim_; }
    int output_dim() const { return output_dim_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }

    const Vector& input_mean() const { return x_mean_; }
    const Vector& input_scale() const { return x_scale_; }
    const Vector& target_mean() const { return y_mean_; }
    const Vector& target_scale() const { return y_scale_; }
    void set_standardization(Vector x_mean, Vector x_scale, Vector y_mean, Vector y_scale);

    /// Raw network pass in standardized coordinates, one sample per row.
    Matrix forward_std(const Matrix& inputs) const;

    /// De-standardized prediction for one embedding point.
    Vector predict(const Vector& y) const;
    Matrix predict_all(const Matrix& embedded) const;

    /// Analytic Jacobian of predict() at y (output_dim x input_dim).
    Matrix jacobian(const Vector& y) const;

    /// Structural smoothness check: every layer is affine-then-tanh except the
    /// affine output, dimensions chain, and all parameters are finite.
    bool is_smooth() const;

    /// Mean squared error of predict_all over all entries, in standardized
    /// target units.
    double mse_std(const Matrix& embedded, const Matrix& targets) const;

private:
    int input_dim_ = 0;
    int output_dim_ = 0;
    std::vector<DenseLayer> layers_;
    Vector x_mean_, x_scale_, y_mean_, y_scale_;
};

/// Fresh network with weights uniform on +-sqrt(3/fan_in) and zero biases.
/// hidden_width <= 0 selects the default max(64, 2*output_dim).
MlpInverse init_mlp(int input_dim, int output_dim, int hidden_layers, int hidden_width,
                    std::uint64_t seed);

struct MlpGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;
};

struct MlpWorkspace {
    std::vector<Matrix> acts;
    std::vector<Matrix> deltas;
};

/// Batch MSE loss (mean over samples and outputs, standardized coordinates)
/// and its gradient w.r.t. every parameter, by backpropagation.
double mlp_loss_and_gradients(const std::vector<DenseLayer>& layers, const Matrix& x_std,
                              const Matrix& y_std, MlpGradients& grads, MlpWorkspace& ws);

struct TrainConfig {
    int epochs = 10000;
    int batch = 32;
    double learning_rate = 1e-3;
    int hidden_layers = 10;
    int hidden_width = 0;  // 0 = max(64, 2m)
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
};

struct TrainResult {
    MlpInverse net;
    double initial_mse = 0.0;           // full-data standardized MSE before training
    double final_mse = 0.0;             // and after
    std::vector<double> epoch_loss;     // mean batch loss per epoch
};

/// Trains the inverse chart on one expanded cluster: inputs are the points'
/// projections under `chart`, targets the original points, both standardized
/// per feature. Mini-batch Adam on the MSE; aborts on non-finite loss.
TrainResult train_inverse(const PcaChart& chart, const Matrix& cluster_points,
                          const TrainConfig& cfg);

/// Standard k-fold cross validation of train_inverse on one cluster; returns
/// the held-out standardized MSE of each fold. Requires size >= folds.
std::vector<double> cross_validate(const PcaChart& chart, const Matrix& cluster_points, int folds,
                                   const TrainConfig& cfg);

}  // namespace atlas

#endif
