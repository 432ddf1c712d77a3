#pragma once

#include "cfota/linalg.hpp"
#include "cfota/rng.hpp"

#include <vector>

namespace cfota {

/// Labeled samples, one row per sample; features in [0, 1].
struct Dataset {
    rmat features;
    std::vector<int> labels;

    Eigen::Index size() const { return features.rows(); }
    Dataset subset(const std::vector<Eigen::Index>& rows) const;
};

/// Single-hidden-layer classifier: tanh (Tansig) hidden layer, softmax output,
/// cross-entropy loss. Parameters are flattened as [W1 | b1 | W2 | b2] with the
/// weight matrices stored column-major (W1 is hidden x inputs).
struct FnnShape {
    Eigen::Index inputs = 784;
    Eigen::Index hidden = 60;
    Eigen::Index outputs = 10;

    Eigen::Index parameter_count() const {
        return inputs * hidden + hidden + hidden * outputs + outputs;
    }
};

/// Class probabilities, one row per sample. Throws ShapeMismatch.
rmat fnn_forward(const rvec& theta, const FnnShape& shape, const rmat& features);
double fnn_loss(const rvec& theta, const FnnShape& shape, const Dataset& data);
rvec fnn_gradient(const rvec& theta, const FnnShape& shape, const Dataset& data);
double fnn_accuracy(const rvec& theta, const FnnShape& shape, const Dataset& data);

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
rvec fnn_init(const FnnShape& shape, Rng& rng);

}  // namespace cfota
