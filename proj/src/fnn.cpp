#include "cfota/fnn.hpp"

#include "cfota/errors.hpp"

#include <cmath>
#include <string>

namespace cfota {

namespace {

struct Layers {
    Eigen::Map<const rmat> w1;
    Eigen::Map<const rvec> b1;
    Eigen::Map<const rmat> w2;
    Eigen::Map<const rvec> b2;
};

Layers unpack(const rvec& theta, const FnnShape& s) {
    if (theta.size() != s.parameter_count()) {
        throw ShapeMismatch("parameter vector has " + std::to_string(theta.size()) +
                            " entries, network needs " + std::to_string(s.parameter_count()));
    }
    const double* p = theta.data();
    const double* b1 = p + s.inputs * s.hidden;
    const double* w2 = b1 + s.hidden;
    const double* b2 = w2 + s.hidden * s.outputs;
    return {Eigen::Map<const rmat>(p, s.hidden, s.inputs), Eigen::Map<const rvec>(b1, s.hidden),
            Eigen::Map<const rmat>(w2, s.outputs, s.hidden),
            Eigen::Map<const rvec>(b2, s.outputs)};
}

void check_features(const rmat& x, const FnnShape& s) {
    if (x.cols() != s.inputs) {
        throw ShapeMismatch("expected " + std::to_string(s.inputs) + " features, got " +
                            std::to_string(x.cols()));
    }
}

rmat softmax_rows(rmat z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        z.row(i).array() -= z.row(i).maxCoeff();
        z.row(i) = z.row(i).array().exp();
        z.row(i) /= z.row(i).sum();
    }
    return z;
}

void check_labels(const Dataset& data, const FnnShape& s) {
    if (static_cast<Eigen::Index>(data.labels.size()) != data.size()) {
        throw ShapeMismatch("label count differs from sample count");
    }
    for (int y : data.labels) {
        if (y < 0 || y >= s.outputs) throw LabelOutOfRange("label " + std::to_string(y));
    }
}

}  // namespace

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
        out.labels.push_back(labels[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

rmat fnn_forward(const rvec& theta, const FnnShape& shape, const rmat& features) {
    check_features(features, shape);
    const Layers w = unpack(theta, shape);
    rmat hidden = ((features * w.w1.transpose()).rowwise() + w.b1.transpose()).array().tanh().matrix();
    return softmax_rows((hidden * w.w2.transpose()).rowwise() + w.b2.transpose());
}

double fnn_loss(const rvec& theta, const FnnShape& shape, const Dataset& data) {
    check_labels(data, shape);
    const rmat probs = fnn_forward(theta, shape, data.features);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        loss -= std::log(probs(i, data.labels[static_cast<std::size_t>(i)]));
    }
    return loss / static_cast<double>(probs.rows());
}

rvec fnn_gradient(const rvec& theta, const FnnShape& shape, const Dataset& data) {
    check_features(data.features, shape);
    check_labels(data, shape);
    const Layers w = unpack(theta, shape);
    const double n = static_cast<double>(data.size());

    const rmat hidden =
        ((data.features * w.w1.transpose()).rowwise() + w.b1.transpose()).array().tanh().matrix();
    rmat delta_out = softmax_rows((hidden * w.w2.transpose()).rowwise() + w.b2.transpose());
    for (Eigen::Index i = 0; i < delta_out.rows(); ++i) {
        delta_out(i, data.labels[static_cast<std::size_t>(i)]) -= 1.0;
    }
    delta_out /= n;
    const rmat delta_hidden =
        ((delta_out * w.w2).array() * (1.0 - hidden.array().square())).matrix();

    rvec grad(shape.parameter_count());
    double* p = grad.data();
    Eigen::Map<rmat>(p, shape.hidden, shape.inputs).noalias() =
        delta_hidden.transpose() * data.features;
    p += shape.inputs * shape.hidden;
    Eigen::Map<rvec>(p, shape.hidden) = delta_hidden.colwise().sum().transpose();
    p += shape.hidden;
    Eigen::Map<rmat>(p, shape.outputs, shape.hidden).noalias() = delta_out.transpose() * hidden;
    p += shape.hidden * shape.outputs;
    Eigen::Map<rvec>(p, shape.outputs) = delta_out.colwise().sum().transpose();
    return grad;
}

double fnn_accuracy(const rvec& theta, const FnnShape& shape, const Dataset& data) {
    if (data.size() == 0) return 0.0;
    const rmat probs = fnn_forward(theta, shape, data.features);
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        Eigen::Index best = 0;
        probs.row(i).maxCoeff(&best);
        if (best == data.labels[static_cast<std::size_t>(i)]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probs.rows());
}

rvec fnn_init(const FnnShape& shape, Rng& rng) {
    rvec theta = rvec::Zero(shape.parameter_count());
    const double limit1 = std::sqrt(6.0 / static_cast<double>(shape.inputs + shape.hidden));
    const double limit2 = std::sqrt(6.0 / static_cast<double>(shape.hidden + shape.outputs));
    const Eigen::Index n1 = shape.inputs * shape.hidden;
    for (Eigen::Index i = 0; i < n1; ++i) theta(i) = limit1 * (2.0 * uniform01(rng) - 1.0);
    const Eigen::Index w2_at = n1 + shape.hidden;
    for (Eigen::Index i = 0; i < shape.hidden * shape.outputs; ++i) {
        theta(w2_at + i) = limit2 * (2.0 * uniform01(rng) - 1.0);
    }
    return theta;
}

}  // namespace cfota
