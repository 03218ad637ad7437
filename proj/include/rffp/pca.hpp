#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

#include "rffp/errors.hpp"

namespace rffp {

/// Principal components of a sample matrix, retained up to an explained
/// variance cutoff. Components are orthonormal rows ordered by descending
/// eigenvalue; each component's sign is fixed so its largest-magnitude entry
/// is positive, which keeps serialized models identical across runs.
struct PcaModel {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd components;   // n_components x dim
    Eigen::VectorXd eigenvalues;  // all eigenvalues, descending
    int n_components = 0;
    double ev_cutoff = 0.95;

    double explained_variance_ratio() const {
        const double total = eigenvalues.sum();
        if (total <= 0.0) return 0.0;
        return eigenvalues.head(n_components).sum() / total;
    }
};

inline PcaModel pca_fit(const std::vector<std::vector<double>>& rows, double ev_cutoff = 0.95) {
    if (rows.size() < 2) throw invalid_input("pca_fit: need at least 2 rows");
    if (!(ev_cutoff > 0.0) || ev_cutoff > 1.0) throw invalid_input("pca_fit: cutoff outside (0, 1]");
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw invalid_input("pca_fit: empty feature dimension");
    for (const auto& r : rows)
        if (r.size() != dim) throw invalid_input("pca_fit: inconsistent row dimension");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

    PcaModel model;
    model.ev_cutoff = ev_cutoff;
    model.mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - model.mean;
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(rows.size() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw degenerate_data("pca_fit: eigensolver failed");

    // Eigen returns ascending order; flip to descending and clamp round-off.
    const Eigen::Index d = cov.rows();
    model.eigenvalues.resize(d);
    Eigen::MatrixXd vecs(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        model.eigenvalues(i) = std::max(0.0, solver.eigenvalues()(d - 1 - i));
        vecs.col(i) = solver.eigenvectors().col(d - 1 - i);
    }

    const double total = model.eigenvalues.sum();
    if (!(total > 0.0)) throw degenerate_data("pca_fit: zero-variance data");

    double acc = 0.0;
    int k = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        acc += model.eigenvalues(i);
        k = static_cast<int>(i) + 1;
        if (acc / total >= ev_cutoff) break;
    }
    model.n_components = k;
    model.components.resize(k, d);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v = vecs.col(i);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        model.components.row(i) = v.transpose();
    }
    return model;
}

inline std::vector<double> pca_transform(const PcaModel& model, const std::vector<double>& vec) {
    if (static_cast<Eigen::Index>(vec.size()) != model.mean.size())
        throw invalid_input("pca_transform: dimension mismatch");
    Eigen::RowVectorXd v(model.mean.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = vec[static_cast<std::size_t>(i)];
    const Eigen::RowVectorXd projected = (v - model.mean) * model.components.transpose();
    return std::vector<double>(projected.data(), projected.data() + projected.size());
}

/// Maps a reduced vector back into the original space (least-squares inverse).
inline std::vector<double> pca_inverse_transform(const PcaModel& model,
                                                 const std::vector<double>& reduced) {
    if (static_cast<int>(reduced.size()) != model.n_components)
        throw invalid_input("pca_inverse_transform: dimension mismatch");
    Eigen::RowVectorXd r(model.n_components);
    for (int i = 0; i < model.n_components; ++i) r(i) = reduced[static_cast<std::size_t>(i)];
    const Eigen::RowVectorXd back = r * model.components + model.mean;
    return std::vector<double>(back.data(), back.data() + back.size());
}

} // namespace rffp
