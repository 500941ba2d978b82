#include "mibci/divergence.hpp"

#include <map>

#include "mibci/error.hpp"

namespace mibci {

namespace {

// Relative eigenvalue floor below which S is treated as singular.
constexpr double kSingularTol = 1e-12;

}  // namespace

DivergenceReport divergence(const std::vector<std::vector<double>>& features, const std::vector<std::size_t>& labels) {
    if (features.size() != labels.size()) throw ShapeError("features and labels differ in length");
    if (features.empty()) throw InvalidArgument("divergence of an empty sample");
    const std::size_t d = features.front().size();
    if (d == 0) throw ShapeError("zero-length feature vectors");

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != d) throw ShapeError("feature vectors differ in length");
        members[labels[i]].push_back(i);
    }
    if (members.size() < 2) throw InvalidArgument("divergence needs at least two classes");

    DivergenceReport r;
    r.within = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd means(d, members.size());
    std::size_t c = 0;
    for (const auto& [label, idx] : members) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
        for (auto i : idx) mean += Eigen::Map<const Eigen::VectorXd>(features[i].data(), d);
        mean /= static_cast<double>(idx.size());
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
        for (auto i : idx) {
            const Eigen::VectorXd dev = Eigen::Map<const Eigen::VectorXd>(features[i].data(), d) - mean;
            cov += dev * dev.transpose();
        }
        r.within += cov / static_cast<double>(idx.size());
        means.col(c++) = mean;
    }
    const Eigen::VectorXd grand = means.rowwise().mean();
    const Eigen::MatrixXd centred = means.colwise() - grand;
    r.between = centred * centred.transpose() / static_cast<double>(members.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.within, Eigen::EigenvaluesOnly);
    const double max_ev = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double min_ev = eig.eigenvalues().minCoeff();
    Eigen::MatrixXd s = r.within;
    if (max_ev == 0.0 || min_ev <= kSingularTol * max_ev) {
        const double trace = r.within.trace();
        r.ridge = trace > 0.0 ? 1e-9 * trace / static_cast<double>(d) : 1e-12;
        s.diagonal().array() += r.ridge;
    }
    r.value = s.ldlt().solve(r.between).trace();
    return r;
}

}  // namespace mibci
