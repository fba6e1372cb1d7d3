#include "linboltz/rank.hpp"

#include <map>
#include <stdexcept>

namespace linboltz {

Eigen::MatrixXd monomial_matrix(const std::vector<Polynomial>& family,
                                std::vector<MultiIndex>* monomials) {
    if (family.empty()) throw std::invalid_argument("monomial_matrix: empty family");
    std::map<MultiIndex, int> row_of;
    for (const auto& p : family)
        for (const auto& [mi, c] : p.terms())
            row_of.emplace(mi, 0);
    int r = 0;
    for (auto& [mi, idx] : row_of) idx = r++;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(r, static_cast<int>(family.size()));
    for (int j = 0; j < static_cast<int>(family.size()); ++j)
        for (const auto& [mi, c] : family[j].terms())
            M(row_of.at(mi), j) = c;

    if (monomials) {
        monomials->resize(r);
        for (const auto& [mi, idx] : row_of) (*monomials)[idx] = mi;
    }
    return M;
}

Eigen::MatrixXd collocation_matrix(const std::vector<FamilyMember>& family,
                                   const std::vector<std::vector<double>>& points) {
    Eigen::MatrixXd M(static_cast<int>(points.size()), static_cast<int>(family.size()));
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
        for (int j = 0; j < static_cast<int>(family.size()); ++j)
            M(i, j) = family[j].fn(points[i]);
    return M;
}

RankResult rank_decision(const Eigen::MatrixXd& matrix, const RankOptions& opts,
                         std::vector<std::string> labels) {
    const int cols = static_cast<int>(matrix.cols());
    RankResult res;
    res.labels = std::move(labels);

    Eigen::MatrixXd M = matrix;
    Eigen::VectorXd scale(cols);
    for (int j = 0; j < cols; ++j) {
        const double nrm = M.col(j).norm();
        if (nrm == 0.0) {
            // a zero column is an immediate dependence witness
            res.independence = TestStatus::kFail;
            res.min_gram_eigenvalue = 0.0;
            res.smallest_singular = 0.0;
            res.nullity = 1;
            res.nullspace = Eigen::MatrixXd::Zero(cols, 1);
            res.nullspace(j, 0) = 1.0;
            return res;
        }
        scale(j) = nrm;
        M.col(j) /= nrm;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    // a matrix with fewer rows than columns has implicit zero singular values
    const double smin = cols > matrix.rows() ? 0.0 : sv(sv.size() - 1);
    res.smallest_singular = smin;
    res.min_gram_eigenvalue = smin * smin;

    if (res.min_gram_eigenvalue < opts.dependent_threshold)
        res.independence = TestStatus::kFail;
    else if (res.min_gram_eigenvalue > opts.independent_threshold)
        res.independence = TestStatus::kPass;
    else
        res.independence = TestStatus::kInconclusive;

    // null vectors: right singular vectors with sigma^2 below the dependent
    // threshold (directions beyond the row count are exact nulls), mapped
    // back to the original column scaling
    std::vector<int> null_idx;
    for (int k = 0; k < cols; ++k) {
        const double s2 = k < sv.size() ? sv(k) * sv(k) : 0.0;
        if (s2 < opts.dependent_threshold) null_idx.push_back(k);
    }
    res.nullity = static_cast<int>(null_idx.size());
    res.nullspace.resize(cols, res.nullity);
    for (int c = 0; c < res.nullity; ++c) {
        Eigen::VectorXd v = svd.matrixV().col(null_idx[c]);
        for (int j = 0; j < cols; ++j) v(j) /= scale(j);
        // normalize the leading entry for readability
        int lead = 0;
        v.cwiseAbs().maxCoeff(&lead);
        if (v(lead) != 0.0) v /= v(lead);
        res.nullspace.col(c) = v;
    }
    return res;
}

}  // namespace linboltz
