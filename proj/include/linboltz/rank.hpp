#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linboltz/polynomial.hpp"

namespace linboltz {

enum class TestStatus { kPass, kFail, kInconclusive };

inline const char* to_string(TestStatus s) {
    switch (s) {
        case TestStatus::kPass: return "pass";
        case TestStatus::kFail: return "fail";
        case TestStatus::kInconclusive: return "inconclusive";
    }
    return "?";
}

// three-valued logic with fail dominating AND and pass dominating OR
inline TestStatus logical_and(TestStatus a, TestStatus b) {
    if (a == TestStatus::kFail || b == TestStatus::kFail) return TestStatus::kFail;
    if (a == TestStatus::kInconclusive || b == TestStatus::kInconclusive)
        return TestStatus::kInconclusive;
    return TestStatus::kPass;
}
inline TestStatus logical_or(TestStatus a, TestStatus b) {
    if (a == TestStatus::kPass || b == TestStatus::kPass) return TestStatus::kPass;
    if (a == TestStatus::kInconclusive || b == TestStatus::kInconclusive)
        return TestStatus::kInconclusive;
    return TestStatus::kFail;
}

// Member of a scalar-function family: label, point evaluation, and the exact
// polynomial when the underlying potential is polynomial.
struct FamilyMember {
    std::string label;
    std::function<double(std::span<const double>)> fn;
    std::optional<Polynomial> poly;
};

struct RankOptions {
    // thresholds on the minimum eigenvalue of the column-normalized Gram
    // matrix; the decade in between is reported as inconclusive
    double dependent_threshold = 1e-8;
    double independent_threshold = 1e-6;
};

struct RankResult {
    TestStatus independence = TestStatus::kInconclusive;  // kPass = independent
    double min_gram_eigenvalue = 0.0;
    double smallest_singular = 0.0;  // of the column-normalized matrix
    int nullity = 0;
    Eigen::MatrixXd nullspace;       // columns: coefficient vectors (original scaling)
    std::vector<std::string> labels;
};

// Exact coefficient matrix of a polynomial family over the union of their
// monomials (rows = monomials, columns = members).
Eigen::MatrixXd monomial_matrix(const std::vector<Polynomial>& family,
                                std::vector<MultiIndex>* monomials = nullptr);

// Collocation matrix: rows = sample points, columns = member values.
Eigen::MatrixXd collocation_matrix(const std::vector<FamilyMember>& family,
                                   const std::vector<std::vector<double>>& points);

// Rank decision via SVD of the column-normalized matrix. Null vectors are
// returned in the original (un-normalized) coefficient scaling.
RankResult rank_decision(const Eigen::MatrixXd& matrix, const RankOptions& opts,
                         std::vector<std::string> labels);

}  // namespace linboltz
