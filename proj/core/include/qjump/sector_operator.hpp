#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qjump/model.hpp"
#include "qjump/sector_basis.hpp"

namespace qjump {

/// Sum of local terms assembled as a sparse matrix inside one sector.
class SectorOperator {
public:
    using Matrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor, int>;

    SectorOperator() = default;
    SectorOperator(const SectorBasis& basis, std::span<const LocalTerm> terms);

    const Matrix& matrix() const { return matrix_; }
    Eigen::Index dimension() const { return matrix_.rows(); }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    double infinity_norm() const { return inf_norm_; }

    /// Diagonal shift mu and the infinity norm of (A - mu).
    Complex shift() const { return shift_; }
    double shifted_infinity_norm() const { return shifted_norm_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        Eigen::VectorXcd out(v.size());
        apply(v, out);
        return out;
    }
    /// out = (A - shift) v. When every off-diagonal entry has the same value
    /// (true for H_eff, whose only off-diagonal terms are the jump-induced
    /// swaps), this runs on the sparsity pattern alone.
    void apply(const Eigen::VectorXcd& v, Eigen::VectorXcd& out, Complex shift = {}) const;
    bool uniform_off_diagonal() const { return uniform_; }
    Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(matrix_); }

private:
    Matrix matrix_;
    double inf_norm_ = 0.0;
    Complex shift_{};
    double shifted_norm_ = 0.0;
    bool uniform_ = false;
    Complex off_value_{};
    Eigen::VectorXcd diag_;
    std::vector<int> row_start_;
    std::vector<int> off_cols_;
};

}  // namespace qjump
