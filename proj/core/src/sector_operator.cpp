#include "qjump/sector_operator.hpp"

#include <bit>

#include "qjump/error.hpp"

namespace qjump {

namespace {

int local_index(const SectorBasis& basis, Config c, int site) { return basis.is_up(c, site) ? kUp : kDown; }

Config with_local(const SectorBasis& basis, Config c, int site, int value) {
    const Config m = basis.site_mask(site);
    return value == kUp ? (c | m) : (c & ~m);
}

}  // namespace

SectorOperator::SectorOperator(const SectorBasis& basis, std::span<const LocalTerm> terms) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    std::vector<Eigen::Triplet<Complex, int>> triplets;
    triplets.reserve(basis.dimension() * (terms.size() + 1));
    const int k = basis.n_excitations();

    for (std::size_t col = 0; col < basis.dimension(); ++col) {
        const Config c = basis.state(col);
        for (const LocalTerm& term : terms) {
            if (term.sites.size() == 1) {
                const int s = term.sites[0];
                const int in = local_index(basis, c, s);
                for (int out = 0; out < 2; ++out) {
                    const Complex v = term.matrix(out, in);
                    if (v == Complex{}) continue;
                    const Config c2 = with_local(basis, c, s, out);
                    if (std::popcount(c2) != k) throw ConfigError("local term does not conserve the excitation number");
                    triplets.emplace_back(static_cast<int>(basis.index_of(c2)), static_cast<int>(col), v);
                }
            } else if (term.sites.size() == 2) {
                const int s0 = term.sites[0];
                const int s1 = term.sites[1];
                const int in = 2 * local_index(basis, c, s0) + local_index(basis, c, s1);
                for (int out = 0; out < 4; ++out) {
                    const Complex v = term.matrix(out, in);
                    if (v == Complex{}) continue;
                    const Config c2 = with_local(basis, with_local(basis, c, s0, out / 2), s1, out % 2);
                    if (std::popcount(c2) != k) throw ConfigError("local term does not conserve the excitation number");
                    triplets.emplace_back(static_cast<int>(basis.index_of(c2)), static_cast<int>(col), v);
                }
            } else {
                throw ConfigError("local terms must act on one or two sites");
            }
        }
    }
    matrix_.resize(dim, dim);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.prune(Complex{}, 0.0);
    matrix_.makeCompressed();

    Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(dim);
    bool have_off = false;
    uniform_ = true;
    row_start_.assign(1, 0);
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        double row = 0.0;
        for (Matrix::InnerIterator it(matrix_, r); it; ++it) {
            row += std::abs(it.value());
            if (it.col() == r) {
                diag[r] = it.value();
                continue;
            }
            if (!have_off) {
                off_value_ = it.value();
                have_off = true;
            }
            uniform_ = uniform_ && it.value() == off_value_;
            off_cols_.push_back(it.col());
        }
        row_start_.push_back(static_cast<int>(off_cols_.size()));
        inf_norm_ = std::max(inf_norm_, row);
    }
    if (uniform_) {
        diag_ = diag;
    } else {
        row_start_.clear();
        off_cols_.clear();
    }
    if (dim == 0) return;

    // Centre of the diagonal's bounding box; subtracting it tightens the
    // norm bound used to pick propagation substeps.
    shift_ = Complex(0.5 * (diag.real().minCoeff() + diag.real().maxCoeff()),
                     0.5 * (diag.imag().minCoeff() + diag.imag().maxCoeff()));
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
        double row = std::abs(diag[r] - shift_);
        for (Matrix::InnerIterator it(matrix_, r); it; ++it)
            if (it.col() != r) row += std::abs(it.value());
        shifted_norm_ = std::max(shifted_norm_, row);
    }
}

void SectorOperator::apply(const Eigen::VectorXcd& v, Eigen::VectorXcd& out, Complex shift) const {
    out.resize(v.size());
    if (!uniform_) {
        out.noalias() = matrix_ * v;
        if (shift != Complex{}) out -= shift * v;
        return;
    }
    const Complex* x = v.data();
    const int* cols = off_cols_.data();
    for (Eigen::Index r = 0; r < v.size(); ++r) {
        Complex acc{};
        for (int p = row_start_[static_cast<std::size_t>(r)]; p < row_start_[static_cast<std::size_t>(r) + 1]; ++p)
            acc += x[cols[p]];
        out[r] = (diag_[r] - shift) * x[r] + off_value_ * acc;
    }
}

}  // namespace qjump
