#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qjump/error.hpp"
#include "qjump/model.hpp"
#include "qjump/sector_basis.hpp"
#include "qjump/sector_operator.hpp"

using namespace qjump;

namespace {

ModelConfig chain(int n, int k, double strength, HamiltonianKind kind = HamiltonianKind::Staggered) {
    ModelConfig c;
    c.n_sites = n;
    c.n_excitations = k;
    c.strength = strength;
    c.hamiltonian = kind;
    return c;
}

Eigen::Vector4cd basis4(int index) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v[index] = 1.0;
    return v;
}

constexpr int kUpUp = 0, kUpDown = 1, kDownUp = 2, kDownDown = 3;

}  // namespace

TEST(SectorBasis, DimensionAndRankRoundTrip) {
    for (int n = 1; n <= 12; ++n)
        for (int k = 0; k <= n; ++k) {
            const SectorBasis b(n, k);
            ASSERT_EQ(b.dimension(), binomial(n, k));
            for (std::size_t i = 0; i < b.dimension(); ++i) {
                ASSERT_EQ(std::popcount(b.state(i)), k);
                ASSERT_EQ(b.index_of(b.state(i)), i);
                if (i > 0) {
                    ASSERT_LT(b.state(i - 1), b.state(i));
                }
            }
        }
}

TEST(SectorBasis, FirstSiteIsMostSignificantBit) {
    const SectorBasis b(4, 1);
    EXPECT_TRUE(b.is_up(0b1000, 0));
    EXPECT_TRUE(b.is_up(0b0001, 3));
    EXPECT_EQ(b.site_mask(0), Config{8});
}

TEST(Hamiltonian, ZeroCouplingGivesZeroTerms) {
    for (const auto& t : build_hamiltonian(chain(6, 2, 0.0))) EXPECT_EQ(t.matrix.norm(), 0.0);
}

TEST(Hamiltonian, StaggeredSignConvention) {
    const auto terms = build_hamiltonian(chain(2, 1, 1.0));
    Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
    for (const auto& t : terms) {
        ASSERT_EQ(t.sites.size(), 1u);
        total += t.sites[0] == 0 ? local::kron(t.matrix, local::identity2()) : local::kron(local::identity2(), t.matrix);
    }
    // -sigma^z_1 + sigma^z_2 on (up up, up down, down up, down down).
    const Eigen::Vector4d expected(0.0, -2.0, 2.0, 0.0);
    EXPECT_LT((total.diagonal().real() - expected).norm(), 1e-14);
    EXPECT_LT((total - Eigen::Matrix4cd(total.diagonal().asDiagonal())).norm(), 1e-14);
}

TEST(Hamiltonian, NearestNeighbourBlock) {
    const auto terms = build_hamiltonian(chain(2, 1, 4.0, HamiltonianKind::NearestNeighbor));
    ASSERT_EQ(terms.size(), 1u);
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(0, 0) = 4.0;
    EXPECT_LT((terms[0].matrix - expected).norm(), 1e-14);
}

TEST(JumpOperator, ActionOnTwoSiteStates) {
    const auto jumps = build_jump_operators(chain(2, 1, 0.0));
    ASSERT_EQ(jumps.size(), 1u);
    const Eigen::Matrix4cd c = jumps[0].matrix;
    EXPECT_LT((c * basis4(kDownDown)).norm(), 1e-15);
    EXPECT_LT((c * basis4(kUpDown) - (basis4(kUpDown) + basis4(kDownUp))).norm(), 1e-15);
    EXPECT_LT((c * (basis4(kUpDown) + basis4(kDownUp))).norm(), 1e-15);
}

TEST(JumpOperator, RankOneWithSingularValueTwo) {
    const auto jumps = build_jump_operators(chain(5, 2, 0.3));
    EXPECT_EQ(jumps.size(), 4u);
    for (const auto& j : jumps) {
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(j.matrix);
        EXPECT_NEAR(svd.singularValues()[0], 2.0, 1e-14);
        EXPECT_LT(svd.singularValues().tail(3).norm(), 1e-14);
        // Maps the bond singlet onto the triplet.
        EXPECT_LT((j.matrix * local::singlet() - 2.0 * local::triplet()).norm(), 1e-14);
    }
}

TEST(EffectiveHamiltonian, TwoSiteDissipatorIsSingletProjector) {
    const auto terms = build_effective_hamiltonian(chain(2, 1, 0.0));
    Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
    for (const auto& t : terms)
        if (t.sites.size() == 2) total += t.matrix;
    const Eigen::Vector4cd s = local::singlet();
    const Eigen::Matrix4cd expected = Complex(0.0, -2.0) * s * s.adjoint();
    EXPECT_LT((total - expected).norm(), 1e-14);
}

TEST(EffectiveHamiltonian, ZeroKappaIsCoherentPart) {
    ModelConfig c = chain(6, 2, 0.7);
    c.kappa = 0.0;
    const SectorBasis b(6, 2);
    const auto h0 = build_hamiltonian(c);
    const auto heff = build_effective_hamiltonian(c);
    EXPECT_LT((SectorOperator(b, h0).to_dense() - SectorOperator(b, heff).to_dense()).norm(), 1e-14);
}

TEST(EffectiveHamiltonian, AntiHermitianPartIsNegativeSemidefinite) {
    for (auto kind : {HamiltonianKind::Staggered, HamiltonianKind::NearestNeighbor}) {
        const ModelConfig c = chain(8, 3, 1.3, kind);
        const SectorBasis b(8, 3);
        const Eigen::MatrixXcd h = SectorOperator(b, build_effective_hamiltonian(c)).to_dense();
        const Eigen::MatrixXcd a = Complex(0.0, -0.5) * (h - h.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
        EXPECT_LT(es.eigenvalues().maxCoeff(), 1e-12);
    }
}

TEST(DickeState, SmallCases) {
    const DenseState d2 = dicke_state(2, 1);
    ASSERT_EQ(d2.dimension(), 2u);
    EXPECT_NEAR(std::abs(d2.amplitudes[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d2.amplitudes[1] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    const DenseState d4 = dicke_state(4, 2);
    ASSERT_EQ(d4.dimension(), 6u);
    for (Eigen::Index i = 0; i < 6; ++i) EXPECT_NEAR(d4.amplitudes[i].real(), 1.0 / std::sqrt(6.0), 1e-15);
}

TEST(DickeState, AnnihilatedByEveryJump) {
    for (int n = 2; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) {
            const DenseState d = dicke_state(n, k);
            const auto jumps = build_jump_operators(chain(n, k, 0.0));
            for (const auto& j : jumps) {
                const SectorOperator op(*d.basis, std::span<const LocalTerm>(&j, 1));
                ASSERT_LT(op.apply(d.amplitudes).norm(), 1e-13) << "N=" << n << " k=" << k;
            }
        }
}

TEST(ModelConfig, ValidationRejectsBadInput) {
    EXPECT_THROW(chain(4, 5, 0.0).validate(), ConfigError);
    ModelConfig c = chain(4, 1, 0.0);
    c.kappa = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_EQ(hamiltonian_kind_from_string(to_string(HamiltonianKind::NearestNeighbor)),
              HamiltonianKind::NearestNeighbor);
    EXPECT_THROW(hamiltonian_kind_from_string("ising"), ConfigError);
}

TEST(SectorOperator, MatchesKroneckerConstruction) {
    const ModelConfig c = chain(4, 2, 0.9);
    const SectorBasis b(4, 2);
    const auto terms = build_effective_hamiltonian(c);
    const Eigen::MatrixXcd sector = SectorOperator(b, terms).to_dense();

    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(16, 16);
    for (const auto& t : terms) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
        for (int s = 0; s < 4;) {
            Eigen::MatrixXcd blk;
            if (t.sites[0] == s) {
                blk = t.matrix;
                s += static_cast<int>(t.sites.size());
            } else {
                blk = Eigen::Matrix2cd::Identity();
                ++s;
            }
            Eigen::MatrixXcd next(op.rows() * blk.rows(), op.cols() * blk.cols());
            for (Eigen::Index i = 0; i < op.rows(); ++i)
                for (Eigen::Index j = 0; j < op.cols(); ++j)
                    next.block(i * blk.rows(), j * blk.cols(), blk.rows(), blk.cols()) = op(i, j) * blk;
            op = next;
        }
        full += op;
    }
    // Full-space index: local 0 = up, site 0 most significant, so index bit
    // (3 - i) set means site i is down.
    for (std::size_t r = 0; r < b.dimension(); ++r)
        for (std::size_t cidx = 0; cidx < b.dimension(); ++cidx) {
            const auto fr = static_cast<Eigen::Index>(~b.state(r) & 0xF);
            const auto fc = static_cast<Eigen::Index>(~b.state(cidx) & 0xF);
            ASSERT_LT(std::abs(sector(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) - full(fr, fc)),
                      1e-14);
        }
}
