#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "qjump/analysis/dicke_entropy.hpp"
#include "qjump/dense_backend.hpp"
#include "qjump/error.hpp"
#include "qjump/rng.hpp"

using namespace qjump;

namespace {

ModelConfig chain(int n, int k, double v, double kappa = 1.0) {
    ModelConfig c;
    c.n_sites = n;
    c.n_excitations = k;
    c.strength = v;
    c.kappa = kappa;
    return c;
}

// |up down> on two sites: site 0 up is the higher bit.
DenseState up_down(const DenseModel& m) { return product_state(m.basis(), 0b10); }

}  // namespace

TEST(EvolveNoJump, DarkStateIsInvariant) {
    const DenseModel m(chain(8, 2, 0.0));
    const DenseState d = dicke_state(8, 2);
    const DenseState psi{m.basis(), d.amplitudes};
    const DenseState out = evolve_no_jump(psi, m.effective_hamiltonian(), 0.5);
    EXPECT_LT((out.amplitudes - psi.amplitudes).norm(), 1e-13);
}

TEST(EvolveNoJump, ContinuousInDt) {
    const DenseModel m(chain(6, 2, 0.8));
    Rng rng(4);
    const DenseState psi = random_sector_state(m.basis(), rng);
    const double c = m.effective_hamiltonian().infinity_norm();
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        const DenseState out = evolve_no_jump(psi, m.effective_hamiltonian(), dt);
        EXPECT_LE((out.amplitudes - psi.amplitudes).norm(), c * dt);
    }
}

TEST(EvolveNoJump, TwoLevelClosedForm) {
    const DenseModel m(chain(2, 1, 0.0));
    const DenseState psi = up_down(m);
    for (double dt : {0.01, 0.5, 3.0}) {
        const DenseState out = evolve_no_jump(psi, m.effective_hamiltonian(), dt);
        // |up down> = (|t> + |s>)/sqrt 2 and the singlet decays as exp(-2 kappa t).
        EXPECT_NEAR(out.amplitudes.squaredNorm(), 0.5 * (1.0 + std::exp(-4.0 * dt)), 1e-14);
    }
}

TEST(EvolveNoJump, MatchesMatrixExponential) {
    const DenseModel m(chain(6, 2, 0.7));
    Rng rng(9);
    const DenseState psi = random_sector_state(m.basis(), rng);
    const Eigen::MatrixXcd h = m.effective_hamiltonian().to_dense();
    for (double dt : {0.01, 0.37, 2.5}) {
        const Eigen::MatrixXcd u = (Complex(0.0, -dt) * h).exp();
        const DenseState out = evolve_no_jump(psi, m.effective_hamiltonian(), dt);
        EXPECT_LT((out.amplitudes - u * psi.amplitudes).norm(), 1e-12) << "dt=" << dt;
    }
}

TEST(JumpWeights, ClosedFormCases) {
    const DenseModel m2(chain(2, 1, 0.0, 1.0));
    const auto w = jump_weights(up_down(m2), m2.jumps(), 1.0);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NEAR(w[0], 2.0, 1e-14);

    const DenseModel m(chain(8, 2, 0.0));
    const DenseState d{m.basis(), dicke_state(8, 2).amplitudes};
    for (double x : jump_weights(d, m.jumps(), 1.0)) EXPECT_NEAR(x, 0.0, 1e-14);

    const DenseModel empty(chain(6, 0, 0.3));
    for (double x : jump_weights(product_state(empty.basis(), 0), empty.jumps(), 1.0)) EXPECT_EQ(x, 0.0);
}

TEST(JumpWeights, TotalRateFromEffectiveHamiltonian) {
    const DenseModel m(chain(9, 3, 0.4, 1.7));
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const DenseState psi = random_sector_state(m.basis(), rng);
        const auto w = jump_weights(psi, m.jumps(), 1.7);
        double sum = 0.0;
        for (double x : w) sum += x;
        EXPECT_NEAR(total_jump_rate(psi, m.effective_hamiltonian()), sum, 1e-12);
    }
}

TEST(ApplyJump, TwoSiteResult) {
    const DenseModel m(chain(2, 1, 0.0));
    const DenseState out = apply_jump(up_down(m), m, 0);
    EXPECT_NEAR(out.amplitudes.norm(), 1.0, 1e-15);
    EXPECT_NEAR(out.amplitudes[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(out.amplitudes[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ApplyJump, PostJumpCorrelations) {
    const int n = 8, bond = 3;
    const DenseModel m(chain(n, 2, 0.5));
    Rng rng(5);
    const DenseState out = apply_jump(random_sector_state(m.basis(), rng), m, bond);
    // The bond is left in its triplet: O on the bond is maximal, and every
    // correlator with exactly one end on the bond vanishes.
    EXPECT_NEAR(std::abs(correlator(out, bond, bond + 1)), 0.5, 1e-13);
    for (int j = 0; j < n; ++j) {
        if (j == bond || j == bond + 1) continue;
        EXPECT_LT(std::abs(correlator(out, bond, j)), 1e-13);
        EXPECT_LT(std::abs(correlator(out, bond + 1, j)), 1e-13);
    }
}

TEST(ApplyJump, ZeroWeightIsAnError) {
    const DenseModel m(chain(6, 2, 0.0));
    const DenseState d{m.basis(), dicke_state(6, 2).amplitudes};
    EXPECT_THROW(apply_jump(d, m, 2), std::logic_error);
}

TEST(Entanglement, ReferenceValues) {
    const DenseModel m(chain(6, 2, 0.0));
    EXPECT_NEAR(entanglement_entropy(product_state(m.basis(), 0b100100), 3), 0.0, 1e-14);
    EXPECT_NEAR(entanglement_entropy(dicke_state(2, 1), 1), 1.0, 1e-14);
    EXPECT_NEAR(entanglement_entropy(dicke_state(4, 2), 2), 1.2516291673878235, 1e-12);
}

TEST(Entanglement, ProfileOfDickeIsSymmetricAndMatchesClosedForm) {
    const DenseModel m(chain(10, 3, 0.0));
    const DenseState d{m.basis(), dicke_state(10, 3).amplitudes};
    const auto p = entanglement_profile(d, m);
    ASSERT_EQ(p.size(), 9u);
    for (int l = 1; l <= 9; ++l) {
        EXPECT_NEAR(p[l - 1], p[9 - l], 1e-12);
        EXPECT_NEAR(p[l - 1], analysis::dicke_entropy(10, 3, l), 1e-12);
    }
}

TEST(Entanglement, SchmidtProbabilitiesSumToOne) {
    const DenseModel m(chain(10, 4, 0.3));
    Rng rng(1);
    const DenseState psi = random_sector_state(m.basis(), rng);
    for (int cut = 1; cut < 10; ++cut) {
        const auto p = schmidt_probabilities(psi, m.cut_index(cut));
        double s = 0.0;
        for (double x : p) {
            EXPECT_GE(x, -1e-14);
            s += x;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Correlator, DickeAndProductValues) {
    EXPECT_NEAR(correlator(dicke_state(2, 1), 0, 1).real(), 0.5, 1e-15);
    const DenseModel m(chain(6, 0, 0.0));
    EXPECT_EQ(std::abs(correlator(product_state(m.basis(), 0), 0, 4)), 0.0);
    for (int n = 3; n <= 10; ++n)
        for (int k = 1; k < n; ++k) {
            const DenseState d = dicke_state(n, k);
            const double expected = static_cast<double>(k * (n - k)) / (n * (n - 1));
            for (int j = 1; j < n; ++j) ASSERT_NEAR(correlator(d, 0, j).real(), expected, 1e-13);
        }
}

TEST(Correlator, BoundedByOneHalf) {
    const DenseModel m(chain(8, 3, 0.0));
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseState psi = random_sector_state(m.basis(), rng);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != j) {
                    ASSERT_LE(std::abs(correlator(psi, i, j)), 0.5 + 1e-12);
                }
    }
}

TEST(Overlap, NormalizationAndOrthogonality) {
    const DenseModel m(chain(6, 2, 0.0));
    Rng rng(3);
    const DenseState psi = random_sector_state(m.basis(), rng);
    EXPECT_NEAR(std::abs(overlap(psi, psi)), 1.0, 1e-14);
    EXPECT_EQ(std::abs(overlap(product_state(m.basis(), 0b110000), product_state(m.basis(), 0b000011))), 0.0);
}

TEST(SigmaZ, SumIsConserved) {
    const DenseModel m(chain(8, 3, 0.6));
    Rng rng(12);
    DenseState psi = random_sector_state(m.basis(), rng);
    for (int step = 0; step < 5; ++step) {
        double total = 0.0;
        for (int i = 0; i < 8; ++i) total += sigma_z(psi, i);
        EXPECT_NEAR(total, 2.0 * 3 - 8, 1e-12);
        psi = evolve_no_jump(psi, m.effective_hamiltonian(), 0.3);
        psi.normalize();
    }
}
