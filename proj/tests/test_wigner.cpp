#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "catqed/validate.hpp"
#include "catqed/wigner.hpp"
#include "oracles.hpp"

using namespace catqed;

namespace {

// Direct evaluation of Σ_m Δ_m <m|R†ρR|m> with R built from series exponentials.
double wigner_direct(const Matrix& rho, int N, const double* delta, double theta, double phi) {
    const oracle::Spin s = oracle::spin(N);
    const oracle::Mat R =
        oracle::expm_series(Complex(0, phi) * s.jz) * oracle::expm_series(Complex(0, theta) * s.jy);
    const oracle::Mat M = R.adjoint() * rho * R;
    double w = 0.0;
    for (int k = 0; k <= N; ++k) w += delta[k] * M(k, k).real();
    return w;
}

}  // namespace

TEST(ClebschGordan, FrozenValues) {
    for (const auto& c : oracle::frozen::kCg)
        EXPECT_NEAR(clebsch_gordan(c.j1, c.m1, c.j2, c.m2, c.J, c.M), c.value, 1e-12 * std::max(1.0, std::abs(c.value)))
            << c.j1 << " " << c.m1 << " " << c.j2 << " " << c.m2 << " " << c.J << " " << c.M;
    // the tiny stretched coefficient, relatively
    EXPECT_NEAR(clebsch_gordan(16, 16, 32, 0, 16, 16) / 5.2633662341163702230e-10, 1.0, 1e-9);
}

TEST(ClebschGordan, SimpleValues) {
    EXPECT_NEAR(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1), 1.0, 1e-15);
}

TEST(ClebschGordan, SelectionRulesGiveZero) {
    EXPECT_EQ(clebsch_gordan(1, 1, 1, 0, 2, 0), 0.0);    // M mismatch
    EXPECT_EQ(clebsch_gordan(1, 0, 1, 0, 3, 0), 0.0);    // triangle
    EXPECT_EQ(clebsch_gordan(1, 2, 1, -2, 2, 0), 0.0);   // |m| > j
    EXPECT_EQ(clebsch_gordan(1, 0, 1, 0, 1, 0), 0.0);    // odd-J parity zero
    EXPECT_THROW(clebsch_gordan(0.3, 0, 1, 0, 1, 0), std::invalid_argument);
}

TEST(ClebschGordan, MatchesLadderConstruction) {
    for (double j : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto table = reference::ladder_cg(j, j);
        ASSERT_FALSE(table.empty());
        for (const auto& [key, value] : table) {
            const auto [m1, m2, J, M] = key;
            EXPECT_NEAR(clebsch_gordan(j, 0.5 * m1, j, 0.5 * m2, 0.5 * J, 0.5 * M), value, 1e-10);
        }
    }
}

TEST(ClebschGordan, Orthogonality) {
    // Σ_{m1,m2} C^{JM}_{j1 m1 j2 m2} C^{J'M}_{j1 m1 j2 m2} = δ_JJ'
    const double j1 = 4, j2 = 3.5, M = 0.5;
    for (double J = 0.5; J <= 7.5; J += 1.0)
        for (double Jp = 0.5; Jp <= 7.5; Jp += 1.0) {
            double s = 0.0;
            for (double m1 = -j1; m1 <= j1; m1 += 1.0)
                s += clebsch_gordan(j1, m1, j2, M - m1, J, M) * clebsch_gordan(j1, m1, j2, M - m1, Jp, M);
            EXPECT_NEAR(s, J == Jp ? 1.0 : 0.0, 1e-12);
        }
}

TEST(Kernel, FrozenWeights) {
    const auto& k2 = wigner_kernel(2).weights();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(k2[i], oracle::frozen::kDeltaN2[i], 1e-13);
    const auto& k3 = wigner_kernel(3).weights();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(k3[i], oracle::frozen::kDeltaN3[i], 1e-13);
}

TEST(Kernel, UnitTrace) {
    for (int N : {1, 4, 9, 32}) EXPECT_NEAR(wigner_kernel(N).weights().sum(), 1.0, 1e-10) << N;
}

TEST(Rotation, IdentityAndUnitarity) {
    EXPECT_LT((rotation_matrix(5, 0.0, 0.0) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-13);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix D = rotation_matrix(32, u(rng) / 2, u(rng));
        EXPECT_LT((D * D.adjoint() - Matrix::Identity(33, 33)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Rotation, SpinHalfSmallD) {
    for (double theta : {0.3, 1.7, 3.0}) {
        const Matrix d = small_d(1, theta);
        // e^{iθσy/2} in the (down, up) basis
        const oracle::Mat ref = oracle::expm_series(Complex(0, theta) * oracle::spin(1).jy);
        EXPECT_LT((d - ref).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_NEAR(d(0, 0).real(), std::cos(theta / 2), 1e-14);
        EXPECT_NEAR(std::abs(d(0, 1)), std::abs(std::sin(theta / 2)), 1e-14);
    }
}

TEST(Rotation, MatchesSeriesExponential) {
    const int N = 8;
    const oracle::Spin s = oracle::spin(N);
    const double theta = 1.234, phi = -0.77;
    const oracle::Mat ref = oracle::expm_series(Complex(0, phi) * s.jz) * oracle::expm_series(Complex(0, theta) * s.jy);
    EXPECT_LT((rotation_matrix(N, theta, phi) - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Wigner, IdentityIsConstant) {
    const int N = 6;
    const WignerGrid g = wigner_function(ElectronDensityMatrix(Matrix::Identity(N + 1, N + 1) / (N + 1.0)), {19, 24});
    EXPECT_NEAR(g.min(), 1.0 / (N + 1), 1e-12);
    EXPECT_NEAR(g.max(), 1.0 / (N + 1), 1e-12);
}

TEST(Wigner, MatchesDirectEvaluation) {
    std::mt19937_64 rng(2);
    const int N = 3;
    const oracle::Mat rho = oracle::random_density(N + 1, 2, rng);
    const WignerGrid g = wigner_function(ElectronDensityMatrix(rho), {7, 9});
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 9; ++j)
            EXPECT_NEAR(g.W(i, j), wigner_direct(rho, N, oracle::frozen::kDeltaN3, g.theta[i], g.phi[j]), 1e-12);
}

TEST(Wigner, IntegralIsOne) {
    std::mt19937_64 rng(3);
    for (int N : {2, 5, 8}) {
        const WignerGrid g = wigner_function(ElectronDensityMatrix(oracle::random_density(N + 1, 3, rng)), {41, 48});
        EXPECT_NEAR(g.integral(), 1.0, 1e-6) << N;
    }
}

TEST(Wigner, AllDownPeaksAtSouthPole) {
    const int N = 32;
    Matrix rho = Matrix::Zero(N + 1, N + 1);
    rho(0, 0) = 1.0;
    const WignerGrid g = wigner_function(ElectronDensityMatrix(rho), {91, 36});
    Eigen::Index i, j;
    g.W.maxCoeff(&i, &j);
    EXPECT_EQ(i, 90);  // θ = π
}

TEST(Wigner, GlobalPhaseInvariance) {
    std::mt19937_64 rng(4);
    const Vector psi = oracle::random_state(6, rng);
    const Vector phased = std::polar(1.0, 0.9) * psi;
    const WignerGrid a = wigner_function(ElectronDensityMatrix::from_pure(psi), {13, 16});
    const WignerGrid b = wigner_function(ElectronDensityMatrix::from_pure(phased), {13, 16});
    EXPECT_LT((a.W - b.W).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Wigner, AzimuthalCovariance) {
    std::mt19937_64 rng(5);
    const int N = 4, n_phi = 36, shift = 5;
    const double phi0 = 2 * M_PI * shift / n_phi;
    const oracle::Mat rho = oracle::random_density(N + 1, 2, rng);
    const oracle::Mat U = oracle::expm_series(Complex(0, phi0) * oracle::spin(N).jz);
    const WignerGrid a = wigner_function(ElectronDensityMatrix(rho), {11, n_phi});
    const WignerGrid b = wigner_function(ElectronDensityMatrix(U * rho * U.adjoint()), {11, n_phi});
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < n_phi; ++j) EXPECT_NEAR(b.W(i, (j + shift) % n_phi), a.W(i, j), 1e-8);
}

TEST(Wigner, GhzHasNegativeFringes) {
    const int N = 8;
    Vector psi = Vector::Zero(N + 1);
    psi[0] = psi[N] = 1.0 / std::sqrt(2.0);
    const WignerGrid g = wigner_function(ElectronDensityMatrix::from_pure(psi), {91, 72});
    EXPECT_LT(g.min(), -0.1);
}

TEST(Wigner, KernelMismatchAndFileFormat) {
    const WignerGrid g = wigner_function(ElectronDensityMatrix(Matrix::Identity(3, 3) / 3.0), {3, 2});
    std::ostringstream os;
    g.write(os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header, "# J=1 n_theta=3 n_phi=2");
    int rows = 0;
    double t, p, w;
    while (is >> t >> p >> w) ++rows;
    EXPECT_EQ(rows, 6);
    EXPECT_THROW(wigner_function(ElectronDensityMatrix(Matrix::Identity(3, 3) / 3.0), {}, &wigner_kernel(4)),
                 std::invalid_argument);
}
