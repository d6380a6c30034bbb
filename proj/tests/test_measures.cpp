#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lurq/measures.hpp"
#include "lurq/optics.hpp"
#include "oracles.hpp"

using namespace lurq;

namespace {

DensityMatrix werner(double p) {
    return validate_density(p * pure_to_density(states::singlet()).matrix() + (1 - p) * Operator4::Identity() / 4.0);
}

// Random single-qubit state from a Bloch vector inside the ball.
Operator2 random_qubit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Vector3d r;
    do {
        r << u(rng), u(rng), u(rng);
    } while (r.norm() > 1.0);
    return 0.5 * (pauli_operator(PauliIndex(0)) + r(0) * pauli_operator(PauliIndex(1)) +
                  r(1) * pauli_operator(PauliIndex(2)) + r(2) * pauli_operator(PauliIndex(3)));
}

}  // namespace

TEST(Covariance, Examples) {
    const DensityMatrix singlet = pure_to_density(states::singlet());
    EXPECT_NEAR(covariance(singlet, PauliIndex(1), PauliIndex(1)), -1.0, 1e-12);

    const DensityMatrix hh = pure_to_density(states::hh());
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) EXPECT_NEAR(covariance(hh, PauliIndex(i), PauliIndex(j)), 0.0, 1e-15);
}

TEST(Covariance, PhaseDampedZZMatchesOracle) {
    for (double theta_deg : {5.0, 12.0, 22.5, 31.0}) {
        for (double p : {0.0, 0.1, 0.35, 0.5, 0.9}) {
            const double a = std::cos(2 * deg_to_rad(theta_deg));
            const double b = std::sin(2 * deg_to_rad(theta_deg));
            const oracle::M4 brute = oracle::phase_damp(oracle::pure(oracle::ket(a, 0, 0, b)), 3, p);
            const double expected = 1.0 - std::pow(a * a - b * b, 2);
            ASSERT_NEAR(oracle::covariance(brute, 3, 3), expected, 1e-12);

            const DensityMatrix rho = phase_damping(pure_to_density(prepare_parallel(deg_to_rad(theta_deg))),
                                                    ChannelSpec(DampingBasis::Z, p));
            EXPECT_NEAR(covariance(rho, PauliIndex(3), PauliIndex(3)), expected, 1e-12);
        }
    }
}

TEST(Covariance, RejectsIdentityIndex) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed();
    try {
        covariance(rho, PauliIndex(0), PauliIndex(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IdentityIndexNotAllowed);
    }
    EXPECT_THROW(covariance(rho, PauliIndex(2), PauliIndex(0)), Error);
}

TEST(Covariance, EntriesBoundedAndMatchOracle) {
    for (std::uint64_t s = 0; s < 500; ++s) {
        const DensityMatrix rho = random_density(RandomSeed{s});
        const CovarianceMatrix c = covariance_matrix(rho);
        EXPECT_LE(c.cwiseAbs().maxCoeff(), 1.0 + 1e-9);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) EXPECT_NEAR(c(i - 1, j - 1), oracle::covariance(rho.matrix(), i, j), 1e-12);
    }
}

TEST(GMeasure, Examples) {
    EXPECT_NEAR(g_measure(pure_to_density(states::singlet())).g, 3.0, 1e-12);
    EXPECT_NEAR(g_measure(pure_to_density(states::hh())).g, 0.0, 1e-15);
    EXPECT_FALSE(g_measure(pure_to_density(states::hh())).delta_g.has_value());

    // 0.91|HH> + 0.41|VV>, normalized. Expected value from oracle::g.
    const Ket4 psi = (0.91 * states::hh() + 0.41 * states::vv()).normalized();
    const GResult r = g_measure(pure_to_density(psi));
    EXPECT_NEAR(r.g, 1.4369410239915834, 1e-10);
    EXPECT_NEAR(r.g, r.covariance.squaredNorm(), 1e-12);
}

TEST(GMeasure, RangeOnRandomStates) {
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const double g = g_measure(random_density(RandomSeed{s})).g;
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, 3.0 + 1e-9);
        const double gp = g_measure(pure_to_density(random_pure(RandomSeed{s}))).g;
        EXPECT_LE(gp, 3.0 + 1e-9);
    }
}

TEST(Concurrence, Examples) {
    EXPECT_NEAR(concurrence(pure_to_density(states::singlet())), 1.0, 1e-12);
    EXPECT_NEAR(concurrence(pure_to_density(states::hh())), 0.0, 1e-15);
    for (double theta_deg : {0.0, 3.0, 10.0, 15.0, 22.5, 30.0, 44.0}) {
        const double a = std::cos(2 * deg_to_rad(theta_deg));
        const double b = std::sin(2 * deg_to_rad(theta_deg));
        const DensityMatrix rho = pure_to_density(prepare_parallel(deg_to_rad(theta_deg)));
        EXPECT_NEAR(concurrence(rho), 2 * a * b, 1e-12) << theta_deg;
    }
}

TEST(Concurrence, AgreesWithEigenvalueRoute) {
    // The eigenvalue route is accurate only to ~sqrt(eps) near rank-deficient
    // states; full-rank mixed states compare tightly.
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const DensityMatrix rho = random_density(RandomSeed{s});
        EXPECT_NEAR(concurrence(rho), oracle::concurrence_eig(rho.matrix()), 1e-9);
        const DensityMatrix pure = pure_to_density(random_pure(RandomSeed{s}));
        EXPECT_NEAR(concurrence(pure), oracle::concurrence_eig(pure.matrix()), 1e-6);
    }
}

TEST(Concurrence, ProductStatesAreExactlyZero) {
    for (std::uint64_t s = 0; s < 500; ++s) {
        const DensityMatrix rho = apply_local_unitary(pure_to_density(states::hh()), random_unitary2(RandomSeed{s}),
                                                      random_unitary2(RandomSeed{s + 77}));
        EXPECT_LT(concurrence(rho), 1e-12);
    }
}

TEST(Concurrence, InvariantUnderLocalUnitaries) {
    for (std::uint64_t s = 0; s < 2000; ++s) {
        const DensityMatrix rho = s % 2 ? random_density(RandomSeed{s}) : pure_to_density(random_pure(RandomSeed{s}));
        const DensityMatrix out = apply_local_unitary(rho, random_unitary2(RandomSeed{s + 1}), random_unitary2(RandomSeed{s + 2}));
        EXPECT_NEAR(concurrence(rho), concurrence(out), 1e-9);
    }
}

TEST(GConcurrenceMaps, Examples) {
    EXPECT_DOUBLE_EQ(g_from_concurrence(1.0), 3.0);
    EXPECT_DOUBLE_EQ(concurrence_from_g(3.0), 1.0);
    EXPECT_DOUBLE_EQ(g_from_concurrence(0.0), 0.0);
    EXPECT_NEAR(concurrence_from_g(1.4236), 0.7461846771634417, 1e-12);
    EXPECT_NEAR(g_from_concurrence(2 * 0.91 * 0.41), 1.4236712005925134, 1e-12);
}

TEST(GConcurrenceMaps, ComposeToIdentity) {
    for (int k = 0; k <= 1000; ++k) {
        const double c = k / 1000.0;
        EXPECT_NEAR(concurrence_from_g(g_from_concurrence(c)), c, 1e-12);
        const double g = 3.0 * k / 1000.0;
        EXPECT_NEAR(g_from_concurrence(concurrence_from_g(g)), g, 1e-12);
    }
}

TEST(GConcurrenceMaps, OutOfRange) {
    EXPECT_THROW(g_from_concurrence(1.01), Error);
    EXPECT_THROW(g_from_concurrence(-0.01), Error);
    EXPECT_THROW(concurrence_from_g(3.01), Error);
    EXPECT_THROW(concurrence_from_g(-1e-3), Error);
    try {
        concurrence_from_g(4.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
}

TEST(MixedStateBounds, Examples) {
    const GBounds s = mixed_state_bounds(pure_to_density(states::singlet()));
    EXPECT_NEAR(s.lower, 3.0, 1e-12);
    EXPECT_NEAR(s.g, 3.0, 1e-12);
    EXPECT_NEAR(s.upper, 3.0, 1e-12);

    const GBounds m = mixed_state_bounds(DensityMatrix::maximally_mixed());
    EXPECT_NEAR(m.lower, 0.0, 1e-15);
    EXPECT_NEAR(m.g, 0.0, 1e-15);
    EXPECT_NEAR(m.upper, 1.0, 1e-15);

    // Half singlet, half white noise. Oracle: c = 0.25, g = 0.75.
    const GBounds w = mixed_state_bounds(werner(0.5));
    EXPECT_NEAR(w.lower, 0.12890625, 1e-10);
    EXPECT_NEAR(w.g, 0.75, 1e-10);
    EXPECT_NEAR(w.upper, 1.125, 1e-10);
    EXPECT_LE(w.lower, w.g);
    EXPECT_LE(w.g, w.upper);
}

TEST(MixedStateBounds, PhaseDampedFamilyObeysBounds) {
    // Closed form: c = 2ab(1-2p)^2, g = (1-(a^2-b^2)^2)^2 + 8a^2b^2(1-2p)^4.
    for (int ti = 0; ti <= 10; ++ti) {
        for (int pi = 0; pi <= 10; ++pi) {
            const double theta = deg_to_rad(4.5 * ti);
            const double p = 0.1 * pi;
            const DensityMatrix rho = phase_damping(pure_to_density(prepare_parallel(theta)), ChannelSpec(DampingBasis::Z, p));
            const GBounds b = mixed_state_bounds(rho);
            EXPECT_LE(b.lower, b.g + 1e-9);
            EXPECT_LE(b.g, b.upper + 1e-9);
        }
    }
}

// The lower bound is not proven; low-rank mixtures are where it can fail.
// This records what a sweep finds without asserting either way.
TEST(MixedStateBounds, RecordsLowRankViolations) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    int lower_violations = 0;
    int upper_violations = 0;
    double worst = 0.0;
    for (int t = 0; t < 5000; ++t) {
        Eigen::Matrix<Complex, 4, 2> v;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 2; ++c) {
                const double re = normal(rng);
                const double im = normal(rng);
                v(r, c) = Complex(re, im);
            }
        Operator4 m = v * v.adjoint();
        m /= m.trace().real();
        const GBounds b = mixed_state_bounds(validate_density(m));
        if (b.g < b.lower - 1e-9) {
            ++lower_violations;
            worst = std::max(worst, b.lower - b.g);
        }
        if (b.g > b.upper + 1e-9) ++upper_violations;
    }
    RecordProperty("rank2_lower_violations", lower_violations);
    RecordProperty("rank2_upper_violations", upper_violations);
    std::printf("rank-2 sweep: %d lower-bound violations (worst %.4f), %d upper-bound violations of 5000\n",
                lower_violations, worst, upper_violations);
}

TEST(LurSum, Examples) {
    const LurSpec spec = LurSpec::pauli_triple();
    EXPECT_DOUBLE_EQ(spec.bound(), 4.0);

    const LurResult singlet = lur_sum(pure_to_density(states::singlet()), spec);
    EXPECT_NEAR(singlet.sum, 0.0, 1e-12);
    EXPECT_TRUE(singlet.violated);

    const LurResult hh = lur_sum(pure_to_density(states::hh()), spec);
    EXPECT_NEAR(hh.sum, 4.0, 1e-12);
    EXPECT_FALSE(hh.violated);

    const LurResult mixed = lur_sum(DensityMatrix::maximally_mixed(), spec);
    EXPECT_NEAR(mixed.sum, 6.0, 1e-12);
    EXPECT_FALSE(mixed.violated);
}

TEST(LurSum, SeparableStatesNeverViolate) {
    std::mt19937_64 rng(11);
    const LurSpec spec = LurSpec::pauli_triple();
    for (int t = 0; t < 2000; ++t) {
        const DensityMatrix rho = validate_density(tensor_product(random_qubit(rng), random_qubit(rng)));
        EXPECT_FALSE(lur_sum(rho, spec).violated);
    }
}

TEST(LurSum, SpecValidation) {
    EXPECT_THROW(LurSpec({}, {}, 1.0), Error);
    EXPECT_THROW(LurSpec({Operator2::Identity()}, {}, 1.0), Error);
    Operator2 bad = Operator2::Zero();
    bad(0, 1) = 1.0;
    try {
        lur_sum(DensityMatrix::maximally_mixed(), LurSpec({bad}, {bad}, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHermitianObservable);
    }
}

TEST(SchmidtCoeffs, Validation) {
    EXPECT_NO_THROW(SchmidtCoeffs(1.0, 0.0));
    EXPECT_TRUE(SchmidtCoeffs(0.8, 0.6).is_ordered());
    EXPECT_FALSE(SchmidtCoeffs(0.6, 0.8).is_ordered());
    EXPECT_THROW(SchmidtCoeffs(0.8, 0.7), Error);
    EXPECT_THROW(SchmidtCoeffs(-0.6, 0.8), Error);
    const SchmidtCoeffs s = SchmidtCoeffs::from_pump_angle(deg_to_rad(45.0));
    EXPECT_NEAR(s.a(), 0.0, 1e-15);
    EXPECT_NEAR(s.b(), 1.0, 1e-15);
}

TEST(KObservables, CompleteOrthonormalFamily) {
    for (double theta_deg = 0.0; theta_deg <= 45.0; theta_deg += 2.5) {
        const KObservables obs = k_observables(SchmidtCoeffs::from_pump_angle(deg_to_rad(theta_deg)));
        Operator4 sum = Operator4::Zero();
        for (const auto& m : obs.projectors) {
            EXPECT_LT((m * m - m).cwiseAbs().maxCoeff(), 1e-12);
            sum += m;
        }
        EXPECT_LT((sum - Operator4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(KMeasure, Examples) {
    const SchmidtCoeffs s(0.8, 0.6);
    const Ket4 psi1 = 0.8 * states::hh() + 0.6 * states::vv();
    const KResult target = k_measure(pure_to_density(psi1), s);
    EXPECT_NEAR(target.k, 0.0, 1e-12);

    const KResult hh = k_measure(pure_to_density(states::hh()), s);
    const auto brute = oracle::k_expectations(oracle::pure(oracle::ket(1, 0, 0, 0)), 0.8, 0.6);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(hh.expectations[i], brute[i], 1e-14);
    EXPECT_NEAR(hh.k, 2 * 0.64 * 0.36, 1e-12);
    EXPECT_NEAR(hh.k, hh.bound, 1e-12);

    const KResult mixed = k_measure(DensityMatrix::maximally_mixed(), s);
    EXPECT_NEAR(mixed.k, 0.75, 1e-12);
    EXPECT_NEAR(k_separable_bound(s), 0.4608, 1e-12);
}

TEST(KMeasure, MatchesOracleOnRandomStates) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const DensityMatrix rho = random_density(RandomSeed{seed});
        const SchmidtCoeffs s = SchmidtCoeffs::from_pump_angle(deg_to_rad(0.09 * static_cast<double>(seed)));
        EXPECT_NEAR(k_measure(rho, s).k, oracle::k_value(rho.matrix(), s.a(), s.b()), 1e-12);
    }
}

TEST(KMeasure, SeparableBoundOnRandomProductStates) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 4);
    for (int t = 0; t < 10000; ++t) {
        const DensityMatrix rho = validate_density(tensor_product(random_qubit(rng), random_qubit(rng)));
        const SchmidtCoeffs s = SchmidtCoeffs::from_pump_angle(angle(rng));
        const KResult r = k_measure(rho, s);
        ASSERT_GE(r.k, r.bound - 1e-9) << "trial " << t;
        ASSERT_GE(r.bound, 0.0);
        ASSERT_LE(r.bound, 0.5 + 1e-15);
    }
}
