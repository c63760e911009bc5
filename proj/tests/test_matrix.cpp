#include <gtest/gtest.h>

#include <random>

#include <r1h/errors.hpp>
#include <r1h/matrix.hpp>

#include "support.hpp"

using namespace r1h;
using r1h::test::cd;

TEST(ComplexMatrix, RejectsEmptyAndNonFinite)
{
    EXPECT_THROW(ComplexMatrix(Eigen::MatrixXcd(0, 3)), InvalidArgument);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(2, 2);
    m(1, 0) = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
    EXPECT_THROW(ComplexMatrix{m}, InvalidArgument);
    m(1, 0) = cd(0.0, std::numeric_limits<double>::infinity());
    EXPECT_THROW(ComplexMatrix{m}, InvalidArgument);
}

TEST(ComplexMatrix, InitializerIsRowMajorStorageColumnMajor)
{
    const ComplexMatrix x = from_real({{1, 2, 3}, {4, 5, 6}});
    ASSERT_EQ(x.rows(), 2u);
    ASSERT_EQ(x.cols(), 3u);
    EXPECT_EQ(x(0, 2), cd(3.0));
    EXPECT_EQ(x(1, 0), cd(4.0));
    // vec(X) order
    const cd* raw = x.eigen().data();
    EXPECT_EQ(raw[0], cd(1.0));
    EXPECT_EQ(raw[1], cd(4.0));
    EXPECT_EQ(raw[2], cd(2.0));
}

TEST(HankelFromVector, WorkedExamples)
{
    const ComplexMatrix a = hankel_from_vector({{1, 2, 3, 4}, 2});
    EXPECT_EQ(a, from_real({{1, 2, 3}, {2, 3, 4}}));

    const ComplexMatrix b = hankel_from_vector({{5}, 1});
    EXPECT_EQ(b, from_real({{5}}));

    const cd p(1, 2), q(-3, 0.5), r(0, 7);
    const ComplexMatrix c = hankel_from_vector({{p, q, r}, 3});
    ASSERT_EQ(c.cols(), 1u);
    EXPECT_EQ(c(0, 0), p);
    EXPECT_EQ(c(1, 0), q);
    EXPECT_EQ(c(2, 0), r);
}

TEST(HankelFromVector, RejectsShortGenerator)
{
    EXPECT_THROW(hankel_from_vector({{1, 2}, 3}), InvalidArgument);
    EXPECT_THROW(hankel_from_vector({{1, 2}, 0}), InvalidArgument);
}

TEST(HankelProjectCheck, WorkedExamples)
{
    EXPECT_TRUE(hankel_project_check(from_real({{1, 2}, {2, 3}}), 0.0));
    EXPECT_FALSE(hankel_project_check(from_real({{1, 2}, {9, 3}}), 0.0));
    EXPECT_TRUE(hankel_project_check(ComplexMatrix{{1.0, cd(2.0 + 1e-13)}, {2.0, 3.0}}, 1e-12));
}

TEST(HankelProjectCheck, EveryGeneratedHankelPasses)
{
    std::mt19937_64 gen(11);
    std::normal_distribution<double> n;
    for (std::size_t m = 1; m <= 12; ++m)
    {
        std::vector<cd> h(m);
        for (auto& v : h)
        {
            v = cd(n(gen), n(gen));
        }
        for (std::size_t d = 1; d <= m; ++d)
        {
            EXPECT_TRUE(hankel_project_check(hankel_from_vector({h, d}), 0.0)) << m << " " << d;
        }
    }
}

TEST(AntidiagonalSums, MatchesLoop)
{
    const ComplexMatrix x = test::random_matrix(4, 6, 3);
    const auto g = antidiagonal_sums(x);
    ASSERT_EQ(g.size(), 9u);
    for (std::size_t m = 0; m < g.size(); ++m)
    {
        cd acc = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
        {
            for (std::size_t j = 0; j < 6; ++j)
            {
                if (i + j == m)
                {
                    acc += x(i, j);
                }
            }
        }
        EXPECT_NEAR(std::abs(acc - g[m]), 0.0, 1e-14);
    }
}

TEST(StructureVector, WorkedExamples)
{
    const auto a = structure_vector(0.0, 3);
    EXPECT_EQ(a.v(0), cd(1.0));
    EXPECT_EQ(a.v(1), cd(0.0));
    EXPECT_EQ(a.v(2), cd(0.0));

    const auto b = structure_vector(1.0, 4);
    for (int i = 0; i < 4; ++i)
    {
        EXPECT_NEAR(std::abs(b.v(i) - 0.5), 0.0, 1e-15);
    }

    // explicit power sum: [1, 0.5] / sqrt(1.25)
    const auto c = structure_vector(0.5, 2);
    EXPECT_NEAR(c.v(0).real(), 1.0 / std::sqrt(1.25), 1e-15);
    EXPECT_NEAR(c.v(1).real(), 0.5 / std::sqrt(1.25), 1e-15);
    EXPECT_NEAR(c.v(0).real(), 0.894427, 1e-6);
    EXPECT_NEAR(c.v(1).real(), 0.447214, 1e-6);
}

TEST(StructureVector, UnitNormAndPositiveLead)
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const double rho = u(gen);
        const cd z = std::polar(rho, 2.0 * std::numbers::pi * u(gen));
        const auto d = static_cast<std::size_t>(1 + trial % 64);
        const auto s = structure_vector(z, d);
        ASSERT_EQ(s.size(), d);
        EXPECT_NEAR(s.v.norm(), 1.0, 1e-12);
        EXPECT_GT(s.v(0).real(), 0.0);
        EXPECT_EQ(s.v(0).imag(), 0.0);
    }
}

TEST(StructureVector, MatchesNaivePowerSum)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const cd z = std::polar(1.6 * u(gen), 2.0 * std::numbers::pi * u(gen));
        const std::size_t d = 1 + trial % 20;
        const auto s = structure_vector(z, d);
        const auto ref = test::naive_structure(z, d);
        for (std::size_t i = 0; i < d; ++i)
        {
            // the library fixes the phase so entry 0 is real; the naive one is too
            EXPECT_NEAR(std::abs(s.v(static_cast<Eigen::Index>(i)) - ref[i]), 0.0, 1e-12);
        }
    }
}

TEST(StructureVector, LargeGeneratorDoesNotOverflow)
{
    const auto s = structure_vector(cd(0.0, 1e6), 64);
    EXPECT_TRUE(s.v.allFinite());
    EXPECT_NEAR(s.v.norm(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s.v(63)), 1.0, 1e-9);
}

TEST(PowerVectorNorm, ContinuousAcrossUnitCircleBranch)
{
    for (std::size_t d : {1u, 2u, 7u, 64u, 512u})
    {
        const double inside = power_vector_norm(1.0 - 1e-9, d);
        const double on = power_vector_norm(1.0, d);
        EXPECT_NEAR(inside, on, 1e-6 * std::sqrt(static_cast<double>(d))) << d;
        // just outside the branch threshold the closed form is used
        const double closed = power_vector_norm(1.0 - 2e-9, d);
        EXPECT_NEAR(closed, on, 1e-6 * std::sqrt(static_cast<double>(d))) << d;
    }
}

TEST(PowerVectorNorm, MatchesExplicitSum)
{
    for (double r : {0.0, 0.1, 0.5, 0.9, 0.999, 0.99999999})
    {
        for (std::size_t d : {1u, 3u, 10u, 100u})
        {
            double ss = 0.0;
            for (std::size_t i = 0; i < d; ++i)
            {
                ss += std::pow(r, 2.0 * static_cast<double>(i));
            }
            EXPECT_NEAR(power_vector_norm(r, d), std::sqrt(ss), 1e-12 * std::sqrt(ss));
        }
    }
}

TEST(Flip, WorkedExamples)
{
    const ComplexMatrix x = from_real({{1, 2}, {3, 4}});
    EXPECT_EQ(flip(x, FlipMode::rows), from_real({{3, 4}, {1, 2}}));
    EXPECT_EQ(flip(x, FlipMode::both), from_real({{4, 3}, {2, 1}}));
    const ComplexMatrix r = test::random_matrix(3, 4, 9);
    EXPECT_EQ(flip(flip(r, FlipMode::both), FlipMode::both), r);
    EXPECT_EQ(flip(flip(r, FlipMode::rows), FlipMode::rows), r);
}

TEST(Flip, PreservesEntriesAndNorms)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const ComplexMatrix x = test::random_matrix(2 + seed % 5, 1 + seed % 4, seed);
        for (FlipMode mode : {FlipMode::rows, FlipMode::both})
        {
            const ComplexMatrix f = flip(x, mode);
            EXPECT_NEAR(l1_norm(f), l1_norm(x), 1e-14 * l1_norm(x));
            EXPECT_NEAR(l2_norm(f), l2_norm(x), 1e-14 * l2_norm(x));
            std::vector<std::pair<double, double>> a, b;
            for (std::size_t k = 0; k < x.rows() * x.cols(); ++k)
            {
                a.emplace_back(x.eigen().data()[k].real(), x.eigen().data()[k].imag());
                b.emplace_back(f.eigen().data()[k].real(), f.eigen().data()[k].imag());
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            EXPECT_EQ(a, b);
        }
        EXPECT_EQ(flip(x, FlipMode::both), test::naive_flip_both(x));
    }
}

TEST(Rank1Hankel, IsHankelAndRankOne)
{
    const cd c(1.5, -0.5);
    for (cd z : {cd(0.3, 0.4), cd(-0.9, 0.0), cd(0.0, 1.0), cd(2.0, 1.0)})
    {
        const ComplexMatrix h = rank1_hankel(c, z, 4, 5);
        EXPECT_TRUE(hankel_project_check(h, 1e-12 * h.max_abs()));
        EXPECT_LT(test::max_entry_gap(h, test::naive_rank1(c, z, 4, 5)), 1e-12);
        for (std::size_t i = 0; i + 1 < 4; ++i)
        {
            for (std::size_t j = 0; j + 1 < 5; ++j)
            {
                const cd minor = h(i, j) * h(i + 1, j + 1) - h(i, j + 1) * h(i + 1, j);
                EXPECT_NEAR(std::abs(minor), 0.0, 1e-12);
            }
        }
    }
}

TEST(Norms, ModulusBasedL1)
{
    const ComplexMatrix x{{cd(3, 4), cd(0, -1)}};
    EXPECT_DOUBLE_EQ(l1_norm(x), 6.0);
    EXPECT_DOUBLE_EQ(l2_norm(x), std::sqrt(26.0));
}
