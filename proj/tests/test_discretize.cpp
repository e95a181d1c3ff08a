#include "kirchhoff/bubble.hpp"
#include "kirchhoff/discrete.hpp"
#include "kirchhoff/mesh.hpp"
#include "kirchhoff/starts.hpp"
#include "checks.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace kirchhoff;

namespace {

double beta_fn(double x, double y) { return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y); }

} // namespace

TEST(Mesh, RejectsBadSizes) {
    EXPECT_THROW(make_mesh(4, 256), std::invalid_argument);
    EXPECT_THROW(make_mesh(5, 32), std::invalid_argument);
    EXPECT_THROW(grading_from_string("log"), std::invalid_argument);
    EXPECT_EQ(grading_from_string(to_string(Grading::Uniform)), Grading::Uniform);
}

TEST(Mesh, WeightsArePositiveAndSumToBallVolume) {
    for (auto g : {Grading::Uniform, Grading::Graded}) {
        for (int N : {5, 6, 9}) {
            const auto m = make_mesh(N, 200, g);
            const auto& w = m->weights();
            for (double x : w) {
                EXPECT_GT(x, 0.0);
            }
            EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), unit_ball_volume(N), 1e-13);
            EXPECT_DOUBLE_EQ(m->nodes().front(), 0.0);
            EXPECT_DOUBLE_EQ(m->nodes().back(), 1.0);
        }
    }
}

TEST(Mesh, NodesStrictlyIncreasing) {
    const auto m = make_mesh(5, 128);
    for (int e = 0; e < m->M(); ++e) {
        EXPECT_GT(m->spacing(e), 0.0);
    }
}

TEST(Discretize, QuadratureOfParabolaSecondOrder) {
    // |1 - r^2|_2^2 = N omega_N B(N/2, 3) / 2
    const int N = 5;
    const double exact = N * unit_ball_volume(N) * 0.5 * beta_fn(0.5 * N, 3.0);
    double prev_l = 0.0;
    double prev_c = 0.0;
    for (int M : {256, 512, 1024}) {
        const auto m = make_mesh(N, M, Grading::Uniform);
        auto f = [](double r) { return 1 - r * r; };
        const double lumped = std::abs(m->integrate_nodal([&](double r) { return f(r) * f(r); }) - exact);
        const double consistent = std::abs(functionals(DiscreteFunction::sample(m, f), 3.0).Q2 - exact);
        if (M == 256) {
            EXPECT_LT(consistent / exact, 2e-5);
            EXPECT_LT(lumped / exact, 5e-5);
        } else {
            EXPECT_NEAR(prev_l / lumped, 4.0, 0.2);
            EXPECT_NEAR(prev_c / consistent, 4.0, 0.2);
        }
        prev_l = lumped;
        prev_c = consistent;
    }
}

TEST(Discretize, ExactIntegralsForHatRepresentableFunction) {
    // u = 1 - r lies in the P1 space: A and the power integrals are exact up to quadrature.
    for (auto g : {Grading::Uniform, Grading::Graded}) {
        const int N = 5;
        const auto m = make_mesh(N, 128, g);
        const auto u = DiscreteFunction::sample(m, [](double r) { return 1.0 - r; });
        const auto fv = functionals(u, 3.0);
        const double area = N * unit_ball_volume(N);
        const double q = critical_exponent(N);
        EXPECT_NEAR(fv.A, unit_ball_volume(N), 1e-12);
        EXPECT_NEAR(fv.C, area * beta_fn(N, q + 1.0), 1e-12);
        EXPECT_NEAR(fv.P, area * beta_fn(N, 4.0), 1e-12);
        EXPECT_NEAR(fv.Q2, area * beta_fn(N, 3.0), 1e-12);
    }
}

TEST(Discretize, DirichletNormConverges) {
    // |grad (1 - r^2)|^2 = 4 N omega_N / (N + 2)
    const int N = 5;
    const double exact = 4.0 * N * unit_ball_volume(N) / (N + 2);
    double prev = 0.0;
    for (int M : {128, 256, 512}) {
        const auto m = make_mesh(N, M, Grading::Uniform);
        const auto u = DiscreteFunction::sample(m, [](double r) { return 1 - r * r; });
        const double err = std::abs(h1_inner(u, u) - exact);
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 4.0, 0.2);
        }
        prev = err;
    }
}

TEST(Discretize, BoundaryValuePinned) {
    const auto m = make_mesh(5, 64);
    const auto u = DiscreteFunction::sample(m, [](double) { return 3.0; });
    EXPECT_EQ(u[u.size() - 1], 0.0);
    EXPECT_THROW(DiscreteFunction(m, std::vector<double>(10, 1.0)), std::invalid_argument);
    EXPECT_THROW(DiscreteFunction(nullptr), std::invalid_argument);
    const auto other = make_mesh(5, 65);
    EXPECT_THROW(u.axpy(1.0, DiscreteFunction(other)), std::invalid_argument);
    DiscreteFunction empty;
    EXPECT_TRUE(empty.empty());
    EXPECT_THROW(empty.mesh(), std::logic_error);
}

TEST(Discretize, StiffnessSolveInvertsApply) {
    const auto m = make_mesh(5, 200);
    const auto u = random_profile(m, 7);
    const auto Ku = stiffness_apply(*m, u.values());
    const auto x = solve_stiffness(*m, Ku);
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_NEAR(x[i], u[i], 1e-9 * std::max(1.0, std::abs(u[i])));
    }
}

TEST(Discretize, InnerProductProperties) {
    const auto m = make_mesh(5, 128);
    const auto u = random_profile(m, 1);
    const auto v = random_profile(m, 2);
    EXPECT_NEAR(h1_inner(u, v), h1_inner(v, u), 1e-14);
    EXPECT_NEAR(h1_norm(u.scaled(-3.0)), 3.0 * h1_norm(u), 1e-12);
    EXPECT_NEAR(h1_norm(u), 1.0, 1e-12);
    EXPECT_LE(std::abs(h1_inner(u, v)), h1_norm(u) * h1_norm(v) + 1e-14);
}

TEST(Discretize, RieszGradientRepresentsDerivative) {
    const auto m = make_mesh(5, 256);
    ProblemParams pr;
    pr.b = 0.01;
    pr.lambda = 2.0;
    const auto u = random_profile(m, 3).scaled(4.0);
    const auto eg = energy_and_gradient(u, pr);
    for (int s = 10; s < 13; ++s) {
        const auto v = random_profile(m, s);
        double dv = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            dv += eg.residual[i] * v[i];
        }
        EXPECT_NEAR(h1_inner(eg.grad, v), dv, 1e-10 * std::max(1.0, std::abs(dv)));
    }
    EXPECT_NEAR(eg.grad_norm, h1_norm(eg.grad), 1e-10 * eg.grad_norm);
    EXPECT_NEAR(eg.phi, energy(u, pr), 1e-13 * std::abs(eg.phi));
    EXPECT_THROW(energy_and_gradient(DiscreteFunction(make_mesh(6, 64)), pr), std::invalid_argument);
}

TEST(Discretize, GradientCheckSecondOrder) {
    const auto m = make_mesh(5, 256);
    ProblemParams pr;
    pr.b = 0.003;
    pr.lambda = 1.0;
    const auto u = bubble(m, 0.05).u.scaled(20.0);
    for (int s = 0; s < 10; ++s) {
        const auto v = random_profile(m, 100 + s);
        const auto go = checks::gradient_order(u, v, pr, 0.4, 4);
        for (double o : go.orders) {
            EXPECT_NEAR(o, 2.0, 0.15) << s;
        }
    }
}

TEST(Discretize, EnergyEvenAndHomogeneousPieces) {
    const auto m = make_mesh(5, 128);
    const auto u = random_profile(m, 5);
    ProblemParams pr;
    pr.b = 0.1;
    pr.lambda = 1.0;
    EXPECT_NEAR(energy(u, pr), energy(u.scaled(-1.0), pr), 1e-14);
    const auto f1 = functionals(u, 3.0);
    const auto f2 = functionals(u.scaled(2.0), 3.0);
    EXPECT_NEAR(f2.A, 4.0 * f1.A, 1e-12);
    EXPECT_NEAR(f2.C, std::pow(2.0, critical_exponent(5)) * f1.C, 1e-12 * f2.C);
    EXPECT_NEAR(f2.P, 8.0 * f1.P, 1e-12 * f2.P);
}

TEST(Discretize, RandomProfilesAreSeeded) {
    const auto m = make_mesh(5, 128);
    const auto a = random_profile(m, 42);
    const auto b = random_profile(m, 42);
    const auto c = random_profile(m, 43);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
    EXPECT_EQ(default_starts(m, 8).size(), 8u);
}
