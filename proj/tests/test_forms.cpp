#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "eqa/forms.hpp"

using namespace eqa;

namespace {

Eigen::MatrixXd random_sym(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
    return a;
}

}  // namespace

TEST_CASE("determinant basics") {
    CHECK(determinant(SymForm::identity(3)) == doctest::Approx(1.0));
    Eigen::MatrixXd d(2, 2);
    d << 2, 0, 0, 2;
    CHECK(determinant(SymForm(d)) == doctest::Approx(4.0));
}

TEST_CASE("adjugate satisfies adj(a) a = det(a) I at every rank") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);  // dims 2..8
        SymForm a(random_sym(rng, n));
        ContraForm adj = adjugate(a);
        const double det = determinant(a);
        Eigen::MatrixXd resid = adj.mat() * a.mat() - det * Eigen::MatrixXd::Identity(n, n);
        const double scale = adj.mat().cwiseAbs().maxCoeff() * a.mat().cwiseAbs().maxCoeff();
        CHECK(resid.cwiseAbs().maxCoeff() <= 1e-11 * std::max(scale, 1.0));
    }
}

TEST_CASE("adjugate rank behavior: full, m-1 -> 1, below -> 0") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    Eigen::MatrixXd adj2 = adjugate(SymForm(d)).mat();  // rank 2 of 3
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(adj2);
    CHECK(svd.singularValues()(0) > 0.1);
    CHECK(svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0));

    CHECK(adjugate(SymForm(Eigen::MatrixXd::Zero(3, 3))).mat().cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd diag23(2, 2);
    diag23 << 2, 0, 0, 3;
    Eigen::MatrixXd adj = adjugate(SymForm(diag23)).mat();
    CHECK(adj(0, 0) == doctest::Approx(3.0));
    CHECK(adj(1, 1) == doctest::Approx(2.0));
    CHECK(adj(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("projected forms of corank one have rank-one adjugate") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        // random symmetric form whose kernel contains a chosen vector
        Eigen::MatrixXd g = random_sym(rng, n) + 3.0 * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) v[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
        v.normalize();
        Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - v * v.transpose();
        SymForm a(proj.transpose() * g * proj);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(adjugate(a).mat());
        CHECK(svd.singularValues()(1) <= 1e-9 * svd.singularValues()(0));
    }
}

TEST_CASE("bordered determinant equals v.adj(a).v and the dense LU oracle") {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd e0(2);
    e0 << 1, 0;
    CHECK(bordered_determinant(SymForm(id), Eigen::VectorXd(e0)) == doctest::Approx(1.0));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);  // dims 2..6
        SymForm a(random_sym(rng, n));
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = std::uniform_real_distribution<double>(-1, 1)(rng);

        const double got = bordered_determinant(a, v);
        const double via_adj = v.dot(adjugate(a).mat() * v);

        // oracle: dense (n+1)-determinant via Eigen's LU
        Eigen::MatrixXd b(n + 1, n + 1);
        b.topLeftCorner(n, n) = a.mat();
        b.topRightCorner(n, 1) = v;
        b.bottomLeftCorner(1, n) = v.transpose();
        b(n, n) = 0.0;
        const double oracle = -Eigen::PartialPivLU<Eigen::MatrixXd>(b).determinant();

        const double scale = std::max({1.0, std::abs(oracle)});
        CHECK(std::abs(got - oracle) <= 1e-10 * scale);
        CHECK(std::abs(got - via_adj) <= 1e-10 * scale);
    }
}

TEST_CASE("rank-one update identity det(a + b c^T) = det a + c.adj(a).b") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        std::uniform_real_distribution<double> u(-1, 1);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = u(rng);
        Eigen::VectorXd b(n), c(n);
        for (int i = 0; i < n; ++i) {
            b[i] = u(rng);
            c[i] = u(rng);
        }
        const double lhs =
            Eigen::PartialPivLU<Eigen::MatrixXd>(a + b * c.transpose()).determinant();
        const double rhs = Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant() +
                           c.dot(eqa::adjugate(SMat<double>(a)) * b);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("inverse") {
    Eigen::MatrixXd d(2, 2);
    d << 2, 0, 0, 4;
    Eigen::MatrixXd inv = inverse(SymForm(d)).mat();
    CHECK(inv(0, 0) == doctest::Approx(0.5));
    CHECK(inv(1, 1) == doctest::Approx(0.25));

    CHECK_THROWS_AS(inverse(SymForm(Eigen::MatrixXd::Zero(3, 3))), SingularFormError);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        SymForm a(random_sym(rng, n) + 4.0 * Eigen::MatrixXd::Identity(n, n));
        Eigen::MatrixXd r = a.mat() * inverse(a).mat() - Eigen::MatrixXd::Identity(n, n);
        CHECK(r.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("inertia: examples, eigenvalue oracle, Sylvester invariance") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    CHECK(inertia(SymForm(d)) == Inertia{1, 1, 1});

    // hard case for naive diagonal pivoting
    Eigen::MatrixXd offdiag = Eigen::MatrixXd::Zero(2, 2);
    offdiag(0, 1) = offdiag(1, 0) = 1.0;
    CHECK(inertia(SymForm(offdiag)) == Inertia{1, 1, 0});

    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);  // dims 2..6
        SymForm a(random_sym(rng, n));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
        Inertia oracle;
        const double cut = 1e-10 * a.mat().cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
            const double ev = es.eigenvalues()(i);
            if (ev > cut)
                oracle.positive++;
            else if (ev < -cut)
                oracle.negative++;
            else
                oracle.zero++;
        }
        Inertia got = inertia(a);
        CHECK(got == oracle);

        // congruence a -> g^T a g preserves inertia
        std::uniform_real_distribution<double> u(-1, 1);
        Eigen::MatrixXd g(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) g(i, j) = u(rng);
        } while (std::abs(g.determinant()) < 0.2);
        CHECK(inertia(SymForm(g.transpose() * a.mat() * g)) == got);
    }
}
