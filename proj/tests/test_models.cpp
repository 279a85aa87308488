#include <doctest.h>

#include <cmath>
#include <limits>

#include "kcm/dgp.hpp"
#include "kcm/models.hpp"
#include "oracles.hpp"

using kcm::Dataset;
using kcm::Matrix;
using kcm::ModelKind;
using kcm::ResidualModel;
using kcm::Vector;

namespace {

ResidualModel regression_model(Vector theta) {
    ResidualModel m;
    m.kind = ModelKind::regression;
    m.theta = std::move(theta);
    return m;
}

}  // namespace

TEST_CASE("noiseless regression residuals vanish") {
    Dataset data;
    data.Z.resize(4, 3);
    data.Z << 3.0, 1.0, 2.0,
              1.0, 1.0, 0.0,
             -2.0, 0.0, -2.0,
              0.0, 0.0, 0.0;
    data.x_index = {1, 2};
    Vector theta(2);
    theta << 1.0, 1.0;
    const Matrix R = kcm::residuals(regression_model(theta), data);
    CHECK(R.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simeq residual at a single zero row") {
    Dataset data;
    data.Z = Matrix::Zero(1, 4);
    data.x_index = {2, 3};
    ResidualModel m;
    m.kind = ModelKind::simeq;
    m.theta = Eigen::Vector4d(-1.0, 2.0, 1.0, -2.0);
    const Matrix R = kcm::residuals(m, data);
    CHECK(R(0, 0) == 0.0);
    CHECK(R(0, 1) == 0.0);
}

TEST_CASE("quantile residual hand values") {
    Dataset data;
    data.Z.resize(2, 2);
    data.Z << -1.0, 0.5,
               2.0, -0.3;
    data.x_index = {1};
    ResidualModel m;
    m.kind = ModelKind::quantile;
    m.theta = Vector::Zero(1);
    m.tau = 0.5;
    const Matrix R = kcm::residuals(m, data);
    CHECK(R(0, 0) == 0.5);
    CHECK(R(1, 0) == -0.5);
}

TEST_CASE("quantile ties use the strict inequality") {
    Dataset data;
    data.Z.resize(1, 2);
    data.Z << 1.0, 1.0;  // fitted value = theta * x = 1.0 = y
    data.x_index = {1};
    ResidualModel m;
    m.kind = ModelKind::quantile;
    m.theta = Vector::Ones(1);
    m.tau = 0.25;
    CHECK(kcm::residuals(m, data)(0, 0) == -0.25);
}

TEST_CASE("quantile residuals bounded in {-tau, 1-tau}") {
    kcm::RngStream rng(21);
    const Dataset data = oracles::random_regression_data(40, 2, rng);
    ResidualModel m;
    m.kind = ModelKind::quantile;
    m.theta = Vector::Ones(2);
    m.tau = 0.3;
    const Matrix R = kcm::residuals(m, data);
    for (int i = 0; i < data.n(); ++i)
        CHECK((R(i, 0) == doctest::Approx(-0.3) || R(i, 0) == doctest::Approx(0.7)));
}

TEST_CASE("regression residual linearity") {
    Dataset data;
    data.Z.resize(3, 3);
    data.Z << 5.0, 1.0, 2.0,
             -1.0, 3.0, 0.0,
              2.0, -2.0, 4.0;
    data.x_index = {1, 2};
    Vector t1(2), t2(2), zero(2);
    t1 << 2.0, -1.0;
    t2 << 0.5, 3.0;
    zero.setZero();
    const Matrix lhs = kcm::residuals(regression_model(t1 + t2), data);
    const Matrix rhs = kcm::residuals(regression_model(t1), data) +
                       kcm::residuals(regression_model(t2), data) -
                       kcm::residuals(regression_model(zero), data);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("simeq residual is exactly zero on noiseless reduced-form data") {
    // With V1 = V2 = 0 the reduced form gives Q, P as deterministic functions
    // of (R, W); at the solved structural parameters both residuals vanish.
    const Eigen::Vector4d theta0 = kcm::simeq_true_theta(1.0, -1.0, 1.0, 1.0);
    kcm::RngStream rng(22);
    Dataset data;
    data.Z.resize(50, 4);
    for (int i = 0; i < 50; ++i) {
        const double r = rng.normal();
        const double w = rng.normal();
        data.Z(i, 0) = r - w;      // Q = l11 R + l12 W
        data.Z(i, 1) = r + w;      // P = l21 R + l22 W
        data.Z(i, 2) = r;
        data.Z(i, 3) = w;
    }
    data.x_index = {2, 3};
    ResidualModel m;
    m.kind = ModelKind::simeq;
    m.theta = theta0;
    CHECK(kcm::residuals(m, data).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("residual error paths") {
    Dataset data;
    data.Z.resize(2, 3);
    data.Z << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    data.x_index = {1, 2};

    SUBCASE("theta dimension mismatch") {
        CHECK_THROWS_AS(kcm::residuals(regression_model(Vector::Ones(3)), data),
                        kcm::InputError);
    }
    SUBCASE("non-finite data") {
        data.Z(0, 0) = std::nan("");
        CHECK_THROWS_AS(kcm::residuals(regression_model(Vector::Ones(2)), data),
                        kcm::NumericInputError);
    }
    SUBCASE("non-finite theta") {
        Vector bad(2);
        bad << 1.0, std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(kcm::residuals(regression_model(bad), data), kcm::NumericInputError);
    }
    SUBCASE("simeq needs four columns") {
        ResidualModel m;
        m.kind = ModelKind::simeq;
        m.theta = Eigen::Vector4d::Zero();
        CHECK_THROWS_AS(kcm::residuals(m, data), kcm::InputError);
    }
}

TEST_CASE("perturb_theta") {
    const Vector theta0 = Vector::LinSpaced(5, -1.0, 1.0);

    SUBCASE("delta zero returns theta exactly") {
        kcm::RngStream rng(23);
        CHECK(kcm::perturb_theta(theta0, 0.0, rng) == theta0);
    }
    SUBCASE("fixed seed gives identical output") {
        kcm::RngStream a(24), b(24);
        CHECK(kcm::perturb_theta(theta0, 0.3, a) == kcm::perturb_theta(theta0, 0.3, b));
    }
    SUBCASE("chi-square mean of the squared perturbation") {
        // E |gamma|^2 = r delta^2 = 5e-4 at r = 5, delta = 0.01.
        kcm::RngStream rng(25);
        const int reps = 100000;
        double acc = 0.0;
        for (int rep = 0; rep < reps; ++rep)
            acc += (kcm::perturb_theta(theta0, 0.01, rng) - theta0).squaredNorm();
        CHECK(acc / reps == doctest::Approx(5e-4).epsilon(0.05));
    }
    SUBCASE("negative delta rejected") {
        kcm::RngStream rng(26);
        CHECK_THROWS_AS(kcm::perturb_theta(theta0, -0.1, rng), kcm::InputError);
    }
}

TEST_CASE("dataset validation") {
    Dataset data;
    data.Z.resize(2, 2);
    data.Z << 1.0, 2.0, 3.0, 4.0;
    data.x_index = {1, 1};
    CHECK_THROWS_AS(data.validate(), kcm::InputError);
    data.x_index = {2};
    CHECK_THROWS_AS(data.validate(), kcm::InputError);
    data.x_index = {1};
    CHECK_NOTHROW(data.validate());
}
