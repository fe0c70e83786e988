#include "helpers.hpp"

#include "sensornet/field.hpp"

#include <cmath>

using namespace sensornet;
using namespace testing;

TEST_SUITE("field") {

TEST_CASE("bilinear weights") {
    auto grid = FieldGrid::centered(2, 2, 10);
    auto at_center = field_row(grid, FieldInterpolation::Bilinear, grid.center(3));
    CHECK(at_center(0, 3) == doctest::Approx(1));
    CHECK(at_center.sum() == doctest::Approx(1));
    auto middle = field_row(grid, FieldInterpolation::Bilinear, vec({0, 0}));
    CHECK((middle - Matrix::Constant(1, 4, 0.25)).norm() < 1e-15);
    auto edge = field_row(grid, FieldInterpolation::Bilinear, vec({-10, -10}));
    CHECK(edge(0, 0) == doctest::Approx(1));
}

TEST_CASE("nearest cell indicator") {
    auto grid = FieldGrid::centered(3, 3, 10);
    auto row = field_row(grid, FieldInterpolation::NearestCell, vec({-12, 7}));
    CHECK(row(0, grid.index(0, 2)) == 1.0);
    CHECK(row.sum() == 1.0);
    auto left = field_row(grid, FieldInterpolation::NearestCell, vec({5 - 1e-9, 0}));
    auto right = field_row(grid, FieldInterpolation::NearestCell, vec({5 + 1e-9, 0}));
    CHECK((left - right).norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bilinear information is continuous in the sensor position") {
    auto grid = FieldGrid::centered(3, 3, 10);
    auto obs = field_observation(grid, FieldInterpolation::Bilinear, 0.04);
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        Vector x = vec({uniform(-15, 15, rng), uniform(-15, 15, rng)});
        const Matrix m = obs.information_matrix(x);
        double last = 1e300;
        for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double diff = (obs.information_matrix(x + vec({h, -h})) - m).norm();
            CHECK(diff <= last + 1e-12);
            last = diff;
        }
        CHECK(last < 1e-2);
    }
}

TEST_CASE("field prior statistics") {
    auto grid = FieldGrid::centered(2, 1, 10);
    Rng rng(4);
    const int N = 40000;
    Vector mean = Vector::Zero(2);
    double cross = 0;
    for (int k = 0; k < N; ++k) {
        Vector f = sample_field(grid, 1.0, 2.0, 10.0, rng);
        mean += f;
        cross += (f(0) - 1) * (f(1) - 1);
    }
    mean /= N;
    CHECK((mean - Vector::Constant(2, 1.0)).cwiseAbs().maxCoeff() < 4 * 2 / std::sqrt(double(N)));
    CHECK(cross / N == doctest::Approx(4 * std::exp(-1.0)).epsilon(0.05));
}

TEST_CASE("placements") {
    auto grid = FieldGrid::centered(3, 3, 10);
    Rng rng(5);
    auto b = boundary_positions(grid, 200, rng);
    CHECK(b[0].isZero());
    for (std::size_t i = 1; i < b.size(); ++i) {
        const double fx = std::fmod(b[i](0) + 15, 10.0), fy = std::fmod(b[i](1) + 15, 10.0);
        CHECK((std::abs(fx) < 1e-9 || std::abs(fy) < 1e-9));
        CHECK(b[i].cwiseAbs().maxCoeff() <= 15 + 1e-9);
    }
    auto in = interior_positions(grid, 100, rng);
    for (const auto& p : in) CHECK(p.cwiseAbs().maxCoeff() <= 15);
}

}
