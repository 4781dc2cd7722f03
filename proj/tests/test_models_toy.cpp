#include <doctest.h>

#include <cmath>
#include <numbers>

#include "odeim/models.hpp"

using namespace odeim;

TEST_CASE("toy_function_value matches frozen samples") {
    CHECK(std::abs(toy_function_value(1.0, 1.0) - 8.5147098480789634e-05) <=
          1e-15 * 8.5147098480789634e-05);
    CHECK(std::abs(toy_function_value(0.5, 2.0) - 0.00016829419696157927) <=
          1e-15 * 0.00016829419696157927);
    CHECK(toy_function_value(0.0, 2.0) == 0.0);
}

TEST_CASE("toy_function_at evaluates componentwise") {
    Vector x(4);
    x << -1.3, 0.0, 0.7, 2.2;
    const Vector v = toy_function_at(x, 1.7);
    REQUIRE(v.size() == 4);
    for (Index i = 0; i < 4; ++i)
        CHECK(v(i) == toy_function_value(x(i), 1.7));
}

TEST_CASE("toy_grid spans the domain uniformly") {
    const ToyFunctionSpec spec;
    CHECK(spec.grid_size == 8192);
    const Vector grid = toy_grid(spec);
    REQUIRE(grid.size() == 8192);
    CHECK(grid(0) == -2.0 * std::numbers::pi);
    CHECK(grid(8191) == 2.0 * std::numbers::pi);
    const double step = grid(1) - grid(0);
    for (Index i = 1; i + 1 < grid.size(); ++i)
        CHECK(std::abs(grid(i + 1) - grid(i) - step) <= 1e-12);

    ToyFunctionSpec tiny;
    tiny.grid_size = 1;
    CHECK_THROWS_AS(toy_grid(tiny), ArgumentError);
    ToyFunctionSpec flipped;
    flipped.domain_min = 1.0;
    flipped.domain_max = -1.0;
    CHECK_THROWS_AS(toy_grid(flipped), ArgumentError);
}

TEST_CASE("toy_function validates the parameter domain") {
    ToyFunctionSpec spec;
    spec.grid_size = 64;
    CHECK_NOTHROW(toy_function(spec, 1.0));
    CHECK_NOTHROW(toy_function(spec, 3.0));
    CHECK_THROWS_AS(toy_function(spec, 0.5), ArgumentError);
    CHECK_THROWS_AS(toy_function(spec, 3.5), ArgumentError);

    const Vector v = toy_function(spec, 2.0);
    const Vector grid = toy_grid(spec);
    CHECK(v(10) == toy_function_value(grid(10), 2.0));
}
