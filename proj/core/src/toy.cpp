#include "odeim/models.hpp"

#include <cmath>

#include "odeim/error.hpp"

namespace odeim {

Vector toy_grid(const ToyFunctionSpec& spec) {
    if (spec.grid_size < 2) throw ArgumentError("toy grid: need at least 2 points");
    if (!(spec.domain_min < spec.domain_max))
        throw ArgumentError("toy grid: empty domain");
    return Vector::LinSpaced(spec.grid_size, spec.domain_min, spec.domain_max);
}

double toy_function_value(double x, double xi) {
    constexpr double pi = std::numbers::pi;
    const double s = std::sin(xi * x) + std::sin(2.0 * pi * xi * x) + std::sin(pi * xi * x);
    const double d = x - xi;
    return 1e-4 * xi * s + 1e-6 * std::exp(-d * d / 5e-5);
}

Vector toy_function_at(const Vector& x, double xi) {
    return x.unaryExpr([xi](double v) { return toy_function_value(v, xi); });
}

Vector toy_function(const ToyFunctionSpec& spec, double xi) {
    if (!(xi >= spec.parameter_min && xi <= spec.parameter_max))
        throw ArgumentError("toy function: parameter outside its domain");
    return toy_function_at(toy_grid(spec), xi);
}

}  // namespace odeim
