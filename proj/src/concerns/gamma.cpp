#include "leaders/concerns/gamma.hpp"

#include <cmath>
#include <limits>

#include "leaders/error.hpp"

namespace leaders::concerns {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

double series_p(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double continued_fraction_q(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) throw InvalidArgument("incomplete gamma needs a > 0 and x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
    check(a, x);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return series_p(a, x);
    return 1.0 - continued_fraction_q(a, x);
}

double gamma_q(double a, double x) {
    check(a, x);
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - series_p(a, x);
    return continued_fraction_q(a, x);
}

double chi_square_sf(double statistic, int df) {
    if (df < 1) throw InvalidArgument("degrees of freedom must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * statistic);
}

}  // namespace leaders::concerns
