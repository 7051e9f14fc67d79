#include "comsim/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace comsim::quad {

namespace {

// Kronrod abscissae on [0, 1] (symmetric); odd indices are the Gauss nodes.
constexpr std::array<double, 8> kXgk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment rule15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                     int max_intervals) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Segment> heap;
    Segment first = rule15(f, a, b);
    heap.push(first);
    double value = first.value;
    double error = first.error;
    int count = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) && count < max_intervals) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = rule15(f, worst.a, mid);
        const Segment right = rule15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Recompute sums to shed accumulated cancellation from the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.abs_error = error;
    out.intervals = count;
    out.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
    return out;
}

Result gauss_kronrod_to_minus_infinity(const std::function<double(double)>& f, double b, double rel_tol,
                                       double abs_tol, int max_intervals) {
    auto mapped = [&](double t) {
        const double s = 1.0 - t;
        return f(b - t / s) / (s * s);
    };
    return gauss_kronrod(mapped, 0.0, 1.0, rel_tol, abs_tol, max_intervals);
}

}  // namespace comsim::quad
