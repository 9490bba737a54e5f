#include "sqlaser/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace sqlaser {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]. Even nodes form the
// embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b, value, error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kronrod = kKronrodW[7] * f(mid);
    double gauss = kGaussW[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodW[i] * pair;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_subdivisions)
{
    std::vector<Panel> panels;
    panels.push_back(evaluate_panel(f, a, b));

    QuadratureResult result;
    for (result.subdivisions = 0; result.subdivisions < max_subdivisions;
         ++result.subdivisions) {
        double total_error = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total_error += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (total_error <= abs_tol) {
            result.converged = true;
            break;
        }
        const Panel split = panels[worst];
        const double mid = 0.5 * (split.a + split.b);
        if (!(mid > split.a && mid < split.b)) {
            break;  // interval exhausted at machine resolution
        }
        panels[worst] = evaluate_panel(f, split.a, mid);
        panels.push_back(evaluate_panel(f, mid, split.b));
    }

    // Accumulate in grid order so results do not depend on the heap history.
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    result.value = 0.0;
    result.error_estimate = 0.0;
    for (const Panel& p : panels) {
        result.value += p.value;
        result.error_estimate += p.error;
    }
    if (result.error_estimate <= abs_tol) result.converged = true;
    return result;
}

}  // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_subdivisions)
{
    if (!(b > a)) throw InvalidParameter("integration needs b > a");
    if (!(abs_tol > 0.0)) throw InvalidParameter("abs_tol must be > 0");
    return integrate_adaptive(f, a, b, abs_tol, max_subdivisions);
}

QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                     double scale, double abs_tol,
                                     int max_subdivisions)
{
    if (!(scale > 0.0)) throw InvalidParameter("scale must be > 0");
    if (!(abs_tol > 0.0)) throw InvalidParameter("abs_tol must be > 0");
    const auto transformed = [&f, scale](double t) {
        const double u = 1.0 - t * t;
        const double omega = scale * t / u;
        const double jacobian = scale * (1.0 + t * t) / (u * u);
        const double v = f(omega) * jacobian;
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate_adaptive(transformed, -1.0, 1.0, abs_tol, max_subdivisions);
}

const QuadratureResult& require_converged(const QuadratureResult& r,
                                          const char* what)
{
    if (!r.converged) {
        std::ostringstream os;
        os << what << ": quadrature failed to converge (error estimate "
           << r.error_estimate << " after " << r.subdivisions
           << " subdivisions)";
        throw QuadratureNonConvergence(os.str());
    }
    return r;
}

}  // namespace sqlaser
