#include "ocurve/fitting.hpp"

#include <cmath>
#include <stdexcept>

#include "ocurve/errors.hpp"

namespace ocl {

FitResult fitPowerLaw(const std::vector<double>& ts, const std::vector<double>& values) {
    if (ts.size() != values.size() || ts.size() < 3)
        throw std::invalid_argument("power-law fit needs at least 3 aligned samples");
    const size_t m = ts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < m; ++i) {
        if (!(ts[i] > 0.0) || !(values[i] > 0.0))
            throw PipelineError(ErrorCode::BadInput, "non-positive sample in power-law window");
        double x = std::log(ts[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double nd = static_cast<double>(m);
    const double vxx = sxx - sx * sx / nd;
    const double vyy = syy - sy * sy / nd;
    const double vxy = sxy - sx * sy / nd;
    if (vxx <= 0.0) throw std::invalid_argument("degenerate time window");

    FitResult fit;
    fit.exponent = vxy / vxx;
    fit.amplitude = std::exp((sy - fit.exponent * sx) / nd);
    fit.rSquared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    fit.windowLo = ts.front();
    fit.windowHi = ts.back();
    return fit;
}

}  // namespace ocl
