#include "sparda/sesda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparda {

Scalar normal_quantile(Scalar p)
{
    if (std::isnan(p) || p < 0.0 || p > 1.0) return std::numeric_limits<Scalar>::quiet_NaN();
    if (p == 0.0) return -std::numeric_limits<Scalar>::infinity();
    if (p == 1.0) return std::numeric_limits<Scalar>::infinity();

    const Scalar q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const Scalar r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    Scalar r = q < 0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    Scalar val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0 ? -val : val;
}

Scalar winsorized_ecdf(std::span<const Scalar> sorted, Scalar x)
{
    if (sorted.empty()) throw EstimationError("winsorized_ecdf: empty sample");
    const Scalar n = static_cast<Scalar>(sorted.size());
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const Scalar f = static_cast<Scalar>(count) / n;
    const Scalar lo = 1.0 / (n * n);
    return std::clamp(f, lo, 1.0 - lo);
}

std::string to_string(SesdaVariant v)
{
    return v == SesdaVariant::naive ? "naive" : "pooled";
}

SesdaVariant sesda_variant_from_string(const std::string& s)
{
    if (s == "naive") return SesdaVariant::naive;
    if (s == "pooled") return SesdaVariant::pooled;
    throw ConfigError("unknown SeSDA variant '" + s + "' (expected naive or pooled)");
}

MonotoneTransform::MonotoneTransform(SesdaVariant variant, Scalar w_major, Scalar w_minor, std::vector<Variable> vars)
    : variant_(variant), w_major_(w_major), w_minor_(w_minor), vars_(std::move(vars))
{
    for (const Variable& v : vars_)
        if (v.major.empty() || (variant_ == SesdaVariant::pooled && v.minor.empty()))
            throw EstimationError("MonotoneTransform: empty knot set");
}

MonotoneTransform MonotoneTransform::fit(const Matrix& x, const Labels& y, SesdaVariant variant)
{
    if (x.rows() != y.size()) throw DimensionError("SeSDA: x and y row counts differ");
    if (y.size() == 0 || y.minCoeff() < 0 || y.maxCoeff() > 1) throw ConfigError("SeSDA needs exactly two classes");
    const Index n_class1 = y.sum();
    const Index n_class0 = y.size() - n_class1;
    if (n_class0 < 2 || n_class1 < 2) throw EstimationError("SeSDA: each class needs at least two observations");

    const int major_label = n_class0 >= n_class1 ? 0 : 1;
    const Index n_major = major_label == 0 ? n_class0 : n_class1;
    const Index n_minor = y.size() - n_major;
    const Scalar w_major = static_cast<Scalar>(n_major) / static_cast<Scalar>(y.size());
    const Scalar w_minor = 1.0 - w_major;

    std::vector<Variable> vars(static_cast<std::size_t>(x.cols()));
    for (Index j = 0; j < x.cols(); ++j) {
        Variable& v = vars[static_cast<std::size_t>(j)];
        v.major.reserve(static_cast<std::size_t>(n_major));
        v.minor.reserve(static_cast<std::size_t>(n_minor));
        for (Index i = 0; i < x.rows(); ++i) (y[i] == major_label ? v.major : v.minor).push_back(x(i, j));
        std::sort(v.major.begin(), v.major.end());
        std::sort(v.minor.begin(), v.minor.end());
        if (variant == SesdaVariant::pooled) {
            // Minor-class mean seen through the major-class map, and minus the
            // major-class mean seen through the minor-class map.
            Scalar via_major = 0;
            for (Scalar s : v.minor) via_major += normal_quantile(winsorized_ecdf(v.major, s));
            via_major /= static_cast<Scalar>(n_minor);
            Scalar via_minor = 0;
            for (Scalar s : v.major) via_minor += normal_quantile(winsorized_ecdf(v.minor, s));
            via_minor = -via_minor / static_cast<Scalar>(n_major);
            v.shift = w_major * via_major + w_minor * via_minor;
        } else {
            v.minor.clear();
        }
    }
    return MonotoneTransform(variant, w_major, w_minor, std::move(vars));
}

Scalar MonotoneTransform::apply(Index j, Scalar x) const
{
    const Variable& v = vars_.at(static_cast<std::size_t>(j));
    const Scalar h_major = normal_quantile(winsorized_ecdf(v.major, x));
    if (variant_ == SesdaVariant::naive) return h_major;
    const Scalar h_minor = normal_quantile(winsorized_ecdf(v.minor, x)) + v.shift;
    return w_major_ * h_major + w_minor_ * h_minor;
}

Matrix MonotoneTransform::apply(const Matrix& x) const
{
    if (x.cols() != num_variables())
        throw DimensionError("SeSDA transform expects " + std::to_string(num_variables()) + " columns");
    Matrix out(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i) out(i, j) = apply(j, x(i, j));
    return out;
}

} // namespace sparda
