#include "sparda/screen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sparda {

Vector f_screen(const Matrix& x, const Labels& y, Index K)
{
    const Index n = x.rows();
    if (K < 2) throw ConfigError("f_screen needs at least two classes");
    if (n <= K) throw EstimationError("f_screen needs n > K");
    const ClassStats s = estimate_stats(x, y, K);
    const RowVector grand = x.colwise().mean();
    Vector f(x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        Scalar between = 0;
        for (Index k = 0; k < K; ++k) {
            const Scalar d = s.means(k, j) - grand[j];
            between += static_cast<Scalar>(s.counts[k]) * d * d;
        }
        Scalar within = 0;
        for (Index i = 0; i < n; ++i) {
            const Scalar d = x(i, j) - s.means(y[i], j);
            within += d * d;
        }
        between /= static_cast<Scalar>(K - 1);
        within /= static_cast<Scalar>(n - K);
        f[j] = within > 0 ? between / within : std::numeric_limits<Scalar>::infinity();
    }
    return f;
}

std::vector<Index> top_features(const Vector& f, Index m)
{
    std::vector<Index> idx(static_cast<std::size_t>(f.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return f[a] > f[b]; });
    idx.resize(static_cast<std::size_t>(std::clamp<Index>(m, 0, f.size())));
    return idx;
}

} // namespace sparda
