#pragma once

#include "sparda/binary.hpp"

#include <span>
#include <vector>

namespace sparda {

/// Inverse standard normal CDF (Wichura's AS241, about 1e-16 relative).
Scalar normal_quantile(Scalar p);

/// Right-continuous empirical CDF of a sorted sample, clamped to
/// [1/n^2, 1 - 1/n^2].
Scalar winsorized_ecdf(std::span<const Scalar> sorted, Scalar x);

enum class SesdaVariant { naive, pooled };

std::string to_string(SesdaVariant v);
SesdaVariant sesda_variant_from_string(const std::string& s);

/// Per-variable monotone maps h_j estimated from a binary training set.
/// "major" is the larger class (ties go to class 0).
class MonotoneTransform {
public:
    struct Variable {
        std::vector<Scalar> major; // sorted knots
        std::vector<Scalar> minor; // sorted knots
        Scalar shift = 0;          // pooled estimate of the minor-class mean
    };

    MonotoneTransform() = default;
    MonotoneTransform(SesdaVariant variant, Scalar w_major, Scalar w_minor, std::vector<Variable> vars);

    static MonotoneTransform fit(const Matrix& x, const Labels& y, SesdaVariant variant);

    Scalar apply(Index j, Scalar x) const;
    Matrix apply(const Matrix& x) const;

    SesdaVariant variant() const { return variant_; }
    Scalar weight_major() const { return w_major_; }
    Scalar weight_minor() const { return w_minor_; }
    const std::vector<Variable>& variables() const { return vars_; }
    Index num_variables() const { return static_cast<Index>(vars_.size()); }

private:
    SesdaVariant variant_ = SesdaVariant::pooled;
    Scalar w_major_ = 1;
    Scalar w_minor_ = 0;
    std::vector<Variable> vars_;
};

} // namespace sparda
