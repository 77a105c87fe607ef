#ifndef ORBITKIT_NORMS_HPP
#define ORBITKIT_NORMS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/linalg.hpp"

namespace orbitkit {

/// Descriptor of a symmetric norming function on singular-value sequences.
struct NormSpec {
    enum class Kind { Operator, Schatten, KyFan, Trace, Ratio };

    Kind kind = Kind::Operator;
    double p = 2.0;                // Schatten exponent
    std::size_t k = 1;             // Ky Fan order
    std::vector<double> reference; // Ratio reference, non-increasing positive
    bool ref_divergent_sum = false;
    bool ref_vanishing = false;

    bool bi_normalizing() const { return ref_divergent_sum && ref_vanishing; }

    static NormSpec operator_norm() { return NormSpec{}; }

    static NormSpec schatten(double p) {
        if (!(p >= 1.0)) throw domain_error("BadNormSpec", "Schatten exponent must be >= 1");
        NormSpec s;
        s.kind = Kind::Schatten;
        s.p = p;
        return s;
    }

    static NormSpec ky_fan(std::size_t k) {
        if (k < 1) throw domain_error("BadNormSpec", "Ky Fan order must be >= 1");
        NormSpec s;
        s.kind = Kind::KyFan;
        s.k = k;
        return s;
    }

    static NormSpec trace() {
        NormSpec s;
        s.kind = Kind::Trace;
        return s;
    }

    /// The Ratio spec records at construction whether the reference looks
    /// bi-normalizing: terms tending to 0 with divergent partial sums
    /// (condensation test on the finite data).
    static NormSpec ratio(std::vector<double> reference) {
        if (reference.empty())
            throw domain_error("BadNormSpec", "Ratio reference must be nonempty");
        for (std::size_t i = 0; i < reference.size(); ++i) {
            if (!(reference[i] > 0.0))
                throw domain_error("BadNormSpec", "Ratio reference must be strictly positive");
            if (i > 0 && reference[i] > reference[i - 1] + 1e-15)
                throw domain_error("BadNormSpec", "Ratio reference must be non-increasing");
        }
        NormSpec s;
        s.kind = Kind::Ratio;
        s.reference = std::move(reference);
        const auto& r = s.reference;
        const std::size_t n = r.size();
        s.ref_vanishing = n >= 8 && r[n - 1] <= 0.25 * r[0];
        // Cauchy condensation on the available terms: 2^j * r_{2^j} must not
        // decay geometrically if the full sum diverges.
        double first = 0.0, last = 0.0;
        for (std::size_t j = 0; (std::size_t(1) << j) <= n; ++j) {
            const double t = double(std::size_t(1) << j) * r[(std::size_t(1) << j) - 1];
            if (j == 0) first = t;
            last = t;
        }
        s.ref_divergent_sum = n >= 8 && last >= 0.25 * first;
        return s;
    }
};

struct MajorizationReport {
    bool dominated = false;
    std::optional<std::size_t> first_violation; // 1-based partial-sum index
    std::vector<double> partial_sums_x;
    std::vector<double> partial_sums_y;
};

namespace detail {

inline void require_sorted(const std::vector<double>& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] > s[i - 1] + 1e-12 * (1.0 + std::abs(s[0])))
            throw domain_error("UnsortedInput", "sequence must be non-increasing");
}

} // namespace detail

/// Symmetric norm of a non-increasing singular-value sequence.
inline double ideal_norm(const std::vector<double>& s, const NormSpec& spec) {
    detail::require_sorted(s);
    if (s.empty()) return 0.0;
    switch (spec.kind) {
        case NormSpec::Kind::Operator:
            return s[0];
        case NormSpec::Kind::Schatten: {
            double acc = 0.0;
            for (double v : s) acc += std::pow(v, spec.p);
            return std::pow(acc, 1.0 / spec.p);
        }
        case NormSpec::Kind::KyFan: {
            double acc = 0.0;
            for (std::size_t i = 0; i < std::min(spec.k, s.size()); ++i) acc += s[i];
            return acc;
        }
        case NormSpec::Kind::Trace: {
            double acc = 0.0;
            for (double v : s) acc += v;
            return acc;
        }
        case NormSpec::Kind::Ratio: {
            // sup_n (sum_{k<=n} s_k) / (sum_{k<=n} r_k); a reference shorter
            // than s is extended by its last value.
            double num = 0.0, den = 0.0, best = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                num += s[i];
                den += i < spec.reference.size() ? spec.reference[i] : spec.reference.back();
                best = std::max(best, num / den);
            }
            return best;
        }
    }
    return 0.0;
}

/// Ky Fan partial-sum dominance of sx by sy (shorter side padded with zeros).
inline MajorizationReport ky_fan_majorizes(const std::vector<double>& sx,
                                           const std::vector<double>& sy) {
    detail::require_sorted(sx);
    detail::require_sorted(sy);
    const std::size_t n = std::max(sx.size(), sy.size());
    MajorizationReport rep;
    rep.dominated = true;
    double px = 0.0, py = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        px += i < sx.size() ? sx[i] : 0.0;
        py += i < sy.size() ? sy[i] : 0.0;
        rep.partial_sums_x.push_back(px);
        rep.partial_sums_y.push_back(py);
        if (rep.dominated && px > py + 1e-12 * (1.0 + py)) {
            rep.dominated = false;
            rep.first_violation = i + 1;
        }
    }
    return rep;
}

/// Norm of every Schmidt truncation x_n of x; the recorded monotone partial
/// sequence stands in for the maximal-norm limit at desk scale.
inline std::pair<double, std::vector<double>> maximal_norm(const Matrix& x,
                                                           const NormSpec& spec) {
    std::vector<double> s = svd(x).singular_values;
    std::vector<double> partials;
    for (std::size_t n = 1; n <= s.size(); ++n)
        partials.push_back(ideal_norm(std::vector<double>(s.begin(), s.begin() + n), spec));
    const double value = partials.empty() ? 0.0 : partials.back();
    return {value, std::move(partials)};
}

} // namespace orbitkit

#endif
