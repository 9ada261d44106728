#pragma once

#include <mutex>
#include <utility>
#include <vector>

#include "mahler/monomial.hpp"

namespace mahler {

// The universal coefficients V^m_k for one base p: V^m_k is the coefficient
// of (x-1)^(m-k) in the Taylor expansion of (x^(p-1)+...+x+1)^(-m) at x = 1.
// Everything is plain rational arithmetic in t = x-1 truncated at t^m_max.
class UniversalVTable {
  public:
    UniversalVTable(long p, long m_max) : p_(p), m_max_(m_max) {
        if (p < 2) throw Error("UniversalVTable: p must be >= 2");
        if (m_max < 1) throw Error("UniversalVTable: m_max must be >= 1");
        const std::size_t len = static_cast<std::size_t>(m_max);

        // q(t) = sum_{j<p} (1+t)^j mod t^m_max
        QPoly q(len, Rational(0));
        QPoly pw{Rational(1)};  // (1+t)^j, truncated
        for (long j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < pw.size(); ++i) q[i] += pw[i];
            // multiply by (1+t), truncate
            QPoly nx(std::min<std::size_t>(pw.size() + 1, len), Rational(0));
            for (std::size_t i = 0; i < pw.size(); ++i) {
                nx[i] += pw[i];
                if (i + 1 < nx.size()) nx[i + 1] += pw[i];
            }
            pw = std::move(nx);
        }

        // inverse power series of q
        QPoly inv(len, Rational(0));
        inv[0] = Rational(1) / q[0];
        for (std::size_t n = 1; n < len; ++n) {
            Rational s(0);
            for (std::size_t j = 1; j <= n; ++j) s += q[j] * inv[n - j];
            inv[n] = -s / q[0];
        }

        entries_.resize(len);
        QPoly cur = inv;
        for (long m = 1; m <= m_max; ++m) {
            auto& row = entries_[static_cast<std::size_t>(m - 1)];
            row.resize(static_cast<std::size_t>(m));
            // V^m_k = coefficient of t^(m-k) in inv^m
            for (long k = 1; k <= m; ++k)
                row[static_cast<std::size_t>(k - 1)] = cur[static_cast<std::size_t>(m - k)];
            if (m < m_max) {
                QPoly nx(len, Rational(0));
                for (std::size_t i = 0; i < len; ++i) {
                    if (cur[i] == 0) continue;
                    for (std::size_t j = 0; i + j < len; ++j) nx[i + j] += cur[i] * inv[j];
                }
                cur = std::move(nx);
            }
        }
    }

    long p() const { return p_; }
    long m_max() const { return m_max_; }

    // V^s_k, 1 <= k <= s <= m_max
    const Rational& universal(long s, long k) const {
        if (k < 1 || s < k || s > m_max_) throw Error("UniversalVTable: index out of range");
        return entries_[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(k - 1)];
    }

  private:
    long p_;
    long m_max_;
    std::vector<std::vector<Rational>> entries_;
};

inline const UniversalVTable& universal_v(long p, long m_max) {
    static std::map<std::pair<long, long>, std::unique_ptr<UniversalVTable>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, m_max}];
    if (!slot) slot = std::make_unique<UniversalVTable>(p, m_max);
    return *slot;
}

// V^s_k(alpha) = V^s_k * alpha^(k - p*s)
inline TowerElement v_coeff(const UniversalVTable& vt, const TowerElement& alpha, long s, long k) {
    return vt.universal(s, k) * alpha.pow(k - vt.p() * s);
}

// Same, with the pole given symbolically: the power is taken on the
// monomial, which needs no field inversion.
inline TowerElement v_coeff(const UniversalVTable& vt, const RadicalMonomial& alpha, long s,
                            long k, const FieldPtr& field) {
    return vt.universal(s, k) * alpha.pow(k - vt.p() * s).value(field);
}

}  // namespace mahler
