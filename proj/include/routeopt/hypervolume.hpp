#pragma once

// Exact hypervolume of a 4-objective front via the WFG exclusive-volume
// recursion: HV(S) = Σ_i [ incl(p_i) − HV({q ∧ p_i : q after i}) ].  Exact
// and fast for the front sizes that occur here (≤ 64 points).

#include <algorithm>
#include <array>
#include <vector>

#include "objectives.hpp"

namespace routeopt {

namespace detail {

using Point4 = std::array<double, 4>;

/// a covers b when a is at least as good everywhere (maximize orientation).
inline bool covers(const Point4& a, const Point4& b) {
    return a[0] >= b[0] && a[1] >= b[1] && a[2] >= b[2] && a[3] >= b[3];
}

/// Drop points covered by another (duplicates keep their first copy).
inline void prune_covered(std::vector<Point4>& pts) {
    std::vector<Point4> kept;
    kept.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
            if (j == i) continue;
            if (covers(pts[j], pts[i]) && (!covers(pts[i], pts[j]) || j < i)) drop = true;
        }
        if (!drop) kept.push_back(pts[i]);
    }
    pts = std::move(kept);
}

inline double wfg_hv(std::vector<Point4> pts) {
    if (pts.empty()) return 0.0;
    // Descending first coordinate tightens the limit sets early.
    std::sort(pts.begin(), pts.end(), [](const Point4& a, const Point4& b) { return a > b; });
    double hv = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point4& p = pts[i];
        double incl = 1.0;
        for (double c : p) incl *= c;

        std::vector<Point4> limited;
        limited.reserve(pts.size() - i - 1);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Point4 q;
            for (int m = 0; m < 4; ++m) q[static_cast<std::size_t>(m)] =
                std::min(pts[j][static_cast<std::size_t>(m)], p[static_cast<std::size_t>(m)]);
            limited.push_back(q);
        }
        prune_covered(limited);
        hv += incl - wfg_hv(std::move(limited));
    }
    return hv;
}

}  // namespace detail

/// Dominated volume between `ref` and the front in the maximize orientation
/// (S, −G, −Σ, −R).  Points that fail to strictly improve on `ref` in every
/// coordinate are clipped out; an empty (or fully clipped) front measures 0.
inline double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref) {
    const auto r = maximize_form(ref);
    std::vector<detail::Point4> pts;
    pts.reserve(front.size());
    for (const auto& v : front) {
        const auto m = maximize_form(v);
        bool better = true;
        for (std::size_t i = 0; i < 4 && better; ++i) better = m[i] > r[i];
        if (!better) continue;
        detail::Point4 p;
        for (std::size_t i = 0; i < 4; ++i) p[i] = m[i] - r[i];
        pts.push_back(p);
    }
    detail::prune_covered(pts);
    return detail::wfg_hv(std::move(pts));
}

}  // namespace routeopt
