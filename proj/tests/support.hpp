#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "cubicmaps/grid.hpp"
#include "cubicmaps/loci.hpp"
#include "cubicmaps/prototypes.hpp"

namespace support {

using namespace cubicmaps;

// Within eps of a curve or vertical line where the region partition switches.
inline bool near_separating_curve(double A, double B, double eps) {
    auto close = [&](const curve_id& c) {
        for (double v : curve_B(c, A))
            if (std::abs(B - v) < eps) return true;
        return false;
    };
    if (close(curve_id::per1(1.0)) || close(curve_id::preper11()) || close(curve_id::per2_saddle()) ||
        close(curve_id::per1(-1.0)))
        return true;
    if (A <= 0 && close(curve_id::preper12(0))) return true;
    for (double a : {1.0 / 9.0, -1.0 / 36.0, 1.0, -1.0, 2.0 / 9.0})
        if (std::abs(A - a) < eps) return true;
    return std::abs(B) < eps;
}

// Fraction of grid points where closed form and iteration disagree, and the
// largest distance (in pixels) from such a point to a closed-form flip.
template <class Member>
inline std::pair<double, int> grid_disagreement(const window& w, int n, Member member) {
    std::vector<char> closed(static_cast<std::size_t>(n) * n), dynamic(closed.size());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const membership m = member(w.x_at(i, n), w.y_at(j, n));
            closed[j * n + i] = m.closed_form;
            dynamic[j * n + i] = m.dynamic;
        }
    int bad = 0, worst = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (closed[j * n + i] == dynamic[j * n + i]) continue;
            ++bad;
            int d = 0;
            for (bool found = false; !found && d < n; ++d) {
                for (int dj = -d; dj <= d && !found; ++dj)
                    for (int di = -d; di <= d && !found; ++di) {
                        const int ii = i + di, jj = j + dj;
                        if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
                        found = closed[jj * n + ii] != closed[j * n + i];
                    }
            }
            worst = std::max(worst, d);
        }
    return {static_cast<double>(bad) / (static_cast<double>(n) * n), worst};
}

}  // namespace support
