#pragma once

// Sampling windows and the row-parallel driver shared by the grid scanners.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cubicmaps {

struct window {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    /// Pixel-center sampling, row-major with the top row at ymax.
    double x_at(int i, int width) const { return xmin + (i + 0.5) * (xmax - xmin) / width; }
    double y_at(int j, int height) const { return ymax - (j + 0.5) * (ymax - ymin) / height; }
};

/// Resolves a requested worker count: 0 means the CUBICMAPS_THREADS
/// environment variable if set, otherwise the hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CUBICMAPS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(row) for every row on `threads` workers. Rows are independent,
/// so the result does not depend on scheduling.
template <class Body>
void parallel_rows(int rows, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(rows, 1))));
    if (threads == 1) {
        for (int j = 0; j < rows; ++j) body(j);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int j = next++; j < rows; j = next++) body(j);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cubicmaps
