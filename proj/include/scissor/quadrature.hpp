#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace scissor::quad {

/// Pairwise (cascade) summation. The split points depend only on the
/// length, so the result is reproducible regardless of how the inputs were
/// produced.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    constexpr std::size_t block = 64;
    if (values.size() <= block) {
        T acc{};
        for (const T& v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

/// Composite Simpson weights (without the h/3 factor) for an odd node count.
inline std::vector<double> simpson_weights(std::size_t nodes) {
    if (nodes < 3 || nodes % 2 == 0)
        throw std::invalid_argument("Simpson rule needs an odd number of nodes >= 3");
    std::vector<double> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    w.front() = 1.0;
    w.back() = 1.0;
    return w;
}

/// Smallest node count >= requested that is compatible with a Simpson rule
/// on both the full grid and every other node (n = 4k + 1).
inline std::size_t richardson_node_count(std::size_t requested) {
    std::size_t n = std::max<std::size_t>(requested, 5);
    while ((n - 1) % 4 != 0) ++n;
    return n;
}

template <typename T>
struct SimpsonEstimate {
    T value{};        // Simpson on the full grid
    T coarse{};       // Simpson on every other node
    double abs_mass = 0.0;  // Simpson integral of |f|, the scale for the error test

    T richardson() const { return value + (value - coarse) / 15.0; }
    double relative_change() const {
        return abs_mass > 0.0 ? std::abs(value - coarse) / abs_mass : 0.0;
    }
};

/// Simpson on [a, b] with n = 4k + 1 nodes, returning both the h and 2h
/// estimates so callers can apply a refinement test.
template <typename T, typename F>
SimpsonEstimate<T> simpson_refined(F&& f, double a, double b, std::size_t nodes) {
    const std::size_t n = richardson_node_count(nodes);
    const double h = (b - a) / static_cast<double>(n - 1);
    std::vector<T> fine(n), coarse((n + 1) / 2);
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T v = f(a + h * static_cast<double>(i));
        const double w = (i == 0 || i == n - 1) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
        fine[i] = v * w;
        mass[i] = std::abs(v) * w;
        if (i % 2 == 0) {
            const std::size_t j = i / 2;
            const double wc = (j == 0 || j == (n - 1) / 2) ? 1.0 : ((j % 2 == 1) ? 4.0 : 2.0);
            coarse[j] = v * wc;
        }
    }
    SimpsonEstimate<T> out;
    out.value = pairwise_sum(std::span<const T>(fine)) * (h / 3.0);
    out.coarse = pairwise_sum(std::span<const T>(coarse)) * (2.0 * h / 3.0);
    out.abs_mass = pairwise_sum(std::span<const double>(mass)) * (h / 3.0);
    return out;
}

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Each index is handled by exactly one thread; callers write to disjoint
/// slots so the output does not depend on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         unsigned max_threads = 0) {
    unsigned threads = max_threads ? max_threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) body(i);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace scissor::quad
