#ifndef FRAISSE_EXEC_HPP
#define FRAISSE_EXEC_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fraisse {

// Every bounded verifier runs under one of two kernels. Serial is the
// reference implementation: a plain loop with immediate exit on the first
// witness. Parallel restructures the same scan as an OpenMP sweep that
// keeps the minimum witness index, so both policies return identical
// results on identical inputs. Tests assert that equality; the bench tool
// times the two side by side.
enum class ExecPolicy { Serial, Parallel };

inline const char* exec_policy_name(ExecPolicy p) {
    return p == ExecPolicy::Serial ? "serial" : "parallel";
}

// Returns the least index in [0, n) where pred(i) is true, if any.
template <class Pred>
std::optional<std::size_t> find_first_index(std::size_t n, ExecPolicy policy,
                                            Pred&& pred) {
    if (policy == ExecPolicy::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            if (pred(i)) return i;
        return std::nullopt;
    }
    std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii) {
        std::size_t i = static_cast<std::size_t>(ii);
        if (i >= best.load(std::memory_order_relaxed)) continue;
        if (pred(i)) {
            std::size_t cur = best.load(std::memory_order_relaxed);
            while (i < cur &&
                   !best.compare_exchange_weak(cur, i, std::memory_order_relaxed))
                ;
        }
    }
    std::size_t found = best.load();
    if (found == std::numeric_limits<std::size_t>::max()) return std::nullopt;
    return found;
}

// Unordered sweep over [0, n); fn must be safe to run concurrently.
template <class Fn>
void for_each_index(std::size_t n, ExecPolicy policy, Fn&& fn) {
    if (policy == ExecPolicy::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n); ++ii)
        fn(static_cast<std::size_t>(ii));
}

} // namespace fraisse

#endif
