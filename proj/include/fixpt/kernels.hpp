#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

#include <omp.h>

namespace fixpt {

/* Max/argmax reductions and loops behind the estimators, multi-starts and sweeps.
 * The parallel variants must agree with the serial ones exactly: ties go to the
 * smallest index, NaN and excluded (nullopt) terms are skipped, and the exception
 * of the smallest failing index is the one rethrown. */

enum class Execution { serial, parallel };

struct MaxResult {
    double value = -INFINITY;
    std::size_t index = 0;
    std::size_t counted = 0; // terms that were not excluded
    bool found() const { return counted > 0; }
};

namespace detail {

inline void merge(MaxResult& into, const MaxResult& from)
{
    if (from.counted == 0) return;
    const bool empty = into.counted == 0;
    into.counted += from.counted;
    if (empty || from.value > into.value || (from.value == into.value && from.index < into.index)) {
        into.value = from.value;
        into.index = from.index;
    }
}

inline void consider(MaxResult& r, double v, std::size_t i)
{
    if (std::isnan(v)) return;
    ++r.counted;
    if (r.counted == 1 || v > r.value || (v == r.value && i < r.index)) {
        r.value = v;
        r.index = i;
    }
}

struct ErrorSlot {
    std::exception_ptr error;
    std::size_t index = static_cast<std::size_t>(-1);

    void offer(std::exception_ptr e, std::size_t i)
    {
#pragma omp critical(fixpt_error_slot)
        if (i < index) {
            index = i;
            error = e;
        }
    }
    void rethrow() const
    {
        if (error) std::rethrow_exception(error);
    }
};

} // namespace detail

// f: size_t -> std::optional<double>
template <class F>
MaxResult reduce_max_serial(std::size_t n, F&& f)
{
    MaxResult r;
    for (std::size_t i = 0; i < n; ++i)
        if (auto v = f(i)) detail::consider(r, *v, i);
    return r;
}

template <class F>
MaxResult reduce_max_parallel(std::size_t n, F&& f)
{
    const int threads = omp_get_max_threads();
    std::vector<MaxResult> partial(static_cast<std::size_t>(threads));
    detail::ErrorSlot slot;
#pragma omp parallel num_threads(threads)
    {
        MaxResult& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const auto k = static_cast<std::size_t>(i);
            try {
                if (auto v = f(k)) detail::consider(mine, *v, k);
            } catch (...) {
                slot.offer(std::current_exception(), k);
            }
        }
    }
    slot.rethrow();
    MaxResult r;
    for (const auto& p : partial) detail::merge(r, p);
    return r;
}

template <class F>
MaxResult reduce_max(Execution ex, std::size_t n, F&& f)
{
    return ex == Execution::parallel ? reduce_max_parallel(n, std::forward<F>(f))
                                     : reduce_max_serial(n, std::forward<F>(f));
}

// body: size_t -> void; independent iterations writing to disjoint slots
template <class F>
void parallel_for(Execution ex, std::size_t n, F&& body)
{
    if (ex == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    detail::ErrorSlot slot;
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            slot.offer(std::current_exception(), static_cast<std::size_t>(i));
        }
    }
    slot.rethrow();
}

} // namespace fixpt
