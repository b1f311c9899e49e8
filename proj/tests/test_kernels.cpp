#include "helpers.hpp"

#include <omp.h>
#include <optional>
#include <stdexcept>

using namespace fixpt;

TEST_CASE("serial and parallel max agree on random data")
{
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {0u, 1u, 7u, 1000u, 10007u}) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(g);
        auto f = [&](std::size_t i) -> std::optional<double> { return v[i]; };
        const auto s = reduce_max_serial(n, f);
        const auto p = reduce_max_parallel(n, f);
        CHECK(s.counted == p.counted);
        CHECK(s.found() == (n > 0));
        if (n) {
            CHECK(s.value == p.value);
            CHECK(s.index == p.index);
            CHECK(s.value == *std::max_element(v.begin(), v.end()));
        }
    }
}

TEST_CASE("ties go to the smallest index; NaN and excluded terms are skipped")
{
    for (int threads : {1, 2, 4, 8}) {
        omp_set_num_threads(threads);
        auto f = [](std::size_t i) -> std::optional<double> {
            if (i % 7 == 3) return std::nullopt;
            if (i % 5 == 1) return std::nan("");
            return (i == 40 || i == 90 || i == 400) ? 2.0 : 1.0;
        };
        const auto p = reduce_max_parallel(500, f);
        CHECK(p.value == 2.0);
        CHECK(p.index == 40);
        const auto s = reduce_max_serial(500, f);
        CHECK(s.counted == p.counted);
        auto nothing = [](std::size_t) -> std::optional<double> { return std::nullopt; };
        CHECK(!reduce_max_parallel(100, nothing).found());
    }
}

TEST_CASE("the exception of the smallest failing index is rethrown")
{
    for (int threads : {1, 3, 8}) {
        omp_set_num_threads(threads);
        auto f = [](std::size_t i) -> std::optional<double> {
            if (i == 17 || i == 600 || i == 999) throw std::runtime_error(std::to_string(i));
            return double(i);
        };
        for (auto ex : {Execution::serial, Execution::parallel}) {
            try {
                reduce_max(ex, 1000, f);
                FAIL("no exception");
            } catch (const std::runtime_error& e) {
                CHECK(std::string(e.what()) == "17");
            }
            try {
                parallel_for(ex, 1000, [&](std::size_t i) { f(i); });
                FAIL("no exception");
            } catch (const std::runtime_error& e) {
                CHECK(std::string(e.what()) == "17");
            }
        }
    }
}

TEST_CASE("parallel_for visits each index once")
{
    std::vector<int> hits(3000, 0);
    parallel_for(Execution::parallel, hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
