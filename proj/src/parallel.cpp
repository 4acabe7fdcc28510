#include "fracmus/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "fracmus/summation.hpp"

namespace fracmus {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kBlock = 16;

void run_workers(std::size_t nblocks, const std::function<void(std::size_t)>& block_fn) {
    int nt = std::min<int>(g_threads.load(), static_cast<int>(nblocks));
    if (nt <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) block_fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto work = [&] {
        try {
            for (std::size_t b = next++; b < nblocks; b = next++) block_fn(b);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
            next = nblocks;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}
}  // namespace

void set_threads(int n) { g_threads = std::max(1, n); }
int threads() { return g_threads.load(); }

double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<CompensatedSum> partial(nblocks);
    run_workers(nblocks, [&](std::size_t b) {
        std::size_t end = std::min(n, (b + 1) * kBlock);
        CompensatedSum s;
        for (std::size_t i = b * kBlock; i < end; ++i) s.add(fn(i));
        partial[b] = s;
    });
    CompensatedSum total;
    for (const auto& p : partial) total.add(p);
    return total.value();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::size_t nblocks = (n + kBlock - 1) / kBlock;
    run_workers(nblocks, [&](std::size_t b) {
        std::size_t end = std::min(n, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) fn(i);
    });
}

}  // namespace fracmus
