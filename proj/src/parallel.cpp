#include "wmd/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace wmd {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_threads(unsigned count) { g_workers.store(count == 0 ? 1 : count); }

unsigned worker_threads() { return g_workers.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned workers = worker_threads();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    auto run = [&](unsigned worker) {
        for (std::size_t i = worker; i < count; i += workers) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace wmd
