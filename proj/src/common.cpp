#include "kcm/common.hpp"

#include <algorithm>
#include <mutex>
#include <thread>
#include <vector>

namespace kcm {

void require(bool condition, const std::string& what) {
    if (!condition) throw InputError(what);
}

void require_finite(const Matrix& m, const std::string& what) {
    if (!m.allFinite()) throw NumericInputError(what + ": non-finite entries");
}

void require_finite(const Vector& v, const std::string& what) {
    if (!v.allFinite()) throw NumericInputError(what + ": non-finite entries");
}

void parallel_for(std::int64_t count, int n_threads,
                  const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    const int workers = std::min<std::int64_t>(std::max(n_threads, 1), count);
    if (workers == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (count + workers - 1) / workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kcm
