#include "gradratio/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace gradratio {

namespace {

int detect_thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("GRADRATIO_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

} // namespace

int thread_count() {
    static const int n = detect_thread_count();
    return n;
}

} // namespace gradratio
