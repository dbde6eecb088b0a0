#include "w2s/parallel.hpp"

#include <cstdlib>
#include <string>

namespace w2s {

unsigned thread_cap() {
    unsigned cap = 0;
    if (const char* env = std::getenv("W2S_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 0) cap = static_cast<unsigned>(v);
    }
    if (cap == 0) cap = std::thread::hardware_concurrency();
    return cap == 0 ? 1u : cap;
}

}  // namespace w2s
