#include "anisoflow/aligned.hpp"

#include <new>
#include <unordered_map>

namespace anisoflow::detail {

namespace {

constexpr std::align_val_t kAlignment{64};
constexpr std::size_t kCachedMinimum = 32 * 1024;
constexpr std::size_t kPerSizeLimit = 48;

// Trivially destructible, so it stays readable after the cache is torn
// down at thread exit; late releases then bypass the cache.
thread_local bool cache_gone = false;

struct BlockCache {
    std::unordered_map<std::size_t, std::vector<void*>> free;
    ~BlockCache() {
        cache_gone = true;
        for (auto& [bytes, blocks] : free) {
            for (void* p : blocks) ::operator delete(p, kAlignment);
        }
    }
};

BlockCache& cache() {
    thread_local BlockCache c;
    return c;
}

}  // namespace

void* acquire_block(std::size_t bytes) {
    if (bytes >= kCachedMinimum && !cache_gone) {
        auto& list = cache().free[bytes];
        if (!list.empty()) {
            void* p = list.back();
            list.pop_back();
            return p;
        }
    }
    return ::operator new(bytes, kAlignment);
}

void release_block(void* p, std::size_t bytes) noexcept {
    if (bytes >= kCachedMinimum && !cache_gone) {
        try {
            auto& list = cache().free[bytes];
            if (list.size() < kPerSizeLimit) {
                list.push_back(p);
                return;
            }
        } catch (...) {
        }
    }
    ::operator delete(p, kAlignment);
}

}  // namespace anisoflow::detail
