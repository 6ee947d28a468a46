#pragma once

#include <cstddef>
#include <vector>

namespace anisoflow {

namespace detail {
/// 64-byte aligned blocks. Large blocks are recycled through a per-thread
/// cache; glibc otherwise maps and unmaps them on every field temporary.
void* acquire_block(std::size_t bytes);
void release_block(void* p, std::size_t bytes) noexcept;
}  // namespace detail

/// Cache-line aligned storage so FFTW can run its SIMD kernels on field data.
template <typename T>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) { return static_cast<T*>(detail::acquire_block(n * sizeof(T))); }
    void deallocate(T* p, std::size_t n) noexcept { detail::release_block(p, n * sizeof(T)); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const noexcept {
        return true;
    }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

}  // namespace anisoflow
