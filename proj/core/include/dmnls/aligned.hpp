#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace dmnls {

/// Allocator returning 64-byte aligned storage so that FFT plans built on
/// one buffer can be executed on any other buffer of the same length.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{alignment}));
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t{alignment});
  }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex, AlignedAllocator<Complex>>;

}  // namespace dmnls
