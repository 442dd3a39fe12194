#include "mfv/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <atomic>

namespace mfv {

namespace {
std::atomic<bool> g_parallel{true};
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

bool parallel_enabled() {
#ifdef _OPENMP
  return g_parallel.load();
#else
  return false;
#endif
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }

namespace {

template <typename T, typename Acc>
std::vector<T> block_partials_serial(std::int64_t n, const std::function<T(std::int64_t)>& term) {
  std::int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<T> partial(static_cast<size_t>(std::max<std::int64_t>(nb, 0)));
  for (std::int64_t b = 0; b < nb; ++b) {
    Acc acc;
    std::int64_t hi = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < hi; ++i) acc.add(term(i));
    partial[static_cast<size_t>(b)] = acc.value();
  }
  return partial;
}

template <typename T, typename Acc>
std::vector<T> block_partials_parallel(std::int64_t n, const std::function<T(std::int64_t)>& term) {
  std::int64_t nb = (n + kBlock - 1) / kBlock;
  std::vector<T> partial(static_cast<size_t>(std::max<std::int64_t>(nb, 0)));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t b = 0; b < nb; ++b) {
    Acc acc;
    std::int64_t hi = std::min(n, (b + 1) * kBlock);
    for (std::int64_t i = b * kBlock; i < hi; ++i) acc.add(term(i));
    partial[static_cast<size_t>(b)] = acc.value();
  }
  return partial;
}

template <typename T>
T combine(const std::vector<T>& partial) {
  T s{};
  for (const T& p : partial) s += p;
  return s;
}

}  // namespace

double block_sum_serial(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  return combine(block_partials_serial<double, KahanSum>(n, term));
}

double block_sum_parallel(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  return combine(block_partials_parallel<double, KahanSum>(n, term));
}

double block_sum(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  return parallel_enabled() ? block_sum_parallel(n, term) : block_sum_serial(n, term);
}

std::complex<double> block_sum_c_serial(std::int64_t n,
                                        const std::function<std::complex<double>(std::int64_t)>& term) {
  return combine(block_partials_serial<std::complex<double>, KahanSumC>(n, term));
}

std::complex<double> block_sum_c_parallel(std::int64_t n,
                                          const std::function<std::complex<double>(std::int64_t)>& term) {
  return combine(block_partials_parallel<std::complex<double>, KahanSumC>(n, term));
}

std::complex<double> block_sum_c(std::int64_t n,
                                 const std::function<std::complex<double>(std::int64_t)>& term) {
  return parallel_enabled() ? block_sum_c_parallel(n, term) : block_sum_c_serial(n, term);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f) {
  if (parallel_enabled()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < n; ++i) f(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) f(i);
  }
}

}  // namespace mfv
