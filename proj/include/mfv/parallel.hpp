#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "mfv/numerics.hpp"

namespace mfv {

// Data-parallel kernels used by the quadrature, AFE and Maass-assembly inner
// loops. Every kernel has a serial reference path and an OpenMP path over the
// same fixed block decomposition, so results are bit-identical for any thread
// count; tests assert serial == parallel.

int max_threads();
void set_num_threads(int n);
bool parallel_enabled();
void set_parallel_enabled(bool on);

inline constexpr std::int64_t kBlock = 256;

// sum_{i=0}^{n-1} term(i), Neumaier-compensated within blocks, block partials
// combined in index order.
double block_sum_serial(std::int64_t n, const std::function<double(std::int64_t)>& term);
double block_sum_parallel(std::int64_t n, const std::function<double(std::int64_t)>& term);
double block_sum(std::int64_t n, const std::function<double(std::int64_t)>& term);

std::complex<double> block_sum_c_serial(std::int64_t n,
                                        const std::function<std::complex<double>(std::int64_t)>& term);
std::complex<double> block_sum_c_parallel(std::int64_t n,
                                          const std::function<std::complex<double>(std::int64_t)>& term);
std::complex<double> block_sum_c(std::int64_t n,
                                 const std::function<std::complex<double>(std::int64_t)>& term);

// parallel for over [0, n); f must be safe for concurrent distinct i.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f);

}  // namespace mfv
