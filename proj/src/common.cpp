#include "bmkit/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace bmkit {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(std::span<const double>(x)); }

const Quadrature& gauss_legendre01(int order) {
  static std::mutex mu;
  static std::map<int, Quadrature> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Quadrature q;
  q.x.resize(order);
  q.w.resize(order);
  for (int i = 0; i < order; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = p1, pm = p0;
      dp = order * (z * pn - pm) / (z * z - 1.0);
      double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    q.x[i] = 0.5 * (1.0 - z);
    q.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(order, std::move(q)).first->second;
}

namespace {
std::atomic<int> g_cap_override{0};
thread_local bool t_in_worker = false;
}

int thread_cap() {
  int o = g_cap_override.load();
  if (o > 0) return o;
  if (const char* env = std::getenv("BMKIT_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_cap(int cap) { g_cap_override.store(cap); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), count);
  if (workers <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      t_in_worker = true;
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace bmkit
