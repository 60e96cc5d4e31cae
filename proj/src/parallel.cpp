#include "sgbc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace sgbc::parallel {
namespace {

class Pool {
 public:
  explicit Pool(int workers) {
    for (int i = 0; i < workers; ++i) threads_.emplace_back([this] { loop(); });
  }

  ~Pool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    {
      std::lock_guard lock(mutex_);
      body_ = &body;
      chunks_ = chunks;
      next_.store(0);
      pending_ = threads_.size();
      ++generation_;
    }
    wake_.notify_all();
    drain();
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    body_ = nullptr;
  }

 private:
  void drain() {
    for (std::size_t c = next_.fetch_add(1); c < chunks_; c = next_.fetch_add(1)) (*body_)(c);
  }

  void loop() {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
      {
        std::lock_guard lock(mutex_);
        --pending_;
      }
      done_.notify_one();
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t chunks_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t pending_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
};

int g_threads = 1;
std::unique_ptr<Pool> g_pool;
std::mutex g_config_mutex;

}  // namespace

void set_threads(int n) {
  std::lock_guard lock(g_config_mutex);
  g_threads = std::max(1, n);
  g_pool.reset();
  if (g_threads > 1) g_pool = std::make_unique<Pool>(g_threads - 1);
}

int threads() { return g_threads; }

void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& body) {
  if (g_pool == nullptr || chunks < 2) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  g_pool->run(chunks, body);
}

}  // namespace sgbc::parallel
