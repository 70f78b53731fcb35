#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace cfzeta {

/// Fixed-size worker pool. The calling thread counts as one worker, so a
/// pool with one worker never spawns threads and runs everything inline.
///
/// Work is handed out index-by-index from an atomic counter; results must
/// be written to per-index slots so that scheduling cannot influence
/// output. Every numeric routine in this library that accepts a pool is
/// bit-identical for any worker count.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned workers = 0) {
    if (workers == 0) workers = default_workers();
    workers_ = workers < 1 ? 1 : workers;
    for (unsigned i = 1; i < workers_; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  ~ThreadPool() {
    {
      std::lock_guard lk(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned workers() const noexcept { return workers_; }

  /// Invoke body(i) for i in [0, count). Blocks until all are done.
  /// The first exception thrown by any body is rethrown here.
  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    if (workers_ == 1 || count == 1) {
      for (std::size_t i = 0; i < count; ++i) body(i);
      return;
    }
    auto job = std::make_shared<Job>();
    job->count = count;
    job->body = &body;
    job->expected = workers_;
    {
      std::lock_guard lk(mutex_);
      job_ = job;
      ++generation_;
    }
    cv_.notify_all();
    run_job(*job);
    {
      std::unique_lock lk(job->done_mutex);
      job->done_cv.wait(lk, [&] { return job->finished == job->expected; });
    }
    if (job->error) std::rethrow_exception(job->error);
  }

  /// Worker count from CFZETA_THREADS, else hardware concurrency.
  static unsigned default_workers() {
    if (const char* env = std::getenv("CFZETA_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }

 private:
  struct Job {
    std::atomic<std::size_t> next{0};
    std::size_t count = 0;
    const std::function<void(std::size_t)>* body = nullptr;
    unsigned expected = 0;
    std::mutex done_mutex;
    std::condition_variable done_cv;
    unsigned finished = 0;
    std::exception_ptr error;
  };

  void run_job(Job& job) {
    for (;;) {
      std::size_t i = job.next.fetch_add(1, std::memory_order_relaxed);
      if (i >= job.count) break;
      try {
        (*job.body)(i);
      } catch (...) {
        std::lock_guard lk(job.done_mutex);
        if (!job.error) job.error = std::current_exception();
      }
    }
    {
      std::lock_guard lk(job.done_mutex);
      ++job.finished;
    }
    job.done_cv.notify_all();
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    std::unique_lock lk(mutex_);
    for (;;) {
      cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      auto job = job_;
      lk.unlock();
      run_job(*job);
      lk.lock();
    }
  }

  unsigned workers_ = 1;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::shared_ptr<Job> job_;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace cfzeta
