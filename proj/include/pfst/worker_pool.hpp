#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pfst {

// Fixed set of worker threads executing one indexed job at a time.
//
// run() returns only after every task of the job has finished, so
// consecutive run() calls are separated by a full barrier. The caller
// thread takes part in the job. Concurrent run() calls are serialized.
class WorkerPool {
 public:
  // `num_workers` counts the caller; 1 means no background threads.
  explicit WorkerPool(std::size_t num_workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t num_workers() const { return threads_.size() + 1; }

  void run(std::size_t num_tasks, const std::function<void(std::size_t)>& task);

 private:
  void worker_loop();
  void drain(const std::function<void(std::size_t)>& task, std::size_t num_tasks);

  std::mutex run_mutex_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t num_tasks_ = 0;
  std::size_t generation_ = 0;
  std::size_t busy_ = 0;
  bool stopping_ = false;
  std::atomic<std::size_t> next_{0};
  std::vector<std::thread> threads_;
};

}  // namespace pfst
