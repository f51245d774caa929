#include "pfst/worker_pool.hpp"

namespace pfst {

WorkerPool::WorkerPool(std::size_t num_workers) {
  const std::size_t background = num_workers > 1 ? num_workers - 1 : 0;
  threads_.reserve(background);
  for (std::size_t i = 0; i < background; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::drain(const std::function<void(std::size_t)>& task, std::size_t num_tasks) {
  for (std::size_t i = next_.fetch_add(1, std::memory_order_relaxed); i < num_tasks;
       i = next_.fetch_add(1, std::memory_order_relaxed)) {
    task(i);
  }
}

void WorkerPool::run(std::size_t num_tasks, const std::function<void(std::size_t)>& task) {
  if (num_tasks == 0) return;
  std::lock_guard serial(run_mutex_);
  if (threads_.empty() || num_tasks == 1) {
    for (std::size_t i = 0; i < num_tasks; ++i) task(i);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    task_ = &task;
    num_tasks_ = num_tasks;
    next_.store(0, std::memory_order_relaxed);
    busy_ = threads_.size();
    ++generation_;
  }
  wake_.notify_all();
  drain(task, num_tasks);

  std::unique_lock lock(mutex_);
  done_.wait(lock, [this] { return busy_ == 0; });
  task_ = nullptr;
}

void WorkerPool::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    std::unique_lock lock(mutex_);
    wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
    if (stopping_) return;
    seen = generation_;
    const auto* task = task_;
    const std::size_t n = num_tasks_;
    lock.unlock();

    drain(*task, n);

    lock.lock();
    if (--busy_ == 0) done_.notify_one();
  }
}

}  // namespace pfst
