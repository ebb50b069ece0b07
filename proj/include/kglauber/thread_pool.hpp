// Copyright 2026 The kglauber Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace kglauber {

/// Fixed-size fork-join pool. parallel_for splits [0, count) into one
/// contiguous chunk per worker (the caller runs chunk 0) and blocks until all
/// chunks finish. Chunk boundaries depend on the worker count, so callers
/// must make each index's result independent of which chunk computed it.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const { return workers_.size() + 1; }

  /// fn(begin, end) over disjoint chunks. Rethrows the first exception.
  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t, std::size_t)>& fn);

 private:
  void worker_loop(std::size_t slot);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t job_count_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

/// Runs fn over [0, count) on `pool` when it exists, has more than one
/// worker and the work estimate reaches `grain`; otherwise inline.
void maybe_parallel_for(ThreadPool* pool, std::size_t count, std::size_t work,
                        std::size_t grain,
                        const std::function<void(std::size_t, std::size_t)>& fn);

/// Thread count from KGLAUBER_THREADS, else `fallback`.
std::size_t threads_from_env(std::size_t fallback);

}  // namespace kglauber
