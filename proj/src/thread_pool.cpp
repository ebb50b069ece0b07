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

#include "kglauber/thread_pool.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>

namespace kglauber {

ThreadPool::ThreadPool(std::size_t threads) {
  const std::size_t extra = threads > 1 ? threads - 1 : 0;
  workers_.reserve(extra);
  for (std::size_t slot = 1; slot <= extra; ++slot)
    workers_.emplace_back([this, slot] { worker_loop(slot); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

namespace {

std::pair<std::size_t, std::size_t> chunk(std::size_t count, std::size_t parts,
                                          std::size_t slot) {
  const std::size_t base = count / parts;
  const std::size_t rem = count % parts;
  const std::size_t begin = slot * base + std::min(slot, rem);
  return {begin, begin + base + (slot < rem ? 1 : 0)};
}

}  // namespace

void ThreadPool::worker_loop(std::size_t slot) {
  std::size_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t, std::size_t)>* job;
    std::size_t count;
    {
      std::unique_lock lock(mutex_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      job = job_;
      count = job_count_;
    }
    std::exception_ptr err;
    const auto [begin, end] = chunk(count, size(), slot);
    if (begin < end) {
      try {
        (*job)(begin, end);
      } catch (...) {
        err = std::current_exception();
      }
    }
    {
      std::lock_guard lock(mutex_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

void ThreadPool::parallel_for(std::size_t count,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (workers_.empty()) {
    fn(0, count);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    job_count_ = count;
    pending_ = workers_.size();
    error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();

  std::exception_ptr own;
  const auto [begin, end] = chunk(count, size(), 0);
  try {
    if (begin < end) fn(begin, end);
  } catch (...) {
    own = std::current_exception();
  }

  std::unique_lock lock(mutex_);
  done_cv_.wait(lock, [&] { return pending_ == 0; });
  job_ = nullptr;
  if (own) std::rethrow_exception(own);
  if (error_) std::rethrow_exception(error_);
}

void maybe_parallel_for(ThreadPool* pool, std::size_t count, std::size_t work,
                        std::size_t grain,
                        const std::function<void(std::size_t, std::size_t)>& fn) {
  if (pool != nullptr && pool->size() > 1 && work >= grain && count > 1) {
    pool->parallel_for(count, fn);
  } else if (count > 0) {
    fn(0, count);
  }
}

std::size_t threads_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("KGLAUBER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return fallback;
}

}  // namespace kglauber
