// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kerrcrit
{

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// visited exactly once; the first exception is rethrown after all workers
// have joined.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn)
{
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1)
  {
    for (std::size_t i = 0; i < count; ++i)
    {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
  {
    pool.emplace_back([&] {
      for (;;)
      {
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
        {
          return;
        }
        try
        {
          fn(i);
        }
        catch (...)
        {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
          {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto &th : pool)
  {
    th.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

// Worker count from KERRCRIT_THREADS, falling back to 1.
unsigned default_thread_count();

}  // namespace kerrcrit
