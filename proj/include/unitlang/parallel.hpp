// Copyright 2026 The unitlang Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNITLANG_PARALLEL_HPP
#define UNITLANG_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace unitlang {

// Runs fn(begin, end, shard) over `threads` contiguous shards of [0, n).
// Shard boundaries depend only on n and threads. The first exception thrown
// by any shard is rethrown after all shards finish.
template <typename Fn>
void parallel_shards(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&, begin, end, t] {
      try {
        fn(begin, end, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// out[i] = fn(in[i]), computed on `threads` workers, results in input order.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& in, std::size_t threads, Fn&& fn) {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  parallel_shards(in.size(), threads,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
                    for (std::size_t i = begin; i < end; ++i) out[i] = fn(in[i]);
                  });
  return out;
}

}  // namespace unitlang

#endif  // UNITLANG_PARALLEL_HPP
