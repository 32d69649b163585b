#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "chainwave/parallel.hpp"

using namespace chainwave;

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1013);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, ThreadCountFromEnvironment) {
  setenv("CHAINWAVE_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("CHAINWAVE_THREADS", "junk", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("CHAINWAVE_THREADS");
}
