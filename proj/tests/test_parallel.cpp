#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "oschalf/parallel.hpp"
#include "oschalf/random.hpp"

using namespace oschalf;

TEST_CASE("parallel_for fills every slot once") {
  std::vector<int> out(1000, 0);
  std::atomic<int> calls{0};
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] += static_cast<int>(i);
    ++calls;
  });
  CHECK(calls == 1000);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i));
}

TEST_CASE("parallel_for rethrows") {
  CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                    if (i == 17) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("worker count honours the environment cap") {
  setenv("OSCHALF_THREADS", "2", 1);
  CHECK(worker_count() == 2);
  setenv("OSCHALF_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("OSCHALF_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("rng streams repeat and stay in range") {
  Rng a(123), b(123);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += a.normal() / 10000.0;
    b.normal();
  }
  CHECK(std::abs(mean) < 0.05);
}
