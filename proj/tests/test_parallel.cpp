#include "yamabe/parallel.hpp"

#include <doctest.h>

#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace yamabe;

TEST_SUITE("parallel") {
  TEST_CASE("every index runs once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
  }

  TEST_CASE("thread cap from the environment") {
    setenv("YAMABE_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    setenv("YAMABE_THREADS", "junk", 1);
    CHECK(worker_count() >= 1);
    unsetenv("YAMABE_THREADS");
    CHECK(worker_count() >= 1);
  }

  TEST_CASE("the smallest failing index wins") {
    try {
      parallel_for(100, [](std::size_t i) {
        if (i == 37 || i == 80) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "37");
    }
  }
}
