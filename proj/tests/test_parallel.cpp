#include "doctest.h"

#include <omp.h>

#include "comgap/glauber_tfa.hpp"
#include "comgap/lis.hpp"
#include "comgap/markov_core.hpp"
#include "comgap/sampling.hpp"

using namespace comgap;

TEST_CASE("draw_samples matches its serial twin for any thread count") {
  const auto spec = glauber::default_tfa_spec();
  const glauber::PathSampler sampler(spec);
  const glauber::TfaObservable f(63, {2, 6});
  auto draw = [&](Rng& rng) { return f(glauber::path_values(spec, sampler(63, rng))); };
  const auto serial = draw_samples_serial(draw, 3001, 8, "tail");
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    CHECK(draw_samples(draw, 3001, 8, "tail") == serial);
  }
  CHECK(draw_samples_serial(draw, 10, 8, "tail") == draw_samples(draw, 10, 8, "tail"));
}

TEST_CASE("lip_constant matches its serial twin") {
  Rng rng = rng_stream(2, "par-lip", 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 60);
    const auto c = random_reversible_chain(n, rng);
    std::vector<double> f(n);
    for (auto& v : f) v = uniform01(rng);
    for (bool asym : {false, true}) {
      omp_set_num_threads(4);
      const auto par = lip_constant(c.kernel, f, asym);
      const auto ser = lip_constant_serial(c.kernel, f, asym);
      CHECK(par.value == ser.value);
      CHECK(par.argmax == ser.argmax);
    }
  }
}

TEST_CASE("build_dense_glauber matches its serial twin") {
  omp_set_num_threads(3);
  for (int n : {2, 3}) {
    const auto spec = glauber::default_tfa_spec();
    const auto par = glauber::build_dense_glauber(spec, n);
    const auto ser = glauber::build_dense_glauber_serial(spec, n);
    CHECK(par.states == ser.states);
    const auto pe = par.kernel.entries();
    const auto se = ser.kernel.entries();
    CHECK(std::equal(pe.begin(), pe.end(), se.begin(), se.end()));
  }
}
