#include <cstdlib>
#include <cstring>
#include <string>

#include "bwalk/errors.hpp"
#include "bwalk/kernels.hpp"

namespace bwalk::kernels {

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("BWALK_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::Scalar;
  }
  return avx2::supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend& current() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

bool backend_available(Backend b) {
  return b == Backend::Scalar || (b == Backend::Avx2 && avx2::supported());
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ConfigError("SIMD backend " + std::string(backend_name(b)) + " not available on this CPU");
  }
  current() = b;
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void birth_death_step(std::span<const double> in, std::span<double> out) {
  if (current() == Backend::Avx2) return avx2::birth_death_step(in, out);
  scalar::birth_death_step(in, out);
}

void hypercube_step(std::span<const double> in, std::span<double> out, unsigned d) {
  if (current() == Backend::Avx2) return avx2::hypercube_step(in, out, d);
  scalar::hypercube_step(in, out, d);
}

void pair_sums(std::span<const double> x, std::span<double> out, PairTerm term) {
  if (current() == Backend::Avx2) return avx2::pair_sums(x, out, term);
  scalar::pair_sums(x, out, term);
}

void accumulate_products(std::span<const double> v, std::span<double> s2, std::span<double> s3,
                         std::span<double> s4) {
  if (current() == Backend::Avx2) return avx2::accumulate_products(v, s2, s3, s4);
  scalar::accumulate_products(v, s2, s3, s4);
}

}  // namespace bwalk::kernels
