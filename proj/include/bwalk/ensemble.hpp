#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bwalk {

enum class Family { RealSymmetric, ImaginaryAntisymmetric, Rectangular };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);  // "realsym" | "antisym" | "rect"

/// One of the three Bernoulli ensembles together with its dimensions.
///
/// The flat index i in [0, dimension()) enumerates the independent entries
/// row-major: p <= q for RealSymmetric, p < q for ImaginaryAntisymmetric and
/// every (p, q) for Rectangular.
class EnsembleKind {
 public:
  static EnsembleKind real_symmetric(int n);
  static EnsembleKind imaginary_antisymmetric(int n);
  static EnsembleKind rectangular(int n, int m);
  static EnsembleKind make(Family family, int n, int m = 0);

  Family family() const { return family_; }
  int rows() const { return n_; }
  int cols() const { return m_; }
  bool square() const { return family_ != Family::Rectangular; }

  /// d_N, the hypercube dimension.
  std::size_t dimension() const { return dim_; }

  /// Number of spectral coordinates: N for square kinds, M for Rectangular.
  int spectrum_size() const { return square() ? n_ : m_; }

  std::pair<int, int> entry(std::size_t i) const;
  std::size_t index(int p, int q) const;

  /// Magnitude of the scaled entry carried by flat index i.
  double magnitude(std::size_t i) const;

  /// Tr(B^T B) (Tr(H^dagger H), Tr(W)) shared by every matrix of the ensemble.
  double frobenius_norm2() const;

  std::string describe() const;

  friend bool operator==(const EnsembleKind&, const EnsembleKind&) = default;

 private:
  EnsembleKind(Family f, int n, int m);

  Family family_;
  int n_;
  int m_;
  std::size_t dim_;
};

inline std::size_t dimension(const EnsembleKind& kind) { return kind.dimension(); }

/// Hypercube vertex: the d_N independent signs of one matrix, packed 64 per
/// word. A set bit encodes the sign -1. Within word w, index 64*w + j lives at
/// bit (63 - j) so that the hex form reads index 0 as the most significant bit.
class SignVector {
 public:
  explicit SignVector(const EnsembleKind& kind);  // all +1

  static SignVector from_state(const EnsembleKind& kind, std::uint64_t state);
  static SignVector from_hex(const EnsembleKind& kind, std::string_view hex);

  const EnsembleKind& kind() const { return kind_; }
  std::size_t size() const { return kind_.dimension(); }

  int sign(std::size_t i) const { return negative(i) ? -1 : 1; }
  bool negative(std::size_t i) const {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
  }

  SignVector flipped(std::size_t i) const;
  void flip_in_place(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (63 - (i & 63)); }

  /// Number of -1 entries (distance to the all +1 vector).
  std::size_t count_negative() const;

  /// Inverse of from_state: bit i of the result is set iff entry i is -1.
  /// Requires size() <= 64.
  std::uint64_t to_state() const;

  std::string to_hex() const;
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const SignVector& a, const SignVector& b) {
    return a.kind_ == b.kind_ && a.words_ == b.words_;
  }

 private:
  EnsembleKind kind_;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const SignVector& a, const SignVector& b);

/// Scaled matrix of an ensemble member. For ImaginaryAntisymmetric the stored
/// matrix is the real antisymmetric A with H = iA.
struct ScaledMatrix {
  EnsembleKind kind;
  Eigen::MatrixXd entries;

  /// Tr(B^T B) (equivalently Tr(H^dagger H)).
  double frobenius_norm2() const { return entries.squaredNorm(); }
};

ScaledMatrix realize(const SignVector& signs);

/// realize(signs.flipped(i)) - realize(signs), built directly from the rank-1/2
/// structure of a single sign change.
ScaledMatrix flip_delta(const SignVector& signs, std::size_t i);

/// Flip entry i of a realized matrix in place (keeps symmetry/antisymmetry).
void apply_flip(ScaledMatrix& m, std::size_t i);

}  // namespace bwalk
