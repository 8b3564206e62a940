#include "bwalk/ensemble.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bwalk/errors.hpp"

namespace bwalk {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::RealSymmetric:
      return "realsym";
    case Family::ImaginaryAntisymmetric:
      return "antisym";
    case Family::Rectangular:
      return "rect";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "realsym") return Family::RealSymmetric;
  if (name == "antisym") return Family::ImaginaryAntisymmetric;
  if (name == "rect") return Family::Rectangular;
  throw ConfigError("unknown ensemble kind '" + std::string(name) +
                    "' (expected realsym, antisym or rect)");
}

EnsembleKind::EnsembleKind(Family f, int n, int m) : family_(f), n_(n), m_(m), dim_(0) {
  switch (f) {
    case Family::RealSymmetric:
      if (n < 2) throw ConfigError("real symmetric ensemble needs N >= 2");
      m_ = n;
      dim_ = static_cast<std::size_t>(n) * (n + 1) / 2;
      break;
    case Family::ImaginaryAntisymmetric:
      if (n < 2) throw ConfigError("antisymmetric ensemble needs N >= 2");
      m_ = n;
      dim_ = static_cast<std::size_t>(n) * (n - 1) / 2;
      break;
    case Family::Rectangular:
      if (m < 1 || n < m) throw ConfigError("rectangular ensemble needs N >= M >= 1");
      dim_ = static_cast<std::size_t>(n) * m;
      break;
  }
}

EnsembleKind EnsembleKind::real_symmetric(int n) { return {Family::RealSymmetric, n, n}; }
EnsembleKind EnsembleKind::imaginary_antisymmetric(int n) {
  return {Family::ImaginaryAntisymmetric, n, n};
}
EnsembleKind EnsembleKind::rectangular(int n, int m) { return {Family::Rectangular, n, m}; }
EnsembleKind EnsembleKind::make(Family family, int n, int m) {
  return {family, n, family == Family::Rectangular ? m : n};
}

namespace {

// First flat index of row p.
std::size_t row_offset(Family f, std::size_t n, std::size_t p) {
  switch (f) {
    case Family::RealSymmetric:
      return p * (2 * n - p + 1) / 2;
    case Family::ImaginaryAntisymmetric:
      return p * (2 * n - p - 1) / 2;
    case Family::Rectangular:
      break;
  }
  return 0;
}

}  // namespace

std::pair<int, int> EnsembleKind::entry(std::size_t i) const {
  if (i >= dim_) throw std::out_of_range("flat index out of range");
  if (family_ == Family::Rectangular) {
    return {static_cast<int>(i / m_), static_cast<int>(i % m_)};
  }
  const auto n = static_cast<std::size_t>(n_);
  // Row lengths decrease by one per row; invert the offset quadratic and fix up.
  const double b = family_ == Family::RealSymmetric ? 2.0 * n + 1.0 : 2.0 * n - 1.0;
  auto p = static_cast<std::size_t>((b - std::sqrt(b * b - 8.0 * static_cast<double>(i))) / 2.0);
  while (p > 0 && row_offset(family_, n, p) > i) --p;
  while (p + 1 < n && row_offset(family_, n, p + 1) <= i) ++p;
  const std::size_t within = i - row_offset(family_, n, p);
  const std::size_t q = family_ == Family::RealSymmetric ? p + within : p + 1 + within;
  return {static_cast<int>(p), static_cast<int>(q)};
}

std::size_t EnsembleKind::index(int p, int q) const {
  if (p < 0 || q < 0 || p >= n_ || q >= m_) throw std::out_of_range("entry out of range");
  switch (family_) {
    case Family::RealSymmetric:
      if (p > q) std::swap(p, q);
      return row_offset(family_, n_, p) + (q - p);
    case Family::ImaginaryAntisymmetric:
      if (p == q) throw std::out_of_range("antisymmetric diagonal is not an independent entry");
      if (p > q) std::swap(p, q);
      return row_offset(family_, n_, p) + (q - p - 1);
    case Family::Rectangular:
      break;
  }
  return static_cast<std::size_t>(p) * m_ + q;
}

double EnsembleKind::magnitude(std::size_t i) const {
  const double inv = 1.0 / std::sqrt(static_cast<double>(n_));
  if (family_ == Family::RealSymmetric) {
    auto [p, q] = entry(i);
    return p == q ? std::sqrt(2.0) * inv : inv;
  }
  if (i >= dim_) throw std::out_of_range("flat index out of range");
  return inv;
}

double EnsembleKind::frobenius_norm2() const {
  if (family_ == Family::Rectangular) return static_cast<double>(m_);
  return 2.0 * static_cast<double>(dim_) / n_;
}

std::string EnsembleKind::describe() const {
  std::ostringstream os;
  os << family_name(family_) << "(N=" << n_;
  if (family_ == Family::Rectangular) os << ",M=" << m_;
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

SignVector::SignVector(const EnsembleKind& kind)
    : kind_(kind), words_((kind.dimension() + 63) / 64, 0) {}

SignVector SignVector::from_state(const EnsembleKind& kind, std::uint64_t state) {
  if (kind.dimension() > 64) throw std::out_of_range("from_state needs d_N <= 64");
  SignVector s(kind);
  for (std::size_t i = 0; i < kind.dimension(); ++i) {
    if ((state >> i) & 1u) s.flip_in_place(i);
  }
  return s;
}

std::uint64_t SignVector::to_state() const {
  if (size() > 64) throw std::out_of_range("to_state needs d_N <= 64");
  std::uint64_t state = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (negative(i)) state |= std::uint64_t{1} << i;
  }
  return state;
}

SignVector SignVector::flipped(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("flat index out of range");
  SignVector out = *this;
  out.flip_in_place(i);
  return out;
}

std::size_t SignVector::count_negative() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string SignVector::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (size() + 3) / 4;
  std::string out(digits, '0');
  for (std::size_t k = 0; k < digits; ++k) {
    unsigned v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t i = 4 * k + j;
      v <<= 1;
      if (i < size() && negative(i)) v |= 1u;
    }
    out[k] = kDigits[v];
  }
  return out;
}

SignVector SignVector::from_hex(const EnsembleKind& kind, std::string_view hex) {
  SignVector s(kind);
  const std::size_t digits = (kind.dimension() + 3) / 4;
  if (hex.size() != digits) {
    throw ConfigError("sign vector hex must have " + std::to_string(digits) + " digits");
  }
  for (std::size_t k = 0; k < digits; ++k) {
    const char c = hex[k];
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw ConfigError("invalid hex digit in sign vector");
    }
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t i = 4 * k + j;
      const bool bit = (v >> (3 - j)) & 1u;
      if (i >= kind.dimension()) {
        if (bit) throw ConfigError("sign vector hex has nonzero padding bits");
        continue;
      }
      if (bit) s.flip_in_place(i);
    }
  }
  return s;
}

std::size_t hamming_distance(const SignVector& a, const SignVector& b) {
  if (!(a.kind() == b.kind())) throw std::invalid_argument("sign vectors of different ensembles");
  auto wa = a.words();
  auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t k = 0; k < wa.size(); ++k) n += static_cast<std::size_t>(std::popcount(wa[k] ^ wb[k]));
  return n;
}

// ---------------------------------------------------------------------------

ScaledMatrix realize(const SignVector& signs) {
  const EnsembleKind& kind = signs.kind();
  ScaledMatrix m{kind, Eigen::MatrixXd::Zero(kind.rows(), kind.cols())};
  const double inv = 1.0 / std::sqrt(static_cast<double>(kind.rows()));
  const double diag = std::sqrt(2.0) * inv;
  std::size_t i = 0;
  switch (kind.family()) {
    case Family::RealSymmetric:
      for (int p = 0; p < kind.rows(); ++p) {
        for (int q = p; q < kind.rows(); ++q, ++i) {
          const double v = signs.sign(i) * (p == q ? diag : inv);
          m.entries(p, q) = v;
          m.entries(q, p) = v;
        }
      }
      break;
    case Family::ImaginaryAntisymmetric:
      for (int p = 0; p < kind.rows(); ++p) {
        for (int q = p + 1; q < kind.rows(); ++q, ++i) {
          const double v = signs.sign(i) * inv;
          m.entries(p, q) = v;
          m.entries(q, p) = -v;
        }
      }
      break;
    case Family::Rectangular:
      for (int p = 0; p < kind.rows(); ++p) {
        for (int q = 0; q < kind.cols(); ++q, ++i) m.entries(p, q) = signs.sign(i) * inv;
      }
      break;
  }
  return m;
}

ScaledMatrix flip_delta(const SignVector& signs, std::size_t i) {
  const EnsembleKind& kind = signs.kind();
  auto [p, q] = kind.entry(i);
  ScaledMatrix d{kind, Eigen::MatrixXd::Zero(kind.rows(), kind.cols())};
  const double current = signs.sign(i) * kind.magnitude(i);
  const double change = -2.0 * current;
  d.entries(p, q) = change;
  if (kind.family() == Family::RealSymmetric) {
    d.entries(q, p) = change;
  } else if (kind.family() == Family::ImaginaryAntisymmetric) {
    d.entries(q, p) = -change;
  }
  return d;
}

void apply_flip(ScaledMatrix& m, std::size_t i) {
  auto [p, q] = m.kind.entry(i);
  m.entries(p, q) = -m.entries(p, q);
  if (m.kind.family() != Family::Rectangular && p != q) m.entries(q, p) = -m.entries(q, p);
}

}  // namespace bwalk
