#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qf2/quadratic_form.hpp"

namespace qf2 {

enum class GroupMode { Orthogonal, Symplectic, RadicalOnly };
enum class GroupMethod { Auto, TransvectionClosure, GlFilter };
std::string to_string(GroupMode m);
std::string to_string(GroupMethod m);
std::optional<GroupMode> parse_group_mode(const std::string& s);

/// n x n matrix over GF(2^m), n <= 8, m <= 4: byte i*m + p holds bit p of
/// every entry in row i.
struct Packed {
  std::array<std::uint8_t, 32> bytes{};
  auto operator<=>(const Packed&) const = default;
};

struct PackedHash {
  std::size_t operator()(const Packed& p) const;
};

class PackedCodec {
 public:
  PackedCodec(Field f, std::size_t n);
  Field field() const { return field_; }
  std::size_t dim() const { return n_; }
  Packed pack(const Matrix& a) const;
  Matrix unpack(const Packed& p) const;
  Packed multiply(const Packed& a, const Packed& b) const;
  Packed identity() const;
  /// Entry (i,j) as field bits.
  unsigned entry(const Packed& p, std::size_t i, std::size_t j) const;

 private:
  Field field_;
  std::size_t n_, m_;
  // masks_[a][p]: bit p' set when bit p of a*x depends on bit p' of x.
  std::array<std::array<std::uint8_t, 4>, 16> masks_{};
};

class CapExceeded : public FormError {
 public:
  explicit CapExceeded(std::size_t partial);
  std::size_t partial;
};

struct EnumeratedGroup {
  QuadraticForm form;
  GroupMode mode;
  GroupMethod method;
  PackedCodec codec;
  std::vector<Matrix> generators;
  std::vector<Packed> elements;  // sorted

  std::size_t order() const { return elements.size(); }
  Matrix matrix(std::size_t i) const { return codec.unpack(elements[i]); }
  std::optional<std::size_t> find(const Packed& p) const;
  std::optional<std::size_t> find(const Matrix& m) const { return find(codec.pack(m)); }
};

/// Closed-form order: O(V) maps onto O(V/def) x GL(def) with kernel
/// Hom(V/def, def). Requires a finite field.
std::uint64_t predicted_order(const QuadraticForm& f, GroupMode mode);

/// Auto uses transvection closure except for H+H over GF(2) and the
/// radical-only mode.
EnumeratedGroup enumerate_group(const QuadraticForm& f, GroupMode mode, std::size_t cap = 1'000'000,
                                GroupMethod method = GroupMethod::Auto);

/// Elements of order 2, in element order.
std::vector<Matrix> list_involutions(const EnumeratedGroup& g);

struct OrbitPartition {
  std::vector<std::vector<std::size_t>> orbits;  // indices into the input sequence
  std::vector<std::size_t> representatives;     // smallest packed encoding per orbit
};

/// Orbits of elems under conjugation, sorted by representative encoding.
OrbitPartition orbit_partition(const EnumeratedGroup& g, const std::vector<Matrix>& elems);

/// The given classes as sorted index sets, for comparing partitions.
std::vector<std::vector<std::size_t>> canonical_partition(std::vector<std::vector<std::size_t>> classes);

}  // namespace qf2
