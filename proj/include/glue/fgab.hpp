#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace glue {

using Int = std::int64_t;
using Vec = std::vector<Int>;

// Overflow-checked primitives; throw glue::Overflow.
Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int checked_neg(Int a);

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  static Matrix identity(int n);
  static Matrix from_rows(const std::vector<Vec>& rows, int cols = -1);
  static Matrix from_columns(int rows, const std::vector<Vec>& cols);
  static Matrix diagonal(const Vec& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  Int operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Vec column(int c) const;
  Vec row(int r) const;
  Matrix transpose() const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  Matrix select_columns(const std::vector<int>& cs) const;
  Matrix select_rows(const std::vector<int>& rs) const;
  bool is_zero() const;
  Vec apply(const Vec& v) const;

  static Matrix hcat(const Matrix& a, const Matrix& b);
  static Matrix vcat(const Matrix& a, const Matrix& b);
  static Matrix block_diag(const Matrix& a, const Matrix& b);

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  Matrix operator-() const;
  Matrix scaled(Int k) const;
  bool operator==(const Matrix& o) const = default;

  std::vector<Vec> to_rows() const;
  std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vec data_;
};

struct SmithForm {
  Matrix U, U_inv, S, V, V_inv;  // U * A * V = S
  int rank = 0;
  Vec diag() const;  // first min(rows, cols) diagonal entries of S
};

SmithForm snf(const Matrix& a);

// x with a*x = b, if b lies in the integer column span of a.
std::optional<Vec> solve_membership(const Matrix& a, const Vec& b);

// Columns form a basis of {x : a*x = 0} over the integers.
Matrix integer_kernel(const Matrix& a);

// Z^m / column-span(R).  Copies share the immutable presentation.
class FgAbGroup {
 public:
  FgAbGroup();  // trivial group, m = 0
  FgAbGroup(int ambient, const Matrix& relations);
  static FgAbGroup free(int rank);
  static FgAbGroup cyclic(Int d);
  static FgAbGroup from_factors(const Vec& torsion, int free_rank);

  int ambient() const;
  const Matrix& relations() const;
  const Vec& invariant_factors() const;  // entries > 1, each dividing the next
  int free_rank() const;
  bool is_trivial() const;
  bool is_finite() const { return free_rank() == 0; }
  Int order() const;  // 0 when infinite

  bool is_zero(const Vec& v) const;
  bool equal(const Vec& a, const Vec& b) const;
  // Canonical representative in Smith coordinates: torsion parts reduced into [0, d).
  Vec normal_form(const Vec& v) const;
  const SmithForm& smith() const;

  bool same_presentation(const FgAbGroup& o) const;
  bool operator==(const FgAbGroup& o) const { return same_presentation(o); }
  std::string describe() const;  // e.g. "Z^2 + Z/2 + Z/6"

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

struct GroupElement {
  FgAbGroup group;
  Vec coords;
  bool operator==(const GroupElement& o) const;
};

class AbHom {
 public:
  AbHom() = default;
  // Validates dimensions and well-definedness.
  AbHom(FgAbGroup dom, FgAbGroup cod, Matrix m);
  static AbHom unchecked(FgAbGroup dom, FgAbGroup cod, Matrix m);
  static AbHom identity(const FgAbGroup& g);
  static AbHom zero(const FgAbGroup& dom, const FgAbGroup& cod);

  const FgAbGroup& dom() const { return dom_; }
  const FgAbGroup& cod() const { return cod_; }
  const Matrix& matrix() const { return m_; }

  bool is_well_defined() const;
  Vec apply(const Vec& x) const { return m_.apply(x); }
  bool equals(const AbHom& o) const;  // same endpoints, agree modulo cod relations
  AbHom scaled(Int k) const;

 private:
  FgAbGroup dom_, cod_;
  Matrix m_;
};

AbHom compose(const AbHom& g, const AbHom& f);  // g after f
AbHom add(const AbHom& f, const AbHom& g);
AbHom subtract(const AbHom& f, const AbHom& g);

struct SubgroupResult {
  FgAbGroup group;
  AbHom inclusion;
};

struct ProductResult {
  FgAbGroup group;
  std::vector<AbHom> projections;
  std::vector<AbHom> injections;
};

struct Simplified {
  FgAbGroup group;  // diagonal presentation without unit factors
  AbHom to;         // original -> simplified
  AbHom from;       // simplified -> original
};

Simplified simplify(const FgAbGroup& g);
// Subgroup of g generated by the columns of gens (ambient coordinates).
SubgroupResult subgroup(const FgAbGroup& g, const Matrix& gens);
SubgroupResult kernel(const AbHom& h);
SubgroupResult image(const AbHom& h);
SubgroupResult equalizer(const AbHom& f, const AbHom& g);
ProductResult product(const std::vector<FgAbGroup>& groups);
// Hom into a product assembled from its components.
AbHom pairing_into_product(const ProductResult& p, const FgAbGroup& dom, const std::vector<AbHom>& legs);

bool is_injective(const AbHom& h);
bool is_surjective(const AbHom& h);
bool is_isomorphism(const AbHom& h);
std::optional<AbHom> inverse(const AbHom& h);
// Unique u with mono o u = t, when t factors through the injective hom mono.
std::optional<AbHom> factor_through(const AbHom& mono, const AbHom& t);
// Preimage of an element along h, if one exists.
std::optional<Vec> preimage(const AbHom& h, const Vec& y);

bool are_isomorphic(const FgAbGroup& a, const FgAbGroup& b);
// Witness homs a -> b and b -> a composing to identities, if isomorphic.
std::optional<std::pair<AbHom, AbHom>> isomorphism_witness(const FgAbGroup& a, const FgAbGroup& b);

}  // namespace glue
