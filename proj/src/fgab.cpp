#include "glue/fgab.hpp"

#include <algorithm>
#include <sstream>

#include "glue/errors.hpp"

namespace glue {

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("integer overflow in addition");
  return r;
}

Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow("integer overflow in subtraction");
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("integer overflow in multiplication");
  return r;
}

Int checked_neg(Int a) { return checked_sub(0, a); }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw InvalidInput("negative matrix dimension");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, int cols) {
  int c = cols;
  if (c < 0) c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  Matrix m(static_cast<int>(rows.size()), c);
  for (int r = 0; r < m.rows_; ++r) {
    if (static_cast<int>(rows[r].size()) != c) throw InvalidInput("ragged matrix rows");
    for (int j = 0; j < c; ++j) m(r, j) = rows[r][j];
  }
  return m;
}

Matrix Matrix::from_columns(int rows, const std::vector<Vec>& cols) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols_; ++j) {
    if (static_cast<int>(cols[j].size()) != rows) throw InvalidInput("column length mismatch");
    for (int r = 0; r < rows; ++r) m(r, j) = cols[j][r];
  }
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  int n = static_cast<int>(d.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

Vec Matrix::column(int c) const {
  Vec v(rows_);
  for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vec Matrix::row(int r) const {
  return Vec(data_.begin() + static_cast<long>(r) * cols_, data_.begin() + static_cast<long>(r + 1) * cols_);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  Matrix b(nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

Matrix Matrix::select_columns(const std::vector<int>& cs) const {
  Matrix b(rows_, static_cast<int>(cs.size()));
  for (int r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cs.size(); ++c) b(r, static_cast<int>(c)) = (*this)(r, cs[c]);
  return b;
}

Matrix Matrix::select_rows(const std::vector<int>& rs) const {
  Matrix b(static_cast<int>(rs.size()), cols_);
  for (size_t r = 0; r < rs.size(); ++r)
    for (int c = 0; c < cols_; ++c) b(static_cast<int>(r), c) = (*this)(rs[r], c);
  return b;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Int x) { return x == 0; });
}

Vec Matrix::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw InvalidInput("vector length mismatch");
  Vec out(rows_, 0);
  for (int r = 0; r < rows_; ++r) {
    Int acc = 0;
    for (int c = 0; c < cols_; ++c) {
      Int a = (*this)(r, c);
      if (a != 0 && v[c] != 0) acc = checked_add(acc, checked_mul(a, v[c]));
    }
    out[r] = acc;
  }
  return out;
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw InvalidInput("hcat row mismatch");
  Matrix m(a.rows_, a.cols_ + b.cols_);
  for (int r = 0; r < a.rows_; ++r) {
    for (int c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
    for (int c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) throw InvalidInput("vcat column mismatch");
  Matrix m(a.rows_ + b.rows_, a.cols_);
  for (int c = 0; c < a.cols_; ++c) {
    for (int r = 0; r < a.rows_; ++r) m(r, c) = a(r, c);
    for (int r = 0; r < b.rows_; ++r) m(a.rows_ + r, c) = b(r, c);
  }
  return m;
}

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
  for (int r = 0; r < b.rows_; ++r)
    for (int c = 0; c < b.cols_; ++c) m(a.rows_ + r, a.cols_ + c) = b(r, c);
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product dimension mismatch");
  Matrix m(a.rows_, b.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int k = 0; k < a.cols_; ++k) {
      Int x = a(r, k);
      if (x == 0) continue;
      for (int c = 0; c < b.cols_; ++c) {
        Int y = b(k, c);
        if (y != 0) m(r, c) = checked_add(m(r, c), checked_mul(x, y));
      }
    }
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("matrix sum dimension mismatch");
  Matrix m(a.rows_, a.cols_);
  for (size_t i = 0; i < a.data_.size(); ++i) m.data_[i] = checked_add(a.data_[i], b.data_[i]);
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("matrix difference dimension mismatch");
  Matrix m(a.rows_, a.cols_);
  for (size_t i = 0; i < a.data_.size(); ++i) m.data_[i] = checked_sub(a.data_[i], b.data_[i]);
  return m;
}

Matrix Matrix::operator-() const { return scaled(-1); }

Matrix Matrix::scaled(Int k) const {
  Matrix m(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) m.data_[i] = checked_mul(data_[i], k);
  return m;
}

std::vector<Vec> Matrix::to_rows() const {
  std::vector<Vec> out;
  for (int r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (int c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------- Smith form

namespace {

struct SmithWork {
  SmithForm& f;
  int m, n;

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < n; ++c) std::swap(f.S(i, c), f.S(j, c));
    for (int c = 0; c < m; ++c) std::swap(f.U(i, c), f.U(j, c));
    for (int r = 0; r < m; ++r) std::swap(f.U_inv(r, i), f.U_inv(r, j));
  }
  // row dst += q * row src
  void row_add(int dst, int src, Int q) {
    if (q == 0) return;
    for (int c = 0; c < n; ++c) f.S(dst, c) = checked_add(f.S(dst, c), checked_mul(q, f.S(src, c)));
    for (int c = 0; c < m; ++c) f.U(dst, c) = checked_add(f.U(dst, c), checked_mul(q, f.U(src, c)));
    for (int r = 0; r < m; ++r) f.U_inv(r, src) = checked_sub(f.U_inv(r, src), checked_mul(q, f.U_inv(r, dst)));
  }
  void row_neg(int i) {
    for (int c = 0; c < n; ++c) f.S(i, c) = checked_neg(f.S(i, c));
    for (int c = 0; c < m; ++c) f.U(i, c) = checked_neg(f.U(i, c));
    for (int r = 0; r < m; ++r) f.U_inv(r, i) = checked_neg(f.U_inv(r, i));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m; ++r) std::swap(f.S(r, i), f.S(r, j));
    for (int r = 0; r < n; ++r) std::swap(f.V(r, i), f.V(r, j));
    for (int c = 0; c < n; ++c) std::swap(f.V_inv(i, c), f.V_inv(j, c));
  }
  // col dst += q * col src
  void col_add(int dst, int src, Int q) {
    if (q == 0) return;
    for (int r = 0; r < m; ++r) f.S(r, dst) = checked_add(f.S(r, dst), checked_mul(q, f.S(r, src)));
    for (int r = 0; r < n; ++r) f.V(r, dst) = checked_add(f.V(r, dst), checked_mul(q, f.V(r, src)));
    for (int c = 0; c < n; ++c) f.V_inv(src, c) = checked_sub(f.V_inv(src, c), checked_mul(q, f.V_inv(dst, c)));
  }
};

Int abs_val(Int x) { return x < 0 ? checked_neg(x) : x; }

// q with |a - q b| <= |b| / 2; small remainders keep the transforms small.
Int nearest_quotient(Int a, Int b) {
  Int q = a / b, r = a % b;
  if (2 * abs_val(r) > abs_val(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
  return q;
}

}  // namespace

Vec SmithForm::diag() const {
  Vec d;
  for (int i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
  return d;
}

SmithForm snf(const Matrix& a) {
  const int m = a.rows(), n = a.cols();
  SmithForm f{Matrix::identity(m), Matrix::identity(m), a, Matrix::identity(n), Matrix::identity(n), 0};
  SmithWork w{f, m, n};
  Matrix& S = f.S;
  int t = 0;
  for (; t < std::min(m, n); ++t) {
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (S(i, j) != 0 && (pi < 0 || abs_val(S(i, j)) < best)) {
          best = abs_val(S(i, j));
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    w.row_swap(t, pi);
    w.col_swap(t, pj);
    while (true) {
      bool clean = true;
      for (int i = t + 1; i < m; ++i)
        if (S(i, t) != 0) {
          w.row_add(i, t, -nearest_quotient(S(i, t), S(t, t)));
          if (S(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < n; ++j)
        if (S(t, j) != 0) {
          w.col_add(j, t, -nearest_quotient(S(t, j), S(t, t)));
          if (S(t, j) != 0) clean = false;
        }
      if (!clean) {
        // A remainder smaller than the pivot survived; promote it.
        int bi = -1, bj = -1;
        Int b = abs_val(S(t, t));
        for (int i = t + 1; i < m; ++i)
          if (S(i, t) != 0 && abs_val(S(i, t)) < b) { b = abs_val(S(i, t)); bi = i; bj = -1; }
        for (int j = t + 1; j < n; ++j)
          if (S(t, j) != 0 && abs_val(S(t, j)) < b) { b = abs_val(S(t, j)); bj = j; bi = -1; }
        if (bi >= 0) w.row_swap(t, bi);
        if (bj >= 0) w.col_swap(t, bj);
        continue;
      }
      int di = -1;
      for (int i = t + 1; i < m && di < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) { di = i; break; }
      if (di < 0) break;
      w.row_add(t, di, 1);
    }
    if (S(t, t) < 0) w.row_neg(t);
  }
  f.rank = t;
  return f;
}

std::optional<Vec> solve_membership(const Matrix& a, const Vec& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw InvalidInput("solve_membership: dimension mismatch");
  SmithForm f = snf(a);
  Vec y = f.U.apply(b);
  Vec z(a.cols(), 0);
  for (int i = 0; i < a.rows(); ++i) {
    if (i < f.rank) {
      Int d = f.S(i, i);
      if (y[i] % d != 0) return std::nullopt;
      z[i] = y[i] / d;
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  Vec x = f.V.apply(z);
  if (a.apply(x) != b) throw Falsification("solve_membership: witness failed substitution");
  return x;
}

Matrix integer_kernel(const Matrix& a) {
  SmithForm f = snf(a);
  std::vector<int> cols;
  for (int j = f.rank; j < a.cols(); ++j) cols.push_back(j);
  return f.V.select_columns(cols);
}

// ---------------------------------------------------------------- FgAbGroup

struct FgAbGroup::Data {
  int m = 0;
  Matrix R;
  SmithForm sf;
  Vec factors;
  int free_rank = 0;
};

FgAbGroup::FgAbGroup() : FgAbGroup(0, Matrix(0, 0)) {}

FgAbGroup::FgAbGroup(int ambient, const Matrix& relations) {
  if (ambient < 0) throw InvalidInput("negative ambient rank");
  if (relations.rows() != ambient) throw InvalidInput("relation matrix must have one row per generator");
  auto d = std::make_shared<Data>();
  d->m = ambient;
  d->R = relations;
  d->sf = snf(relations);
  for (int i = 0; i < d->sf.rank; ++i)
    if (d->sf.S(i, i) > 1) d->factors.push_back(d->sf.S(i, i));
  d->free_rank = ambient - d->sf.rank;
  d_ = std::move(d);
}

FgAbGroup FgAbGroup::free(int rank) { return FgAbGroup(rank, Matrix(rank, 0)); }

FgAbGroup FgAbGroup::cyclic(Int d) {
  Matrix r(1, 1);
  r(0, 0) = d;
  return FgAbGroup(1, r);
}

FgAbGroup FgAbGroup::from_factors(const Vec& torsion, int free_rank) {
  int m = static_cast<int>(torsion.size()) + free_rank;
  Matrix r(m, static_cast<int>(torsion.size()));
  for (size_t i = 0; i < torsion.size(); ++i) r(static_cast<int>(i), static_cast<int>(i)) = torsion[i];
  return FgAbGroup(m, r);
}

int FgAbGroup::ambient() const { return d_->m; }
const Matrix& FgAbGroup::relations() const { return d_->R; }
const Vec& FgAbGroup::invariant_factors() const { return d_->factors; }
int FgAbGroup::free_rank() const { return d_->free_rank; }
bool FgAbGroup::is_trivial() const { return d_->factors.empty() && d_->free_rank == 0; }
const SmithForm& FgAbGroup::smith() const { return d_->sf; }

Int FgAbGroup::order() const {
  if (d_->free_rank > 0) return 0;
  Int o = 1;
  for (Int f : d_->factors) o = checked_mul(o, f);
  return o;
}

bool FgAbGroup::is_zero(const Vec& v) const {
  if (static_cast<int>(v.size()) != d_->m) throw InvalidInput("element has wrong ambient length");
  Vec y = d_->sf.U.apply(v);
  for (int i = 0; i < d_->m; ++i) {
    if (i < d_->sf.rank) {
      if (y[i] % d_->sf.S(i, i) != 0) return false;
    } else if (y[i] != 0) {
      return false;
    }
  }
  return true;
}

bool FgAbGroup::equal(const Vec& a, const Vec& b) const {
  Vec d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = checked_sub(a[i], b[i]);
  return is_zero(d);
}

Vec FgAbGroup::normal_form(const Vec& v) const {
  Vec y = d_->sf.U.apply(v);
  for (int i = 0; i < d_->sf.rank; ++i) {
    Int d = d_->sf.S(i, i);
    y[i] = ((y[i] % d) + d) % d;
  }
  return y;
}

bool FgAbGroup::same_presentation(const FgAbGroup& o) const {
  return d_ == o.d_ || (d_->m == o.d_->m && d_->R == o.d_->R);
}

std::string FgAbGroup::describe() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (Int f : d_->factors) {
    os << (first ? "" : " + ") << "Z/" << f;
    first = false;
  }
  if (d_->free_rank > 0) {
    os << (first ? "" : " + ") << "Z";
    if (d_->free_rank > 1) os << "^" << d_->free_rank;
  }
  return os.str();
}

bool GroupElement::operator==(const GroupElement& o) const {
  return group == o.group && group.equal(coords, o.coords);
}

// ---------------------------------------------------------------- AbHom

AbHom::AbHom(FgAbGroup dom, FgAbGroup cod, Matrix m) : dom_(std::move(dom)), cod_(std::move(cod)), m_(std::move(m)) {
  if (m_.rows() != cod_.ambient() || m_.cols() != dom_.ambient())
    throw InvalidInput("hom matrix has shape " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                       ", expected " + std::to_string(cod_.ambient()) + "x" + std::to_string(dom_.ambient()));
  if (!is_well_defined()) throw InvalidInput("hom does not respect relations: " + m_.str());
}

AbHom AbHom::unchecked(FgAbGroup dom, FgAbGroup cod, Matrix m) {
  AbHom h;
  h.dom_ = std::move(dom);
  h.cod_ = std::move(cod);
  h.m_ = std::move(m);
  return h;
}

AbHom AbHom::identity(const FgAbGroup& g) { return unchecked(g, g, Matrix::identity(g.ambient())); }

AbHom AbHom::zero(const FgAbGroup& dom, const FgAbGroup& cod) {
  return unchecked(dom, cod, Matrix(cod.ambient(), dom.ambient()));
}

bool AbHom::is_well_defined() const {
  if (m_.rows() != cod_.ambient() || m_.cols() != dom_.ambient()) return false;
  Matrix img = m_ * dom_.relations();
  for (int c = 0; c < img.cols(); ++c)
    if (!cod_.is_zero(img.column(c))) return false;
  return true;
}

bool AbHom::equals(const AbHom& o) const {
  if (!(dom_ == o.dom_) || !(cod_ == o.cod_)) return false;
  Matrix d = m_ - o.m_;
  for (int c = 0; c < d.cols(); ++c)
    if (!cod_.is_zero(d.column(c))) return false;
  return true;
}

AbHom AbHom::scaled(Int k) const { return unchecked(dom_, cod_, m_.scaled(k)); }

AbHom compose(const AbHom& g, const AbHom& f) {
  if (!(f.cod() == g.dom())) throw InvalidInput("compose: codomain/domain mismatch");
  return AbHom::unchecked(f.dom(), g.cod(), g.matrix() * f.matrix());
}

AbHom add(const AbHom& f, const AbHom& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw InvalidInput("add: endpoint mismatch");
  return AbHom::unchecked(f.dom(), f.cod(), f.matrix() + g.matrix());
}

AbHom subtract(const AbHom& f, const AbHom& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw InvalidInput("subtract: endpoint mismatch");
  return AbHom::unchecked(f.dom(), f.cod(), f.matrix() - g.matrix());
}

// ---------------------------------------------------------------- constructions

Simplified simplify(const FgAbGroup& g) {
  const SmithForm& sf = g.smith();
  std::vector<int> keep;
  Vec torsion;
  for (int i = 0; i < sf.rank; ++i)
    if (sf.S(i, i) > 1) {
      keep.push_back(i);
      torsion.push_back(sf.S(i, i));
    }
  for (int i = sf.rank; i < g.ambient(); ++i) keep.push_back(i);
  FgAbGroup s = FgAbGroup::from_factors(torsion, g.ambient() - sf.rank);
  AbHom to = AbHom::unchecked(g, s, sf.U.select_rows(keep));
  AbHom from = AbHom::unchecked(s, g, sf.U_inv.select_columns(keep));
  return {s, to, from};
}

SubgroupResult subgroup(const FgAbGroup& g, const Matrix& gens) {
  if (gens.rows() != g.ambient()) throw InvalidInput("subgroup generators have wrong ambient length");
  const int t = gens.cols();
  Matrix n = integer_kernel(Matrix::hcat(gens, -g.relations()));
  FgAbGroup h(t, n.block(0, 0, t, n.cols()));
  AbHom incl = AbHom::unchecked(h, g, gens);
  Simplified s = simplify(h);
  return {s.group, compose(incl, s.from)};
}

SubgroupResult kernel(const AbHom& h) {
  const int m = h.dom().ambient();
  Matrix n = integer_kernel(Matrix::hcat(h.matrix(), -h.cod().relations()));
  return subgroup(h.dom(), n.block(0, 0, m, n.cols()));
}

SubgroupResult image(const AbHom& h) { return subgroup(h.cod(), h.matrix()); }

SubgroupResult equalizer(const AbHom& f, const AbHom& g) { return kernel(subtract(f, g)); }

ProductResult product(const std::vector<FgAbGroup>& groups) {
  int m = 0;
  Matrix rel(0, 0);
  for (const auto& g : groups) {
    m += g.ambient();
    rel = Matrix::block_diag(rel, g.relations());
  }
  FgAbGroup p(m, rel);
  ProductResult out{p, {}, {}};
  int off = 0;
  for (const auto& g : groups) {
    Matrix pr(g.ambient(), m), in(m, g.ambient());
    for (int i = 0; i < g.ambient(); ++i) {
      pr(i, off + i) = 1;
      in(off + i, i) = 1;
    }
    out.projections.push_back(AbHom::unchecked(p, g, pr));
    out.injections.push_back(AbHom::unchecked(g, p, in));
    off += g.ambient();
  }
  return out;
}

AbHom pairing_into_product(const ProductResult& p, const FgAbGroup& dom, const std::vector<AbHom>& legs) {
  if (legs.size() != p.projections.size()) throw InvalidInput("pairing: leg count mismatch");
  Matrix m(0, dom.ambient());
  for (size_t i = 0; i < legs.size(); ++i) {
    if (!(legs[i].dom() == dom) || !(legs[i].cod() == p.projections[i].cod()))
      throw InvalidInput("pairing: leg endpoint mismatch");
    m = Matrix::vcat(m, legs[i].matrix());
  }
  return AbHom::unchecked(dom, p.group, m);
}

std::optional<Vec> preimage(const AbHom& h, const Vec& y) {
  auto x = solve_membership(Matrix::hcat(h.matrix(), h.cod().relations()), y);
  if (!x) return std::nullopt;
  x->resize(h.dom().ambient());
  return x;
}

bool is_injective(const AbHom& h) { return kernel(h).group.is_trivial(); }

bool is_surjective(const AbHom& h) {
  const int p = h.cod().ambient();
  for (int c = 0; c < p; ++c) {
    Vec e(p, 0);
    e[c] = 1;
    if (!preimage(h, e)) return false;
  }
  return true;
}

bool is_isomorphism(const AbHom& h) { return is_injective(h) && is_surjective(h); }

std::optional<AbHom> inverse(const AbHom& h) {
  if (!is_injective(h)) return std::nullopt;
  const int p = h.cod().ambient();
  std::vector<Vec> cols;
  for (int c = 0; c < p; ++c) {
    Vec e(p, 0);
    e[c] = 1;
    auto x = preimage(h, e);
    if (!x) return std::nullopt;
    cols.push_back(*x);
  }
  return AbHom(h.cod(), h.dom(), Matrix::from_columns(h.dom().ambient(), cols));
}

std::optional<AbHom> factor_through(const AbHom& mono, const AbHom& t) {
  if (!(mono.cod() == t.cod())) throw InvalidInput("factor_through: codomain mismatch");
  std::vector<Vec> cols;
  for (int c = 0; c < t.dom().ambient(); ++c) {
    auto x = preimage(mono, t.matrix().column(c));
    if (!x) return std::nullopt;
    cols.push_back(*x);
  }
  AbHom u = AbHom::unchecked(t.dom(), mono.dom(), Matrix::from_columns(mono.dom().ambient(), cols));
  if (!u.is_well_defined()) return std::nullopt;
  return u;
}

bool are_isomorphic(const FgAbGroup& a, const FgAbGroup& b) {
  return a.invariant_factors() == b.invariant_factors() && a.free_rank() == b.free_rank();
}

std::optional<std::pair<AbHom, AbHom>> isomorphism_witness(const FgAbGroup& a, const FgAbGroup& b) {
  if (!are_isomorphic(a, b)) return std::nullopt;
  Simplified sa = simplify(a), sb = simplify(b);
  // Equal invariants give identical diagonal presentations; bridge them by identity matrices.
  AbHom bridge = AbHom::unchecked(sa.group, sb.group, Matrix::identity(sa.group.ambient()));
  AbHom back = AbHom::unchecked(sb.group, sa.group, Matrix::identity(sb.group.ambient()));
  return std::make_pair(compose(sb.from, compose(bridge, sa.to)), compose(sa.from, compose(back, sb.to)));
}

}  // namespace glue
