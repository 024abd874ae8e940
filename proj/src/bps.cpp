#include "qrh/bps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "qrh/errors.hpp"

namespace qrh {

namespace {

std::string charge_str(const Charge& g) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
  os << ')';
  return os.str();
}

bool is_zero(const Charge& g) {
  return std::all_of(g.begin(), g.end(), [](long long v) { return v == 0; });
}

// Row-reduces the matrix whose columns are `cols` against `rhs`. Returns the solution, or
// nothing when the columns are singular. Exact rational arithmetic.
std::optional<std::vector<Rational>> solve(const std::vector<Charge>& cols, const Charge& rhs) {
  const std::size_t n = rhs.size();
  if (cols.size() != n) return std::nullopt;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = cols[j][i];
    m[i][n] = rhs[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == Rational(0)) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == Rational(0)) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

Rational determinant(const std::vector<Charge>& cols) {
  const std::size_t n = cols.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = cols[j][i];
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == Rational(0)) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::size_t rank_of(const std::vector<Charge>& vecs) {
  if (vecs.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& v : vecs) m.emplace_back(v.begin(), v.end());
  const std::size_t cols = vecs[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == Rational(0)) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

Charge primitive(const Charge& g) {
  long long d = 0;
  for (long long v : g) d = std::gcd(d, v);
  Charge p = g;
  if (d > 1)
    for (auto& v : p) v /= d;
  return p;
}

void check_charge(const RefinedBPSStructure& b, const Charge& g) {
  if (static_cast<int>(g.size()) != b.rank)
    throw Error(Errc::rank_mismatch, "lattice vector " + charge_str(g) + " has wrong rank");
}

std::string verify_splitting(const RefinedBPSStructure& b, const EMSplitting& s) {
  const std::size_t n = b.rank;
  if (s.electric_basis.size() + s.magnetic_basis.size() != n)
    return "electric and magnetic bases must together have rank-many vectors";
  if (s.theta_space_dim != static_cast<int>(s.electric_basis.size()))
    return "theta_space_dim must equal the number of electric basis vectors";
  for (const auto* basis : {&s.electric_basis, &s.magnetic_basis})
    for (const auto& v : *basis)
      if (v.size() != n) return "basis vector " + charge_str(v) + " has wrong rank";
  for (const auto* basis : {&s.electric_basis, &s.magnetic_basis})
    for (const auto& u : *basis)
      for (const auto& v : *basis)
        if (b.pairing(u, v) != 0)
          return "form does not vanish on " + charge_str(u) + " x " + charge_str(v);
  std::vector<Charge> all = s.electric_basis;
  all.insert(all.end(), s.magnetic_basis.begin(), s.magnetic_basis.end());
  const Rational det = determinant(all);
  if (det != Rational(1) && det != Rational(-1)) return "bases are not a basis of the lattice (determinant is not +-1)";
  for (const auto& g : b.active_classes()) {
    const auto c = em_coordinates(s, g);
    for (std::size_t j = s.electric_basis.size(); j < n; ++j)
      if (c[j] != 0) return "active class " + charge_str(g) + " is not electric";
  }
  return {};
}

}  // namespace

Charge operator+(const Charge& a, const Charge& b) {
  if (a.size() != b.size()) throw Error(Errc::rank_mismatch, "adding lattice vectors of different rank");
  Charge r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Charge operator-(const Charge& a) { return -1 * a; }

Charge operator*(long long k, const Charge& a) {
  Charge r(a);
  for (auto& v : r) v *= k;
  return r;
}

long long RefinedBPSStructure::pairing(const Charge& a, const Charge& b) const {
  if (static_cast<int>(a.size()) != rank || static_cast<int>(b.size()) != rank)
    throw Error(Errc::rank_mismatch, "pairing of vectors with wrong rank");
  long long s = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) s += a[i] * skew_form[i][j] * b[j];
  return s;
}

cplx RefinedBPSStructure::Z(const Charge& g) const {
  check_charge(*this, g);
  cplx s = 0;
  for (int i = 0; i < rank; ++i) s += double(g[i]) * central_charge[i];
  return s;
}

const RefinedPoly* RefinedBPSStructure::omega_at(const Charge& g) const {
  const auto it = omega.find(g);
  return it == omega.end() || it->second.empty() ? nullptr : &it->second;
}

std::vector<Charge> RefinedBPSStructure::active_classes() const {
  std::vector<Charge> out;
  for (const auto& [g, p] : omega)
    if (!p.empty()) out.push_back(g);
  return out;
}

void RefinedBPSStructure::validate() const {
  if (rank <= 0) throw Error(Errc::invalid_argument, "rank must be positive");
  if (static_cast<int>(skew_form.size()) != rank)
    throw Error(Errc::invalid_argument, "skew_form must be rank x rank");
  for (const auto& row : skew_form)
    if (static_cast<int>(row.size()) != rank) throw Error(Errc::invalid_argument, "skew_form must be rank x rank");
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (skew_form[i][j] != -skew_form[j][i]) throw Error(Errc::invalid_argument, "skew_form is not antisymmetric");
  if (static_cast<int>(central_charge.size()) != rank)
    throw Error(Errc::invalid_argument, "central charge needs one value per basis vector");
  for (const auto& [g, p] : omega) {
    check_charge(*this, g);
    for (const auto& [n, c] : p)
      if (c == Rational(0)) throw Error(Errc::invalid_argument, "zero coefficient stored in Omega" + charge_str(g));
    if (p.empty()) continue;
    if (is_zero(g)) throw Error(Errc::invalid_argument, "Omega(0) must vanish");
    const RefinedPoly* m = omega_at(-g);
    if (!m || *m != p) throw Error(Errc::invalid_argument, "Omega(-g) != Omega(g) for g = " + charge_str(g));
  }
  if (splitting) {
    const std::string why = verify_splitting(*this, *splitting);
    if (!why.empty()) throw Error(Errc::invalid_splitting, why);
  }
}

QuadraticRefinement::QuadraticRefinement(IntMatrix skew, std::vector<int> basis_bits)
    : skew_(std::move(skew)), bits_(std::move(basis_bits)) {}

int QuadraticRefinement::operator()(const Charge& g) const {
  if (g.size() != bits_.size()) throw Error(Errc::rank_mismatch, "refinement evaluated on wrong rank");
  long long parity = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    parity += (g[i] & 1) * bits_[i];
    for (std::size_t j = i + 1; j < g.size(); ++j) parity += (g[i] & 1) * (g[j] & 1) * (skew_[i][j] & 1);
  }
  return parity % 2 ? -1 : 1;
}

RefinedBPSStructure doubled_a1(cplx z) {
  if (z == cplx(0)) throw Error(Errc::invalid_argument, "doubled_a1 needs z != 0");
  RefinedBPSStructure b;
  b.rank = 2;
  b.skew_form = {{0, -1}, {1, 0}};  // basis (α, α∨), ⟨α∨,α⟩ = 1
  b.central_charge = {z, 0};
  b.omega[{1, 0}] = {{0, Rational(1)}};
  b.omega[{-1, 0}] = {{0, Rational(1)}};
  return b;
}

Classification classify(const RefinedBPSStructure& b) {
  Classification c;
  c.finite = true;
  const auto act = b.active_classes();
  c.uncoupled = true;
  for (const auto& g1 : act)
    for (const auto& g2 : act)
      if (b.pairing(g1, g2) != 0) c.uncoupled = false;
  c.palindromic = c.integral = true;
  for (const auto& [g, p] : b.omega)
    for (const auto& [n, coef] : p) {
      const auto it = p.find(-n);
      if (it == p.end() || it->second != coef) c.palindromic = false;
      if (coef.denominator() != 1) c.integral = false;
    }
  return c;
}

std::vector<Ray> active_rays(const RefinedBPSStructure& b) {
  std::vector<Ray> rays;
  for (const auto& g : b.active_classes()) {
    const cplx z = b.Z(g);
    double scale = 0;
    for (int i = 0; i < b.rank; ++i) scale += std::abs(double(g[i])) * std::abs(b.central_charge[i]);
    if (std::abs(z) <= 1e-12 * scale || z == cplx(0))
      throw Error(Errc::degenerate_ray, "active class " + charge_str(g) + " has Z = 0");
    const cplx ph = z / std::abs(z);
    auto it = std::find_if(rays.begin(), rays.end(), [&](const Ray& r) { return std::abs(r.phase - ph) <= 1e-12; });
    if (it == rays.end())
      rays.push_back({ph, {g}});
    else
      it->classes.push_back(g);
  }
  auto angle = [](cplx p) {
    const double a = std::arg(p);
    return a <= -std::numbers::pi ? std::numbers::pi : a;
  };
  std::sort(rays.begin(), rays.end(), [&](const Ray& x, const Ray& y) { return angle(x.phase) < angle(y.phase); });
  for (auto& r : rays) std::sort(r.classes.begin(), r.classes.end());
  return rays;
}

QuadraticRefinement canonical_refinement(const RefinedBPSStructure& b) {
  const int n = b.rank;
  struct Row {
    std::vector<int> coef;
    int rhs;
    std::set<Charge> origin;
  };
  std::vector<Row> rows;
  for (const auto& g : b.active_classes()) {
    int fixed = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) fixed += (g[i] & 1) * (g[j] & 1) * (b.skew_form[i][j] & 1);
    for (const auto& [m, c] : *b.omega_at(g)) {
      Row r;
      r.coef.resize(n);
      for (int i = 0; i < n; ++i) r.coef[i] = static_cast<int>(g[i] & 1);
      r.rhs = ((m + 1) % 2 + 2 + fixed) % 2;
      r.origin = {g};
      rows.push_back(std::move(r));
    }
  }
  // Gaussian elimination over GF(2); free variables are set to 0.
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int c = 0; c < n && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p].coef[c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i].coef[c] == 0) continue;
      for (int k = 0; k < n; ++k) rows[i].coef[k] ^= rows[rank].coef[k];
      rows[i].rhs ^= rows[rank].rhs;
      rows[i].origin.insert(rows[rank].origin.begin(), rows[rank].origin.end());
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t i = rank; i < rows.size(); ++i)
    if (rows[i].rhs) {
      std::string msg = "no quadratic refinement matches the sign constraints of classes";
      for (const auto& g : rows[i].origin) msg += " " + charge_str(g);
      throw Error(Errc::inconsistent_refinement, msg);
    }
  std::vector<int> bits(n, 0);
  for (std::size_t i = 0; i < rank; ++i) bits[pivot_col[i]] = rows[i].rhs;
  return QuadraticRefinement(b.skew_form, bits);
}

std::vector<long long> em_coordinates(const EMSplitting& s, const Charge& g) {
  std::vector<Charge> all = s.electric_basis;
  all.insert(all.end(), s.magnetic_basis.begin(), s.magnetic_basis.end());
  const auto x = solve(all, g);
  if (!x) throw Error(Errc::invalid_splitting, "splitting bases are singular");
  std::vector<long long> out;
  for (const auto& v : *x) {
    if (v.denominator() != 1) throw Error(Errc::not_decomposable, charge_str(g) + " is not integral in the splitting");
    out.push_back(v.numerator());
  }
  return out;
}

EMSplitting em_splitting(const RefinedBPSStructure& b, const std::optional<EMSplitting>& proposed) {
  if (!classify(b).uncoupled) throw Error(Errc::unsupported_structure, "splitting requires an uncoupled structure");
  if (proposed) {
    const std::string why = verify_splitting(b, *proposed);
    if (!why.empty()) throw Error(Errc::invalid_splitting, why);
    return *proposed;
  }
  if (b.splitting) return em_splitting(b, b.splitting);

  // Electric: independent primitive active classes, one per ± pair.
  std::vector<Charge> electric;
  for (const auto& g : b.active_classes()) {
    Charge p = primitive(g);
    if (p < -p) p = -p;
    auto trial = electric;
    trial.push_back(p);
    if (rank_of(trial) == trial.size()) electric = std::move(trial);
  }
  // Magnetic: standard basis vectors completing a unimodular isotropic basis.
  const int n = b.rank, k = static_cast<int>(electric.size());
  std::vector<int> pick(n, 0);
  std::fill(pick.begin() + k, pick.end(), 1);
  do {
    EMSplitting s;
    s.electric_basis = electric;
    for (int i = 0; i < n; ++i)
      if (pick[i]) {
        Charge e(n, 0);
        e[i] = 1;
        s.magnetic_basis.push_back(e);
      }
    s.theta_space_dim = k;
    if (verify_splitting(b, s).empty()) return s;
  } while (std::next_permutation(pick.begin(), pick.end()));
  throw Error(Errc::unsupported_structure, "no splitting found; supply one explicitly");
}

KappaSet kappa_set(const RefinedBPSStructure& b, const Charge& beta, const Charge& gamma) {
  const long long p = b.pairing(beta, gamma);
  KappaSet k;
  k.epsilon = (p > 0) - (p < 0);
  for (long long j = 1; j <= std::abs(p); ++j) k.halves.push_back(k.epsilon * (2.0 * j - 1) / 2);
  return k;
}

RefinedBPSStructure direct_sum(const RefinedBPSStructure& a, const RefinedBPSStructure& b) {
  RefinedBPSStructure s;
  s.rank = a.rank + b.rank;
  s.skew_form.assign(s.rank, std::vector<long long>(s.rank, 0));
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) s.skew_form[i][j] = a.skew_form[i][j];
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) s.skew_form[a.rank + i][a.rank + j] = b.skew_form[i][j];
  s.central_charge = a.central_charge;
  s.central_charge.insert(s.central_charge.end(), b.central_charge.begin(), b.central_charge.end());
  for (const auto& [g, p] : a.omega) {
    Charge h = g;
    h.resize(s.rank, 0);
    s.omega[h] = p;
  }
  for (const auto& [g, p] : b.omega) {
    Charge h(a.rank, 0);
    h.insert(h.end(), g.begin(), g.end());
    s.omega[h] = p;
  }
  return s;
}

}  // namespace qrh
