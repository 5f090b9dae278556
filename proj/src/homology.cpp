#include "sofic/homology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sofic {

void Chain::add(const Simplex& s, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms.try_emplace(s, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms.erase(it);
  }
}

void Chain::add_oriented(std::vector<int> vertices, Rational coeff) {
  // Insertion sort, tracking parity.
  int swaps = 0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    for (std::size_t j = i; j > 0 && vertices[j - 1] > vertices[j]; --j) {
      std::swap(vertices[j - 1], vertices[j]);
      ++swaps;
    }
  }
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i] == vertices[i - 1]) return;  // degenerate
  }
  if (swaps % 2 != 0) coeff = -coeff;
  add(vertices, coeff);
}

Chain operator+(const Chain& a, const Chain& b) {
  Chain out = a;
  for (const auto& [s, c] : b.terms) out.add(s, c);
  return out;
}

Chain operator-(const Chain& a, const Chain& b) {
  Chain out = a;
  for (const auto& [s, c] : b.terms) out.add(s, -c);
  return out;
}

Chain boundary(const Chain& c) {
  Chain out;
  for (const auto& [s, coeff] : c.terms) {
    if (s.size() < 2) continue;  // boundary of a point is zero
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face;
      face.reserve(s.size() - 1);
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (j != i) face.push_back(s[j]);
      }
      out.add(face, i % 2 == 0 ? coeff : -coeff);
    }
  }
  return out;
}

namespace {

Rational labeling_distance(const Labeling& a, const Labeling& b) {
  long long diff = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] != b.values[i]) ++diff;
  }
  return Rational(diff, static_cast<long long>(a.values.size()));
}

// Cliques of the strict-threshold graph on `allowed` vertex ids, by size.
std::vector<std::vector<Simplex>> cliques(
    const std::vector<std::vector<Rational>>& dist,
    const std::vector<int>& allowed, const Rational& kappa, int max_size) {
  std::vector<std::vector<Simplex>> by_dim(
      static_cast<std::size_t>(std::max(max_size, 0)));
  std::vector<int> clique;
  auto extend = [&](auto&& self, std::size_t start) -> void {
    if (!clique.empty()) {
      by_dim[clique.size() - 1].push_back(clique);
    }
    if (static_cast<int>(clique.size()) == max_size) return;
    for (std::size_t i = start; i < allowed.size(); ++i) {
      int v = allowed[i];
      bool ok = true;
      for (int u : clique) {
        if (!(dist[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] <
              kappa)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      clique.push_back(v);
      self(self, i + 1);
      clique.pop_back();
    }
  };
  extend(extend, 0);
  return by_dim;
}

}  // namespace

TwoScaleComplex build_complex(const std::vector<Labeling>& omega1,
                              const std::vector<Labeling>& omega2,
                              const Rational& kappa1, const Rational& kappa2,
                              int d_max) {
  if (kappa1 > kappa2) {
    throw std::invalid_argument("build_complex: kappa1 <= kappa2 required");
  }
  if (d_max < 0) {
    throw std::invalid_argument("build_complex: d_max >= 0 required");
  }
  TwoScaleComplex cx;
  cx.points = omega2;
  cx.kappa1 = kappa1;
  cx.kappa2 = kappa2;
  cx.d_max = d_max;
  for (const Labeling& x : omega1) {
    auto it = std::find(omega2.begin(), omega2.end(), x);
    if (it == omega2.end()) {
      throw std::invalid_argument("build_complex: Omega1 not contained in Omega2");
    }
    cx.inner.push_back(static_cast<int>(it - omega2.begin()));
  }
  std::sort(cx.inner.begin(), cx.inner.end());
  cx.inner.erase(std::unique(cx.inner.begin(), cx.inner.end()), cx.inner.end());

  std::size_t m = omega2.size();
  std::vector<std::vector<Rational>> dist(m, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      dist[i][j] = dist[j][i] = labeling_distance(omega2[i], omega2[j]);
    }
  }
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  cx.inner_simplices = cliques(dist, cx.inner, kappa1, d_max + 2);
  cx.outer_simplices = cliques(dist, all, kappa2, d_max + 2);
  return cx;
}

namespace {

const std::vector<std::vector<Simplex>>& simplices_at(const TwoScaleComplex& cx,
                                                      Scale scale) {
  return scale == Scale::kInner ? cx.inner_simplices : cx.outer_simplices;
}

}  // namespace

std::vector<std::vector<Rational>> boundary_matrix(const TwoScaleComplex& cx,
                                                   int d, Scale scale) {
  if (d < 1) {
    throw std::invalid_argument("boundary_matrix: d >= 1 required");
  }
  const auto& lists = simplices_at(cx, scale);
  const auto& cols = lists[static_cast<std::size_t>(d)];
  const auto& rows = lists[static_cast<std::size_t>(d - 1)];
  std::map<Simplex, std::size_t> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
  std::vector<std::vector<Rational>> mat(rows.size(),
                                         std::vector<Rational>(cols.size(), Rational(0)));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Chain col;
    col.add(cols[c], Rational(1));
    for (const auto& [face, coeff] : boundary(col).terms) {
      mat[row_index.at(face)][c] = coeff;
    }
  }
  return mat;
}

namespace {

// Row echelon in place; returns rank. Deterministic pivoting (first
// nonzero entry, top to bottom).
int echelon(std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational factor = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        rows[i][j] -= factor * rows[r][j];
      }
    }
    ++r;
  }
  return static_cast<int>(r);
}

int matrix_rank(std::vector<std::vector<Rational>> rows) {
  return echelon(rows);
}

std::vector<std::vector<Rational>> transpose(
    const std::vector<std::vector<Rational>>& m, std::size_t cols) {
  std::vector<std::vector<Rational>> out(cols,
                                         std::vector<Rational>(m.size(), Rational(0)));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[j][i] = m[i][j];
  }
  return out;
}

// Kernel basis of a matrix (columns = unknowns).
std::vector<std::vector<Rational>> kernel_basis(
    std::vector<std::vector<Rational>> mat, std::size_t ncols) {
  if (mat.empty()) {
    // No constraints: standard basis.
    std::vector<std::vector<Rational>> basis;
    for (std::size_t i = 0; i < ncols; ++i) {
      std::vector<Rational> v(ncols, Rational(0));
      v[i] = 1;
      basis.push_back(std::move(v));
    }
    return basis;
  }
  // Reduced echelon with recorded pivot columns.
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < ncols && r < mat.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < mat.size() && mat[pivot][c] == 0) ++pivot;
    if (pivot == mat.size()) continue;
    std::swap(mat[r], mat[pivot]);
    Rational lead = mat[r][c];
    for (std::size_t j = 0; j < ncols; ++j) mat[r][j] /= lead;
    for (std::size_t i = 0; i < mat.size(); ++i) {
      if (i == r || mat[i][c] == 0) continue;
      Rational factor = mat[i][c];
      for (std::size_t j = 0; j < ncols; ++j) mat[i][j] -= factor * mat[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(ncols, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) {
      v[pivot_col[i]] = -mat[i][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

Betti0 betti0_two_scale(const TwoScaleComplex& cx) {
  UnionFind uf(cx.points.size());
  for (const Simplex& e : cx.outer_simplices[1]) {
    uf.unite(e[0], e[1]);
  }
  std::map<int, int> best_inner;  // component root -> least inner index
  for (int v : cx.inner) {
    int root = uf.find(v);
    auto [it, inserted] = best_inner.try_emplace(root, v);
    if (!inserted) it->second = std::min(it->second, v);
  }
  Betti0 out;
  out.rank = static_cast<int>(best_inner.size());
  for (const auto& [root, rep] : best_inner) out.component_reps.push_back(rep);
  std::sort(out.component_reps.begin(), out.component_reps.end());
  return out;
}

namespace {

// Cycle-space basis in inner d-simplex coordinates.
std::vector<std::vector<Rational>> cycle_basis(const TwoScaleComplex& cx, int d,
                                               std::optional<int> L) {
  const auto& simplices = cx.inner_simplices[static_cast<std::size_t>(d)];
  std::size_t m = simplices.size();
  std::vector<std::vector<Rational>> full;
  if (d == 0) {
    full = kernel_basis({}, m);  // every 0-chain is a cycle
  } else {
    full = kernel_basis(boundary_matrix(cx, d, Scale::kInner), m);
  }
  if (!L || static_cast<std::size_t>(*L) >= m || d == 0) return full;
  if (m > kLSearchGuard) {
    throw std::runtime_error("homology_rank: L-truncation infeasible at this size");
  }
  // Z^L is generated by cycles supported on <= L simplices: scan supports.
  auto mat = boundary_matrix(cx, d, Scale::kInner);
  std::vector<std::vector<Rational>> generators;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (std::popcount(mask) > *L) continue;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) support.push_back(i);
    }
    std::vector<std::vector<Rational>> sub(mat.size(),
                                           std::vector<Rational>(support.size()));
    for (std::size_t i = 0; i < mat.size(); ++i) {
      for (std::size_t j = 0; j < support.size(); ++j) {
        sub[i][j] = mat[i][support[j]];
      }
    }
    for (const auto& k : kernel_basis(std::move(sub), support.size())) {
      std::vector<Rational> v(m, Rational(0));
      for (std::size_t j = 0; j < support.size(); ++j) v[support[j]] = k[j];
      generators.push_back(std::move(v));
    }
  }
  return generators;
}

Chain vector_to_chain(const std::vector<Rational>& v,
                      const std::vector<Simplex>& simplices) {
  Chain c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) c.add(simplices[i], v[i]);
  }
  return c;
}

// Reduce `v` against echelon `rows` (in place extension when independent).
// Returns true when v adds a new dimension.
bool absorb(std::vector<std::vector<Rational>>& rows, std::vector<Rational> v) {
  for (const auto& row : rows) {
    std::size_t lead = 0;
    while (lead < row.size() && row[lead] == 0) ++lead;
    if (lead == row.size()) continue;
    if (v[lead] != 0) {
      Rational factor = v[lead] / row[lead];
      for (std::size_t j = lead; j < v.size(); ++j) v[j] -= factor * row[j];
    }
  }
  if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; })) {
    return false;
  }
  rows.push_back(std::move(v));
  // Re-echelonize to keep leads canonical.
  echelon(rows);
  while (!rows.empty() &&
         std::all_of(rows.back().begin(), rows.back().end(),
                     [](const Rational& x) { return x == 0; })) {
    rows.pop_back();
  }
  return true;
}

}  // namespace

HomologyRank homology_rank(const TwoScaleComplex& cx, int d,
                           std::optional<int> L) {
  if (d < 0 || d > cx.d_max) {
    throw std::invalid_argument("homology_rank: dimension out of built range");
  }
  const auto& inner_simps = cx.inner_simplices[static_cast<std::size_t>(d)];
  const auto& outer_simps = cx.outer_simplices[static_cast<std::size_t>(d)];
  std::map<Simplex, std::size_t> outer_index;
  for (std::size_t i = 0; i < outer_simps.size(); ++i) {
    outer_index[outer_simps[i]] = i;
  }

  auto z_inner = cycle_basis(cx, d, L);
  // Embed cycles into outer coordinates.
  std::vector<std::vector<Rational>> z_outer;
  for (const auto& v : z_inner) {
    std::vector<Rational> w(outer_simps.size(), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) w[outer_index.at(inner_simps[i])] = v[i];
    }
    z_outer.push_back(std::move(w));
  }

  // Boundary columns at the outer scale, as rows of the echelon space.
  std::vector<std::vector<Rational>> space;
  const auto& fill = cx.outer_simplices[static_cast<std::size_t>(d) + 1];
  if (!fill.empty()) {
    auto b = boundary_matrix(cx, d + 1, Scale::kOuter);
    space = transpose(b, fill.size());  // boundary columns as row vectors
    echelon(space);
    while (!space.empty() &&
           std::all_of(space.back().begin(), space.back().end(),
                       [](const Rational& x) { return x == 0; })) {
      space.pop_back();
    }
  }

  HomologyRank out;
  for (std::size_t i = 0; i < z_outer.size(); ++i) {
    if (absorb(space, z_outer[i])) {
      ++out.dim;
      out.generators.push_back(vector_to_chain(z_inner[i], inner_simps));
    }
  }
  return out;
}

Chain chain_map(const Chain& z, const std::function<int(int)>& lambda) {
  Chain out;
  for (const auto& [s, c] : z.terms) {
    std::vector<int> image;
    image.reserve(s.size());
    for (int v : s) image.push_back(lambda(v));
    out.add_oriented(std::move(image), c);
  }
  return out;
}

Chain prism_homotopy(const Chain& z, const std::function<int(int)>& lambda) {
  Chain out;
  for (const auto& [s, coeff] : z.terms) {
    std::size_t k1 = s.size();  // k + 1 vertices
    Integer fact = 1;
    for (std::size_t i = 2; i <= k1; ++i) fact *= static_cast<int>(i);
    Rational weight = coeff / Rational(fact);
    std::vector<std::size_t> perm(k1);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Permutation parity by counting inversions.
      int inversions = 0;
      for (std::size_t i = 0; i < k1; ++i) {
        for (std::size_t j = i + 1; j < k1; ++j) {
          if (perm[i] > perm[j]) ++inversions;
        }
      }
      Rational signed_weight = inversions % 2 == 0 ? weight : -weight;
      for (std::size_t i = 0; i < k1; ++i) {
        std::vector<int> verts;
        verts.reserve(k1 + 1);
        for (std::size_t j = 0; j <= i; ++j) verts.push_back(s[perm[j]]);
        for (std::size_t j = i; j < k1; ++j) verts.push_back(lambda(s[perm[j]]));
        out.add_oriented(std::move(verts),
                         i % 2 == 0 ? signed_weight : -signed_weight);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

int greedy_cover_count(const TwoScaleComplex& cx) {
  std::vector<int> centers;
  for (int v : cx.inner) {
    bool covered = false;
    for (int c : centers) {
      if (labeling_distance(cx.points[static_cast<std::size_t>(v)],
                            cx.points[static_cast<std::size_t>(c)]) < cx.kappa1) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(v);
  }
  return static_cast<int>(centers.size());
}

double betti_growth_estimate(const TwoScaleComplex& cx, int d,
                             std::optional<int> L) {
  auto h = homology_rank(cx, d, L);
  if (h.dim == 0) return -std::numeric_limits<double>::infinity();
  double n = cx.points.empty() ? 1.0
                               : static_cast<double>(cx.points[0].values.size());
  return std::log(static_cast<double>(h.dim)) / n;
}

std::vector<std::vector<Labeling>> bernoulli_contract_path(
    const std::vector<Labeling>& xs, int k, const std::vector<double>& base,
    RngStream& rng) {
  if (xs.empty() || k < 1) {
    throw std::invalid_argument("bernoulli_contract_path: need xs and k >= 1");
  }
  std::size_t n = xs[0].values.size();
  for (const Labeling& x : xs) {
    if (x.values.size() != n) {
      throw std::invalid_argument("bernoulli_contract_path: length mismatch");
    }
  }
  // One shared draw of thresholds and replacement letters.
  std::vector<double> tau(n);
  std::vector<std::uint8_t> z(n);
  for (std::size_t v = 0; v < n; ++v) {
    tau[v] = 1.0 - rng.unit();  // in (0, 1]: j=0 replaces nothing, j=k everything
    double u = rng.unit();
    double acc = 0.0;
    std::uint8_t letter = static_cast<std::uint8_t>(base.size() - 1);
    for (std::size_t c = 0; c < base.size(); ++c) {
      acc += base[c];
      if (u < acc) {
        letter = static_cast<std::uint8_t>(c);
        break;
      }
    }
    z[v] = letter;
  }
  std::vector<std::vector<Labeling>> paths(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int j = 0; j <= k; ++j) {
      Labeling step = xs[i];
      double t = static_cast<double>(j) / k;
      for (std::size_t v = 0; v < n; ++v) {
        if (tau[v] <= t) step.values[v] = z[v];
      }
      paths[i].push_back(std::move(step));
    }
  }
  return paths;
}

std::vector<std::vector<Labeling>> diffuse_contract_path(
    const std::vector<std::vector<int>>& parts, const std::vector<Labeling>& xs,
    const Labeling& x_ref) {
  std::size_t n = x_ref.values.size();
  std::vector<char> seen(n, 0);
  for (const auto& part : parts) {
    for (int v : part) {
      if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
        throw std::invalid_argument("diffuse_contract_path: parts are not a partition");
      }
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("diffuse_contract_path: parts do not cover V");
  }
  std::vector<std::vector<Labeling>> paths(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Labeling current = xs[i];
    paths[i].push_back(current);
    for (const auto& part : parts) {
      for (int v : part) {
        current.values[static_cast<std::size_t>(v)] =
            x_ref.values[static_cast<std::size_t>(v)];
      }
      paths[i].push_back(current);
    }
  }
  return paths;
}

ContractibilityReport contractibility_check(
    const std::vector<std::vector<Labeling>>& paths,
    const std::vector<Labeling>& originals, const PermHom& sigma,
    const NeighborhoodSpec& outer, const Rational& delta) {
  ContractibilityReport report;
  for (bool& c : report.conds) c = true;
  auto violate = [&](int cond, const std::string& where) {
    if (report.conds[cond - 1] && report.first_violation.empty()) {
      report.first_violation =
          "condition " + std::to_string(cond) + " at " + where;
    }
    report.conds[cond - 1] = false;
  };

  std::size_t steps = paths.empty() ? 0 : paths[0].size();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = 0; j < paths[i].size(); ++j) {
      if (!in_model_space(sigma, paths[i][j], outer)) {
        violate(1, "i=" + std::to_string(i) + " j=" + std::to_string(j));
      }
    }
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i >= originals.size() || paths[i].empty() ||
        !(paths[i][0] == originals[i])) {
      violate(2, "i=" + std::to_string(i));
    }
  }
  for (std::size_t j = 0; j + 1 < steps; ++j) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t l = i + 1; l < paths.size(); ++l) {
        if (labeling_distance(paths[i][j + 1], paths[l][j + 1]) >
            labeling_distance(paths[i][j], paths[l][j])) {
          violate(3, "i=" + std::to_string(i) + " l=" + std::to_string(l) +
                         " j=" + std::to_string(j));
        }
      }
      if (!(labeling_distance(paths[i][j], paths[i][j + 1]) < delta)) {
        violate(4, "i=" + std::to_string(i) + " j=" + std::to_string(j));
      }
    }
  }
  for (std::size_t i = 1; i < paths.size(); ++i) {
    if (steps == 0 || !(paths[i].back() == paths[0].back())) {
      violate(5, "i=" + std::to_string(i));
    }
  }
  report.all_pass = std::all_of(std::begin(report.conds), std::end(report.conds),
                                [](bool b) { return b; });
  return report;
}

}  // namespace sofic
