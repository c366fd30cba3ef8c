#include "l3mhd/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "l3mhd/errors.hpp"

namespace l3mhd {

namespace {
constexpr Complex kI{0.0, 1.0};

std::span<const double> k_component(const Grid& g, int j) {
  return j == 0 ? g.kx() : (j == 1 ? g.ky() : g.kz());
}

ScalarField derivative(const ScalarField& f, int j) {
  const auto k = k_component(f.grid(), j);
  ScalarField out(f.grid_ptr());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = kI * k[i] * f[i];
  return out;
}
}  // namespace

const char* mollifier_name(MollifierKind kind) {
  return kind == MollifierKind::fejer ? "fejer" : "gaussian";
}

MollifierKind parse_mollifier(const std::string& name) {
  if (name == "gaussian") return MollifierKind::gaussian;
  if (name == "fejer") return MollifierKind::fejer;
  throw ConfigError("unknown mollifier '" + name + "'");
}

double mollifier_symbol(MollifierKind kind, double eps, double kx, double ky, double kz) {
  switch (kind) {
    case MollifierKind::gaussian:
      return std::exp(-0.5 * eps * eps * (kx * kx + ky * ky + kz * kz));
    case MollifierKind::fejer: {
      double s = 1.0;
      for (double k : {kx, ky, kz}) s *= std::max(0.0, 1.0 - eps * std::abs(k) / std::numbers::pi);
      return s;
    }
  }
  return 1.0;
}

PhysicalVector to_physical(const VectorField& u) {
  PhysicalVector p;
  for (int i = 0; i < 3; ++i) p.c[i] = u[i].to_physical();
  return p;
}

PhysicalTensor gradient_physical(const VectorField& u) {
  PhysicalTensor g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = derivative(u[i], j).to_physical();
  return g;
}

VectorField from_physical_dealiased(const GridPtr& grid, const PhysicalVector& p) {
  VectorField out = VectorField::from_physical(grid, p.c[0], p.c[1], p.c[2]);
  return dealias(std::move(out));
}

ScalarField dealias(ScalarField f) {
  const auto mask = f.grid().mask();
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) f[i] = Complex{};
  return f;
}

VectorField dealias(VectorField u) {
  for (int i = 0; i < 3; ++i) u[i] = dealias(std::move(u[i]));
  return u;
}

VectorField gradient(const ScalarField& f) {
  return VectorField(derivative(f, 0), derivative(f, 1), derivative(f, 2), false);
}

ScalarField divergence(const VectorField& u) {
  ScalarField out = derivative(u[0], 0);
  out += derivative(u[1], 1);
  out += derivative(u[2], 2);
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const auto k2 = f.grid().k2();
  ScalarField out(f.grid_ptr());
  for (std::size_t i = 0; i < k2.size(); ++i) out[i] = -k2[i] * f[i];
  return out;
}

VectorField leray_project(const VectorField& f) {
  const Grid& g = f.grid();
  const auto kx = g.kx(), ky = g.ky(), kz = g.kz(), k2 = g.k2();
  VectorField out = f;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (k2[i] == 0.0) continue;
    const Complex dot = (kx[i] * f[0][i] + ky[i] * f[1][i] + kz[i] * f[2][i]) / k2[i];
    out[0][i] -= kx[i] * dot;
    out[1][i] -= ky[i] * dot;
    out[2][i] -= kz[i] * dot;
  }
  out.set_solenoidal(true);
  return out;
}

VectorField gradient_part(const VectorField& f) {
  const Grid& g = f.grid();
  const auto kx = g.kx(), ky = g.ky(), kz = g.kz(), k2 = g.k2();
  VectorField out(f.grid_ptr());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (k2[i] == 0.0) continue;
    const Complex dot = (kx[i] * f[0][i] + ky[i] * f[1][i] + kz[i] * f[2][i]) / k2[i];
    out[0][i] = kx[i] * dot;
    out[1][i] = ky[i] * dot;
    out[2][i] = kz[i] * dot;
  }
  out.set_solenoidal(false);
  return out;
}

VectorField mollify(const VectorField& f, double epsilon, MollifierKind kind) {
  const Grid& g = f.grid();
  const auto kx = g.kx(), ky = g.ky(), kz = g.kz();
  VectorField out = f;
  for (std::size_t i = 0; i < kx.size(); ++i) {
    const double m = mollifier_symbol(kind, epsilon, kx[i], ky[i], kz[i]);
    for (int c = 0; c < 3; ++c) out[c][i] *= m;
  }
  return out;
}

VectorField advect(const VectorField& u, const VectorField& w) {
  require_same_grid(u.grid(), w.grid(), "advect");
  const PhysicalVector up = to_physical(u);
  const PhysicalTensor gw = gradient_physical(w);
  const std::size_t size = u.grid().physical_size();
  PhysicalVector out;
  for (int i = 0; i < 3; ++i) {
    out.c[i].assign(size, 0.0);
    for (int j = 0; j < 3; ++j) {
      const auto& uj = up.c[j];
      const auto& dij = gw(i, j);
      for (std::size_t p = 0; p < size; ++p) out.c[i][p] += uj[p] * dij[p];
    }
  }
  return from_physical_dealiased(u.grid_ptr(), out);
}

TensorField outer(const VectorField& u, const VectorField& w) {
  require_same_grid(u.grid(), w.grid(), "outer");
  const PhysicalVector up = to_physical(u);
  const PhysicalVector wp = to_physical(w);
  const std::size_t size = u.grid().physical_size();
  TensorField t(u.grid_ptr());
  std::vector<double> prod(size);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (std::size_t p = 0; p < size; ++p) prod[p] = up.c[i][p] * wp.c[j][p];
      t(i, j) = dealias(ScalarField::from_physical(u.grid_ptr(), prod));
    }
  }
  return t;
}

VectorField tensor_divergence(const TensorField& t) {
  VectorField out(t.grid_ptr());
  for (int i = 0; i < 3; ++i) {
    ScalarField acc(t.grid_ptr());
    for (int j = 0; j < 3; ++j) acc += derivative(t(j, i), j);
    out[i] = std::move(acc);
  }
  out.set_solenoidal(false);
  return out;
}

std::string_view random_field_algorithm() {
  return "mt19937_64; uniform = (bits >> 11) * 2^-53; Box-Muller normals; per retained "
         "mode in storage order, components x,y,z, real then imaginary; Hermitian "
         "averaging on self-conjugate planes; Leray projection";
}

VectorField random_divfree_field(const GridPtr& grid, std::uint64_t seed, double amplitude,
                                 double decay) {
  if (!(decay > 0.0)) throw InvalidConstants("random_divfree_field: decay must be positive");
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  const auto normal_pair = [&] {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return Complex{r * std::cos(a), r * std::sin(a)};
  };

  const auto k2 = grid->k2();
  const auto mask = grid->mask();
  VectorField u(grid);
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (!mask[i] || k2[i] == 0.0) continue;
    const double scale = amplitude * std::pow(k2[i], -0.5 * decay) / std::sqrt(2.0);
    for (int c = 0; c < 3; ++c) u[c][i] = scale * normal_pair();
  }
  for (int c = 0; c < 3; ++c) u[c].enforce_hermitian();
  return leray_project(u);
}

ScalarField resample(const ScalarField& f, const GridPtr& target) {
  const Grid& src = f.grid();
  const int n = src.n(), nt = target->n();
  if (std::abs(src.box_length() - target->box_length()) > 1e-12 * src.box_length())
    throw GridMismatch("resample: box lengths differ");
  ScalarField out(target);
  const int limit = std::min(n, nt) / 2;  // |mode| < limit survives
  auto to_index = [](int mode, int size) { return mode >= 0 ? mode : mode + size; };
  for (int ix = 0; ix < n; ++ix) {
    const int mx = src.signed_mode(ix);
    if (std::abs(mx) >= limit) continue;
    for (int iy = 0; iy < n; ++iy) {
      const int my = src.signed_mode(iy);
      if (std::abs(my) >= limit) continue;
      for (int iz = 0; iz < limit; ++iz)
        out[target->spectral_index(to_index(mx, nt), to_index(my, nt), iz)] =
            f[src.spectral_index(ix, iy, iz)];
    }
  }
  return out;
}

VectorField resample(const VectorField& u, const GridPtr& target) {
  return VectorField(resample(u[0], target), resample(u[1], target), resample(u[2], target),
                     u.solenoidal());
}

}  // namespace l3mhd
