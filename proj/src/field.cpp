#include "paneitz/field.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "paneitz/errors.hpp"

namespace paneitz {

namespace {

using Fft = Eigen::FFT<double>;

void check_grid(std::size_t grid_size, int max_mode) {
  if (max_mode < 0) throw DomainError("max mode must be nonnegative");
  if (grid_size <= 2 * static_cast<std::size_t>(max_mode)) {
    throw DomainError("grid of " + std::to_string(grid_size) + " points cannot resolve mode " +
                      std::to_string(max_mode));
  }
}

double integer_power(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<Complex> full_spectrum(std::span<const double> values) {
  const std::size_t g = values.size();
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out;
  Fft fft;
  fft.fwd(out, in);
  const double inv = 1.0 / static_cast<double>(g);
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<Complex> transform(std::span<const double> values, int max_mode) {
  check_grid(values.size(), max_mode);
  auto spec = full_spectrum(values);
  spec.resize(static_cast<std::size_t>(max_mode) + 1);
  spec[0] = Complex(spec[0].real(), 0.0);
  return spec;
}

std::vector<double> inverse(std::span<const Complex> coeffs, int grid_size) {
  if (coeffs.empty()) throw DomainError("no coefficients");
  const int k = static_cast<int>(coeffs.size()) - 1;
  check_grid(static_cast<std::size_t>(std::max(grid_size, 0)), k);
  const auto g = static_cast<std::size_t>(grid_size);
  std::vector<Complex> full(g, Complex(0.0, 0.0));
  full[0] = Complex(coeffs[0].real(), 0.0);
  for (int m = 1; m <= k; ++m) {
    full[static_cast<std::size_t>(m)] = coeffs[static_cast<std::size_t>(m)];
    full[g - static_cast<std::size_t>(m)] = std::conj(coeffs[static_cast<std::size_t>(m)]);
  }
  std::vector<Complex> out;
  Fft fft;
  fft.SetFlag(Fft::Unscaled);
  fft.inv(out, full);
  std::vector<double> values(g);
  for (std::size_t j = 0; j < g; ++j) values[j] = out[j].real();
  return values;
}

// ---------------------------------------------------------------------------
// PeriodicField

PeriodicField::PeriodicField(const ManifoldSpec& spec, std::vector<Complex> coeffs,
                             std::vector<double> values)
    : spec_(spec),
      max_mode_(static_cast<int>(coeffs.size()) - 1),
      coeffs_(std::move(coeffs)),
      values_(std::move(values)) {
  if (modes() < 16) {
    throw DomainError("a periodic field needs at least 16 modes");
  }
  coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
}

PeriodicField PeriodicField::from_coefficients(const ManifoldSpec& spec,
                                               std::vector<Complex> coeffs) {
  if (coeffs.size() < 9) throw DomainError("a periodic field needs at least 16 modes");
  const int k = static_cast<int>(coeffs.size()) - 1;
  auto values = inverse(coeffs, 4 * k);
  return PeriodicField(spec, std::move(coeffs), std::move(values));
}

PeriodicField PeriodicField::from_values(const ManifoldSpec& spec, std::vector<double> values) {
  if (values.size() % 4 != 0 || values.size() < 32) {
    throw DomainError("field samples must number 2N with N even and >= 16, got " +
                      std::to_string(values.size()));
  }
  for (const double v : values) {
    if (!std::isfinite(v)) throw DomainError("field samples must be finite");
  }
  const int k = static_cast<int>(values.size() / 4);
  auto coeffs = transform(values, k);
  return PeriodicField(spec, std::move(coeffs), std::move(values));
}

PeriodicField PeriodicField::from_function(const ManifoldSpec& spec, int modes,
                                           const std::function<double(double)>& f) {
  if (modes < 16 || modes % 2 != 0) throw DomainError("mode count must be even and >= 16");
  const QuadratureGrid grid(2 * modes, spec.period());
  std::vector<double> samples(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) samples[static_cast<std::size_t>(j)] = f(grid.point(j));
  return from_coefficients(spec, transform(samples, modes / 2));
}

PeriodicField PeriodicField::constant(const ManifoldSpec& spec, int modes, double value) {
  if (modes < 16 || modes % 2 != 0) throw DomainError("mode count must be even and >= 16");
  std::vector<Complex> coeffs(static_cast<std::size_t>(modes / 2) + 1, Complex(0.0, 0.0));
  coeffs[0] = value;
  std::vector<double> values(static_cast<std::size_t>(2 * modes), value);
  return PeriodicField(spec, std::move(coeffs), std::move(values));
}

Complex PeriodicField::coefficient(int m) const noexcept {
  const int am = std::abs(m);
  if (am > max_mode_) return {0.0, 0.0};
  const Complex c = coeffs_[static_cast<std::size_t>(am)];
  return m < 0 ? std::conj(c) : c;
}

double PeriodicField::operator()(double s) const {
  const double k = wavenumber();
  double sum = coeffs_[0].real();
  for (int m = 1; m <= max_mode_; ++m) {
    sum += 2.0 * (coeffs_[static_cast<std::size_t>(m)] * std::polar(1.0, m * k * s)).real();
  }
  return sum;
}

PeriodicField PeriodicField::derivative(int order) const {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  std::vector<Complex> c(coeffs_);
  const double k = wavenumber();
  const Complex i(0.0, 1.0);
  Complex unit = 1.0;
  for (int o = 0; o < order; ++o) unit *= i;
  for (int m = 0; m <= max_mode_; ++m) {
    c[static_cast<std::size_t>(m)] *= unit * integer_power(m * k, order);
  }
  return from_coefficients(spec_, std::move(c));
}

PeriodicField PeriodicField::resampled(int modes) const {
  if (modes < 16 || modes % 2 != 0) throw DomainError("mode count must be even and >= 16");
  std::vector<Complex> c(static_cast<std::size_t>(modes / 2) + 1, Complex(0.0, 0.0));
  const std::size_t keep = std::min(c.size(), coeffs_.size());
  std::copy_n(coeffs_.begin(), keep, c.begin());
  return from_coefficients(spec_, std::move(c));
}

PeriodicField PeriodicField::shifted(double ds) const {
  std::vector<Complex> c(coeffs_);
  const double k = wavenumber();
  for (int m = 1; m <= max_mode_; ++m) c[static_cast<std::size_t>(m)] *= std::polar(1.0, m * k * ds);
  return from_coefficients(spec_, std::move(c));
}

PeriodicField PeriodicField::scaled(double factor) const {
  std::vector<Complex> c(coeffs_);
  for (auto& x : c) x *= factor;
  std::vector<double> v(values_);
  for (auto& x : v) x *= factor;
  return PeriodicField(spec_, std::move(c), std::move(v));
}

double PeriodicField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double PeriodicField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double PeriodicField::argmax() const {
  const auto it = std::max_element(values_.begin(), values_.end());
  const double h = spec_.period() / static_cast<double>(values_.size());
  double s = h * static_cast<double>(it - values_.begin());
  if (relative_variance() == 0.0) return s;
  // Newton on u'(s) = 0, kept inside the bracketing grid cell pair.
  const double k = wavenumber();
  const double lo = s - h, hi = s + h;
  for (int iter = 0; iter < 20; ++iter) {
    double d1 = 0.0, d2 = 0.0;
    for (int m = 1; m <= max_mode_; ++m) {
      const Complex e = coeffs_[static_cast<std::size_t>(m)] * std::polar(1.0, m * k * s);
      const double mk = m * k;
      d1 += -2.0 * mk * e.imag();
      d2 += -2.0 * mk * mk * e.real();
    }
    if (!(d2 < 0.0)) break;
    const double next = s - d1 / d2;
    if (next < lo || next > hi) break;
    const bool done = std::abs(next - s) < 1e-15 * spec_.period();
    s = next;
    if (done) break;
  }
  s = std::fmod(s, spec_.period());
  if (s < 0.0) s += spec_.period();
  return s;
}

double PeriodicField::relative_variance() const {
  double rest = 0.0;
  for (int m = 1; m <= max_mode_; ++m) rest += 2.0 * std::norm(coeffs_[static_cast<std::size_t>(m)]);
  const double mean_sq = std::norm(coeffs_[0]);
  if (mean_sq == 0.0) return rest == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return rest / mean_sq;
}

double PeriodicField::tail_fraction() const {
  double total = std::abs(coeffs_[0]), tail = 0.0;
  for (int m = 1; m <= max_mode_; ++m) {
    const double a = 2.0 * std::abs(coeffs_[static_cast<std::size_t>(m)]);
    total += a;
    if (2 * m > max_mode_) tail += a;
  }
  return total > 0.0 ? tail / total : 0.0;
}

// ---------------------------------------------------------------------------
// Norms

namespace {

double weighted_square_sum(const PeriodicField& u, const std::function<double(int)>& weight) {
  double sum = weight(0) * std::norm(u.coefficient(0));
  for (int m = 1; m <= u.max_mode(); ++m) sum += 2.0 * weight(m) * std::norm(u.coefficient(m));
  return sum;
}

}  // namespace

double energy(const PeriodicField& u) {
  const double p = critical_exponent(u.spec().dimension());
  const auto vals = u.values();
  double sum = 0.0;
  for (const double v : vals) sum += std::pow(std::abs(v), p);
  return sum * u.spec().period() / static_cast<double>(vals.size()) *
         sphere_volume(u.spec().sphere_dimension());
}

double l2_on_grid(const PeriodicField& u) {
  const auto vals = u.values();
  double sum = 0.0;
  for (const double v : vals) sum += v * v;
  return sum * u.spec().period() / static_cast<double>(vals.size()) *
         sphere_volume(u.spec().sphere_dimension());
}

double pairing(const PeriodicField& u, const OperatorParams& params) {
  const double k = u.wavenumber();
  const double scale = u.spec().period() * sphere_volume(u.spec().sphere_dimension());
  return scale * weighted_square_sum(u, [&](int m) { return params.symbol(m * k * m * k); });
}

NormReport norms(const PeriodicField& u, const OperatorParams& params) {
  const double k = u.wavenumber();
  const double scale = u.spec().period() * sphere_volume(u.spec().sphere_dimension());
  NormReport r;
  r.l2 = scale * weighted_square_sum(u, [](int) { return 1.0; });
  r.grad_l2 = scale * weighted_square_sum(u, [&](int m) { return integer_power(m * k, 2); });
  r.hess_l2 = scale * weighted_square_sum(u, [&](int m) { return integer_power(m * k, 4); });
  r.energy = energy(u);
  r.l2sharp = std::pow(r.energy, 1.0 / critical_exponent(u.spec().dimension()));
  r.pairing = pairing(u, params);
  return r;
}

// ---------------------------------------------------------------------------
// Localized masses

namespace {

constexpr int kMassOversampling = 16;

std::vector<double> density_on_fine_grid(const PeriodicField& u, MassKind kind, int fine) {
  const PeriodicField base = [&] {
    switch (kind) {
      case MassKind::grad_l2: return u.derivative(1);
      case MassKind::hess_l2: return u.derivative(2);
      default: return u;
    }
  }();
  auto vals = inverse(base.coefficients(), fine);
  if (kind == MassKind::energy) {
    const double p = critical_exponent(u.spec().dimension());
    for (auto& v : vals) v = std::pow(std::abs(v), p);
  } else {
    for (auto& v : vals) v = v * v;
  }
  return vals;
}

// Exact integral over the arc [c - h, c + h] of the trigonometric interpolant.
double arc_integral(std::span<const Complex> spectrum, double wavenumber, double center,
                    double half_width) {
  const std::size_t g = spectrum.size();
  double sum = 2.0 * half_width * spectrum[0].real();
  for (std::size_t m = 1; m < g / 2; ++m) {
    const double mk = static_cast<double>(m) * wavenumber;
    const Complex e = spectrum[m] * std::polar(1.0, mk * center);
    // the m and -m terms together
    sum += 2.0 * e.real() * 2.0 * std::sin(mk * half_width) / mk;
  }
  return sum;
}

}  // namespace

double localized_mass_resolution(const PeriodicField& u) {
  return u.spec().period() / (kMassOversampling * u.modes());
}

double localized_mass(const PeriodicField& u, double center, double delta, MassKind kind,
                      Region region) {
  const double period = u.spec().period();
  if (!(delta > 0.0) || !(delta < 0.5 * period)) {
    throw DomainError("ball radius must satisfy 0 < delta < L/2");
  }
  const int fine = kMassOversampling * u.modes();
  const auto density = density_on_fine_grid(u, kind, fine);
  const auto spectrum = full_spectrum(density);
  const double k = u.wavenumber();
  const double value = region == Region::ball
                           ? arc_integral(spectrum, k, center, delta)
                           : arc_integral(spectrum, k, center + 0.5 * period, 0.5 * period - delta);
  return value * sphere_volume(u.spec().sphere_dimension());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_field(std::ostream& out, const PeriodicField& u) {
  out << "# " << u.spec().dimension() << ' ' << format17(u.spec().radius()) << ' ' << u.modes()
      << '\n';
  const auto grid = u.grid();
  const auto vals = u.values();
  for (int j = 0; j < grid.size(); ++j) {
    out << format17(grid.point(j)) << ' ' << format17(vals[static_cast<std::size_t>(j)]) << '\n';
  }
}

PeriodicField read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("field file is empty");
  std::istringstream header(line);
  std::string hash;
  int n = 0, modes = 0;
  double t = 0.0;
  if (!(header >> hash >> n >> t >> modes) || hash != "#") {
    throw InputError("field header must read '# n t N', got '" + line + "'");
  }
  const ManifoldSpec spec(n, t);
  if (modes < 16 || modes % 2 != 0) throw InputError("field mode count must be even and >= 16");
  const QuadratureGrid grid(2 * modes, spec.period());
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid.size()));
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double s = 0.0, v = 0.0;
    if (!(row >> s >> v)) throw InputError("malformed field row '" + line + "'");
    const auto j = static_cast<int>(values.size());
    if (j >= grid.size() || std::abs(s - grid.point(j)) > 1e-9 * spec.period()) {
      throw InputError("field row " + std::to_string(j) + " is off the 2N-point grid");
    }
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != grid.size()) {
    throw InputError("field file has " + std::to_string(values.size()) + " rows, expected " +
                     std::to_string(grid.size()));
  }
  return PeriodicField::from_values(spec, std::move(values));
}

void save_field(const std::filesystem::path& path, const PeriodicField& u) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write_field(out, u);
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

PeriodicField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("field file not found: '" + path.string() + "'");
  try {
    return read_field(in);
  } catch (const DomainError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace paneitz
