#include "gvr/kernels.hpp"

#include <cmath>
#include <limits>

#include "gvr/errors.hpp"

namespace gvr {

namespace {

// log |expm1(z)| for z != 0, accurate for small |z| and free of overflow for large z.
double log_abs_expm1(double z) {
  if (z < 0.0) return std::log(-std::expm1(z));
  if (z < 1.0) return std::log(std::expm1(z));
  return z + std::log1p(-std::exp(-z));
}

// One rank-one column whose mu_i = sign * exp(lmu_i) never vanishes.
// numu_i = nu_i |mu_i|; q_i = r_i / |mu_i| is accumulated as a ratio so the suffix
// norms r_i are never formed.
void fill_column(Mat& C, Mat& S, Mat& nu, Index k, const Vec& lmu, double sign, const Vec& numu) {
  const Index n = lmu.size();
  C(n - 1, k) = 1.0;
  S(n - 1, k) = 0.0;
  nu(n - 1, k) = sign * numu[n - 1];
  double q_next = 1.0;
  for (Index i = n - 2; i >= 0; --i) {
    const double x = std::exp(lmu[i + 1] - lmu[i]) * q_next;
    const double q = std::hypot(1.0, x);
    C(i, k) = sign / q;
    S(i, k) = (i == n - 2 ? sign : 1.0) * x / q;
    nu(i, k) = numu[i] * q;
    q_next = q;
  }
}

// Same column when |mu_{i+1}| / |mu_i| = exp(log_ratio) for every i (equispaced grids):
// q_i^2 = sum_{m < N-i} ratio^{2m} in closed form.
void fill_column_geometric(Mat& C, Mat& S, Mat& nu, Index k, double log_ratio, double sign, const Vec& numu) {
  const Index n = numu.size();
  const double a = std::exp(log_ratio);
  const double den = std::expm1(2.0 * log_ratio);
  auto q_of = [&](Index terms) {
    if (den == 0.0) return std::sqrt(static_cast<double>(terms));
    return std::sqrt(std::expm1(2.0 * log_ratio * static_cast<double>(terms)) / den);
  };
  C(n - 1, k) = 1.0;
  S(n - 1, k) = 0.0;
  nu(n - 1, k) = sign * numu[n - 1];
  double q_next = 1.0;
  for (Index i = n - 2; i >= 0; --i) {
    const double q = q_of(n - i);
    C(i, k) = sign / q;
    S(i, k) = (i == n - 2 ? sign : 1.0) * a * q_next / q;
    nu(i, k) = numu[i] * q;
    q_next = q;
  }
}

void require_exponential_dc(const KernelSpec& spec, const InputSignal& input) {
  spec.validate();
  if (spec.family == KernelSpec::Family::SS)
    throw ValidationError("exponential-input output kernel is available for DC/TC kernels only");
  if (input.kind != InputSignal::Kind::Exponential) throw ValidationError("input is not exponential");
  if (!std::isfinite(input.alpha)) throw ValidationError("input decay must be finite");
}

// Column-1 generators (log of the positive values) and the column-2 pieces.
struct OutputPieces {
  Vec lmu1, lnu1;  // log mu1(t_i), log nu1(t_i)
  Vec nu2;         // nu2(t_i)
  Vec nu2mu2;      // nu2(t_i) * exp(-alpha t_i)
};

OutputPieces output_pieces(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  require_exponential_dc(spec, input);
  const double lam = spec.dc_lambda(), rho = spec.rho, al = input.alpha;
  const auto k = output_kernel_constants(lam, rho, al);
  const double llr = std::log(lam * rho), llq = std::log(lam / rho), ll = std::log(lam);
  const Index n = grid.size();
  OutputPieces out{Vec(n), Vec(n), Vec(n), Vec(n)};
  const bool dt = input.domain == Domain::DT;
  for (Index i = 0; i < n; ++i) {
    const double t = grid[i];
    if (dt) {
      if (t < 0.0) throw ValidationError("DT output kernel needs t >= 0");
      out.lmu1[i] = -al * t + log_abs_expm1(k.T * (t + 1.0)) - log_abs_expm1(k.T);
      out.lnu1[i] = -al * t + log_abs_expm1(k.D * (t + 1.0)) - log_abs_expm1(k.D);
      const double den = k.Dp * k.Tp;
      out.nu2[i] = (std::exp(k.D + t * llq) - std::exp(k.T + t * llr) +
                    k.Cp * (std::exp(k.D + k.T + 2.0 * t * ll + al * t) - std::exp(-al * t))) /
                   den;
      out.nu2mu2[i] = (std::exp(k.D + t * (llq - al)) - std::exp(k.T + t * (llr - al)) +
                       k.Cp * (std::exp(k.D + k.T + 2.0 * t * ll) - std::exp(-2.0 * al * t))) /
                      den;
    } else {
      if (t < 0.0) throw ValidationError("CT output kernel needs t >= 0");
      const double inf = std::numeric_limits<double>::infinity();
      out.lmu1[i] = t == 0.0 ? -inf : -al * t + log_abs_expm1(k.T * t) - std::log(std::abs(k.T));
      out.lnu1[i] = t == 0.0 ? -inf : -al * t + log_abs_expm1(k.D * t) - std::log(std::abs(k.D));
      const double den = k.D * k.T;
      out.nu2[i] = (std::exp(t * llq) - std::exp(t * llr) + k.C * (std::exp(2.0 * t * ll + al * t) - std::exp(-al * t))) / den;
      out.nu2mu2[i] = (std::exp(t * (llq - al)) - std::exp(t * (llr - al)) +
                       k.C * (std::exp(2.0 * t * ll) - std::exp(-2.0 * al * t))) /
                      den;
    }
  }
  return out;
}

}  // namespace

KernelSpec KernelSpec::dc(double lambda, double rho) {
  KernelSpec s{Family::DC, lambda, rho};
  s.validate();
  return s;
}

KernelSpec KernelSpec::tc(double rho) {
  KernelSpec s{Family::TC, rho, rho};
  s.validate();
  return s;
}

KernelSpec KernelSpec::ss(double rho) {
  KernelSpec s{Family::SS, 1.0, rho};
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  switch (family) {
    case Family::DC:
      if (!(lambda > 0.0 && lambda <= 1.0)) throw ValidationError("DC lambda must lie in (0,1]");
      if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("DC rho must lie in (0,1)");
      break;
    case Family::TC:
      if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("TC rho must lie in (0,1)");
      break;
    case Family::SS:
      if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("SS rho must lie in (0,1]");
      break;
  }
}

InputSignal InputSignal::impulse(Domain d) { return InputSignal{Kind::UnitImpulse, 0.0, d}; }

InputSignal InputSignal::exponential(double alpha, Domain d) { return InputSignal{Kind::Exponential, alpha, d}; }

double InputSignal::operator()(double t) const {
  if (t < 0.0) return 0.0;
  if (kind == Kind::Exponential) return std::exp(-alpha * t);
  if (domain == Domain::CT) throw ValidationError("the CT unit impulse has no pointwise value");
  return t == 0.0 ? 1.0 : 0.0;
}

OutputKernelConstants output_kernel_constants(double lambda, double rho, double alpha) {
  OutputKernelConstants k{};
  k.T = std::log(lambda * rho) + alpha;
  k.D = std::log(lambda / rho) + alpha;
  const double half = std::log(lambda) + alpha;  // (T + D) / 2
  if (std::abs(k.T) < 1e-10 || std::abs(k.D) < 1e-10 || std::abs(half) < 1e-10)
    throw NearDegenerateParameters("output kernel parameters on a removable singularity (T, D or T+D near 0)");
  k.Tp = -std::expm1(k.T);
  k.Dp = -std::expm1(k.D);
  k.C = std::log(rho) / half;
  k.Cp = (std::exp(k.D) - std::exp(k.T)) / (-std::expm1(k.D + k.T));
  return k;
}

double kernel_value(const KernelSpec& spec, double t, double s) {
  switch (spec.family) {
    case KernelSpec::Family::DC:
      return std::pow(spec.lambda, t + s) * std::pow(spec.rho, std::abs(t - s));
    case KernelSpec::Family::TC:
      return std::pow(spec.rho, t + s + std::abs(t - s));
    case KernelSpec::Family::SS: {
      const double m = std::max(t, s);
      return std::pow(spec.rho, t + s + m) / 2.0 - std::pow(spec.rho, 3.0 * m) / 6.0;
    }
  }
  return 0.0;
}

GRMatrix kernel_gr(const KernelSpec& spec, const TimeGrid& grid) {
  spec.validate();
  const Index n = grid.size();
  if (spec.family == KernelSpec::Family::SS) {
    Mat U(n, 2), V(n, 2);
    for (Index i = 0; i < n; ++i) {
      const double t = grid[i];
      U(i, 0) = -std::pow(spec.rho, 3.0 * t) / 6.0;
      U(i, 1) = std::pow(spec.rho, 2.0 * t) / 2.0;
      V(i, 0) = 1.0;
      V(i, 1) = std::pow(spec.rho, t);
    }
    return GRMatrix(std::move(U), std::move(V));
  }
  const double lam = spec.dc_lambda(), rho = spec.rho;
  Mat U(n, 1), V(n, 1);
  for (Index i = 0; i < n; ++i) {
    U(i, 0) = std::pow(lam * rho, grid[i]);
    V(i, 0) = spec.family == KernelSpec::Family::TC ? 1.0 : std::pow(lam / rho, grid[i]);
  }
  return GRMatrix(std::move(U), std::move(V));
}

GvRMatrix kernel_gvr(const KernelSpec& spec, const TimeGrid& grid) {
  spec.validate();
  const Index n = grid.size();
  const Vec& t = grid.t();
  const bool geo = grid.equispaced();
  const double T = grid.step();
  if (spec.family == KernelSpec::Family::SS) {
    const double lr = std::log(spec.rho);
    Mat C(n, 2), S(n, 2), nu(n, 2);
    const Vec r3 = (3.0 * lr * t).array().exp();
    const Vec numu1 = r3 / 6.0, numu2 = r3 / 2.0;
    if (geo) {
      fill_column_geometric(C, S, nu, 0, 3.0 * T * lr, -1.0, numu1);
      fill_column_geometric(C, S, nu, 1, 2.0 * T * lr, 1.0, numu2);
    } else {
      fill_column(C, S, nu, 0, (3.0 * lr * t).array() - std::log(6.0), -1.0, numu1);
      fill_column(C, S, nu, 1, (2.0 * lr * t).array() - std::log(2.0), 1.0, numu2);
    }
    return GvRMatrix(std::move(C), std::move(S), std::move(nu));
  }
  const double lam = spec.dc_lambda(), rho = spec.rho;
  const double llr = std::log(lam * rho);
  Mat C(n, 1), S(n, 1), nu(n, 1);
  const Vec numu = (2.0 * std::log(lam) * t).array().exp();
  if (geo)
    fill_column_geometric(C, S, nu, 0, T * llr, 1.0, numu);
  else
    fill_column(C, S, nu, 0, llr * t, 1.0, numu);
  return GvRMatrix(std::move(C), std::move(S), std::move(nu));
}

GRMatrix output_kernel_gr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  const auto pc = output_pieces(spec, input, grid);
  const Index n = grid.size();
  Mat U(n, 2), V(n, 2);
  for (Index i = 0; i < n; ++i) {
    U(i, 0) = std::exp(pc.lmu1[i]);
    U(i, 1) = std::exp(-input.alpha * grid[i]);
    V(i, 0) = std::exp(pc.lnu1[i]);
    V(i, 1) = pc.nu2[i];
  }
  return GRMatrix(std::move(U), std::move(V));
}

namespace {

// DT lower part in the basis mu_1 = (lambda rho)^t, mu_2 = exp(-alpha t), which spans the same
// space as the closed-form generators. The products mu_k(s) nu_k(s) come from positive
// recursions over s = 0..t_N:
//   V(s)  = sum_{b<=s} K(s,b) u(s-b)
//   Pd(s) = Psi(s,s)
//   E(s)  = sum_{k<b<=s} u(s-k) u(s-b) lambda^{k+b} (rho^{k-b} - rho^{b-k})
// so no entry is formed as a difference of exponentially large terms.
GvRMatrix output_kernel_gvr_dt(const KernelSpec& spec, double al, const TimeGrid& grid) {
  const double lam = spec.dc_lambda(), rho = spec.rho;
  const auto k = output_kernel_constants(lam, rho, al);
  const Index n = grid.size();
  for (Index i = 0; i < n; ++i)
    if (grid[i] < 0.0 || grid[i] != std::floor(grid[i]))
      throw ValidationError("DT output kernel needs non-negative integer times");
  const auto smax = static_cast<long>(grid[n - 1]);

  const double ea = std::exp(-al), lr = lam * rho, l2 = lam * lam;
  const double em1 = std::expm1(k.T), eT = std::exp(k.T);
  Vec numu1(n), numu2(n);
  double V = 1.0, Pd = 1.0, E = 0.0, X = 0.0, Y = 0.0, l2s = 1.0;
  Index i = 0;
  for (long s = 0; s <= smax; ++s) {
    if (s > 0) {
      X = lam / rho * ea * (X + l2s);
      Y = lr * ea * (Y + l2s);
      l2s *= l2;
      V = lr * ea * V + l2s;
      Pd = ea * ea * Pd + l2s + 2.0 * Y;
      E = ea * ea * E + (X - Y);
    }
    if (static_cast<double>(s) == grid[i]) {
      const double b = V * eT / em1;
      numu1[i] = b;
      numu2[i] = k.T < 0.0 ? Pd - b : -E - V * std::exp(-k.T * static_cast<double>(s)) / em1;
      ++i;
    }
  }
  Mat C(n, 2), S(n, 2), nu(n, 2);
  fill_column(C, S, nu, 0, std::log(lr) * grid.t(), 1.0, numu1);
  fill_column(C, S, nu, 1, -al * grid.t(), 1.0, numu2);
  return GvRMatrix(std::move(C), std::move(S), std::move(nu));
}

}  // namespace

GvRMatrix output_kernel_gvr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  if (input.domain == Domain::DT) {
    require_exponential_dc(spec, input);
    return output_kernel_gvr_dt(spec, input.alpha, grid);
  }
  const auto pc = output_pieces(spec, input, grid);
  if (!std::isfinite(pc.lmu1.minCoeff()))
    throw ValidationError("closed-form output-kernel GvR needs t > 0 in continuous time");
  const Index n = grid.size();
  Mat C(n, 2), S(n, 2), nu(n, 2);
  const Vec numu1 = (pc.lmu1 + pc.lnu1).array().exp();
  fill_column(C, S, nu, 0, pc.lmu1, 1.0, numu1);
  fill_column(C, S, nu, 1, -input.alpha * grid.t(), 1.0, pc.nu2mu2);
  return GvRMatrix(std::move(C), std::move(S), std::move(nu));
}

GRMatrix output_gr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  if (input.kind == InputSignal::Kind::UnitImpulse) return kernel_gr(spec, grid);
  return output_kernel_gr(spec, input, grid);
}

GvRMatrix output_gvr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid) {
  if (input.kind == InputSignal::Kind::UnitImpulse) return kernel_gvr(spec, grid);
  return output_kernel_gvr(spec, input, grid);
}

}  // namespace gvr
