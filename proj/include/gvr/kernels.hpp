#pragma once

#include "gvr/repkit.hpp"

namespace gvr {

// Scale c is fixed to 1; gamma absorbs sigma^2 / c.
struct KernelSpec {
  enum class Family { DC, TC, SS };
  Family family = Family::DC;
  double lambda = 1.0;  // DC only; TC is DC with lambda = rho
  double rho = 0.5;

  static KernelSpec dc(double lambda, double rho);
  static KernelSpec tc(double rho);
  static KernelSpec ss(double rho);

  void validate() const;
  // Effective DC decay (rho for TC).
  double dc_lambda() const { return family == Family::TC ? rho : lambda; }
};

enum class Domain { DT, CT };

struct InputSignal {
  enum class Kind { UnitImpulse, Exponential };
  Kind kind = Kind::UnitImpulse;
  double alpha = 0.0;  // u(t) = exp(-alpha t)
  Domain domain = Domain::DT;

  static InputSignal impulse(Domain d = Domain::DT);
  static InputSignal exponential(double alpha, Domain d = Domain::DT);

  double operator()(double t) const;
};

// Constants of the exponential-input output kernel with a DC kernel.
struct OutputKernelConstants {
  double T, D;    // log(lambda rho) + alpha, log(lambda / rho) + alpha
  double Tp, Dp;  // 1 - e^T, 1 - e^D
  double C;       // log rho / (log lambda + alpha)
  double Cp;      // (e^D - e^T) / (1 - e^{D+T})
};

// Throws NearDegenerateParameters when |T| or |D| < 1e-10.
OutputKernelConstants output_kernel_constants(double lambda, double rho, double alpha);

double kernel_value(const KernelSpec& spec, double t, double s);

GRMatrix kernel_gr(const KernelSpec& spec, const TimeGrid& grid);
GvRMatrix kernel_gvr(const KernelSpec& spec, const TimeGrid& grid);

// DC (or TC) kernel with exponential input; CT or DT per input.domain.
GRMatrix output_kernel_gr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid);
GvRMatrix output_kernel_gvr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid);

// Psi for any supported (kernel, input): the kernel matrix itself for a unit impulse.
GRMatrix output_gr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid);
GvRMatrix output_gvr(const KernelSpec& spec, const InputSignal& input, const TimeGrid& grid);

}  // namespace gvr
