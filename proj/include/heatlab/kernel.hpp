#ifndef HEATLAB_KERNEL_HPP
#define HEATLAB_KERNEL_HPP

// Periodic heat kernel on the torus T^n and the waveguide T^n x R^m.
//
// Two representations of the same function, exchanged by Poisson summation:
//
//   phi_t(x) = (4 pi t)^(-n/2) SUM_{k in Z^n} exp(-|x+k|^2 / (4t))       (wrapped Gaussian)
//            = SUM_{l in Z^n} exp(2 pi i l.x) exp(-4 pi^2 |l|^2 t)       (theta series)
//
// The wrapped-Gaussian form is the defining one; the theta series uses
// period-1 characters so both sides agree on Q_n = [-1/2,1/2)^n. The
// Gaussian sum converges fast for small t, the theta series for large t.
// Every evaluation carries a certified absolute truncation bound.

#include <utility>

#include "heatlab/point.hpp"

namespace heatlab {

enum class Representation { Auto, GaussianSum, FourierSum };

struct KernelConfig {
    double tol = 1e-12;              // absolute truncation tolerance
    double switch_t = 0.15915494309189535;  // 1/(2 pi): near-equal term counts
    Representation representation = Representation::Auto;
};

/** Kernel value with a certified absolute truncation error bound. */
struct KernelValue {
    double value = 0.0;
    double error_bound = 0.0;
};

// Wrapped-Gaussian sum over the box |k_i| <= K, K chosen so the certified
// tail (per-axis geometric domination) stays below tol. Lexicographic
// traversal with compensated accumulation; bit-reproducible.
// Throws NonPositiveTime, ToleranceTooTight.
KernelValue eval_gaussian(const TorusPoint& x, Time t, double tol);

// Theta series in the real cosine form, each l paired with -l per axis:
//   per axis  1 + 2 SUM_{l=1..L} exp(-4 pi^2 l^2 t) cos(2 pi l x_i),
// multiplied across axes (the symmetric box sum factorizes exactly).
// Throws NonPositiveTime, ToleranceTooTight.
KernelValue eval_fourier(const TorusPoint& x, Time t, double tol);

// Dispatch: GaussianSum when t < cfg.switch_t, FourierSum otherwise
// (tie at t == switch_t goes to Fourier), unless cfg forces one.
KernelValue eval(const TorusPoint& x, Time t, const KernelConfig& cfg = {});

// Waveguide kernel phi_t^WG(x,y) = phi_t(x) * (4 pi t)^(-m/2) exp(-|y|^2/(4t)).
// The torus factor's error bound propagates through the Gaussian factor.
KernelValue eval_waveguide(const WaveguidePoint& z, Time t, const KernelConfig& cfg = {});

// Closed-form sandwich on Q_n:
//   (4 pi t)^(-n/2) e^{-|x|^2/4t}  <=  phi_t(x)  <=  2^n (1+sqrt(pi/t))^n e^{-|x|^2/4t}.
double lower_bound(const TorusPoint& x, Time t);
double upper_bound(const TorusPoint& x, Time t);

// Waveguide sandwich: lower = (4 pi t)^(-(n+m)/2) e^{-(|x|^2+|y|^2)/4t},
// upper = 2^n (1+sqrt(pi/t))^n (4 pi t)^(-m/2) e^{-(|x|^2+|y|^2)/4t}.
std::pair<double, double> waveguide_bounds(const WaveguidePoint& z, Time t);

// Near/far decomposition used by the heat-maximal domination argument:
//   phi_t^1 = phi_t * indicator(|x| <= sqrt(2nR)),   phi_t^2 = phi_t - phi_t^1.
// Exactly one component is nonzero at every x. Requires 0 < t < R < 1/2.
std::pair<double, double> split(const TorusPoint& x, Time t, double R,
                                const KernelConfig& cfg = {});

// Mass of phi_t outside the ball of radius delta:
//   integral of phi_t over { x in Q_n : |x| >= delta },
// by adaptive quadrature with error estimate <= tol. delta = 0 gives the
// total mass (= 1). Supported n: 1 and 2. Throws InvalidDelta when
// delta < 0 or delta >= sqrt(n)/2.
double tail_mass(int n, double delta, Time t, double tol);

}  // namespace heatlab

#endif
