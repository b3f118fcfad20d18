#pragma once

#include <functional>

#include "cfm/measure.hpp"

namespace cfm {

/// alpha-th absolute moment of the law with characteristic function exp(-|xi|^p) on R^d.
/// Finite for 0 <= alpha < p when p < 2 and for all alpha >= 0 when p = 2.
double ep_moment(double p, double alpha, int d);

/// Leading behaviour of ep_moment as alpha -> p from below.
double ep_moment_singularity(double p, double alpha, int d);

/// Moments of exp(-t |xi|^p), i.e. of t^{1/p} times the standard law.
double stable_moment(double p, double t, double alpha, int d);
double gaussian_moment(double t, double alpha, int d);

/// Density of exp(-|xi|^p) at a point of norm v (closed forms for p = 1, 2; power series otherwise).
double ep_density(double p, double v, int d, int terms = 80);

/// Power series for the density; throws SeriesDivergence when the terms have not started to decay.
double ep_density_series(double p, double v, int d, int terms);

/// lim |v|^{d+p} ep_density(p, v, d) as |v| -> inf, for 0 < p < 2.
double bg_tail_constant(double p, int d);

/// Absolute moment of the law with characteristic function (1 + |xi|^p)^{-beta}.
double linnik_moment(double p, double beta, double alpha, int d = 1);

/// Moment of the scale mixture sum_j w_j exp(-t_j |xi|^p).
double schoenberg_moment(const DiscreteMeasure& nu, double p, double alpha, int d);

/// Moments of the positive Mittag-Leffler law with Laplace transform (1 + s^delta)^{-1}.
double mittag_leffler_moment(double delta, double alpha);
/// Same for the Mittag-Leffler process at time t, Laplace transform (1 + s^delta)^{-t}.
double ml_process_moment(double delta, double t, double alpha);

/// n equal-weight atoms at the midpoint quantiles (j + 1/2)/n of a law on [0, inf).
DiscreteMeasure quantile_grid(const std::function<double(double)>& quantile, int n);
DiscreteMeasure gamma_quantile_atoms(double shape, int n);

}  // namespace cfm
