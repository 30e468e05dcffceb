// A short tour on the smallest algebra (k = 1, m = 2): group law, spherical
// functions by two routes, the projection-slice identity and one deconvolution.
#include <iomanip>
#include <iostream>

#include "hna/hna.hpp"

int main() {
  using namespace hna;
  const auto alg = build_htype(1, 1);
  std::cout << "algebra: m=" << alg.m() << " k=" << alg.k() << " n=" << alg.n() << " Q=" << alg.Q() << "\n";

  const NAPoint p = NAPoint::from_a(Vec::Constant(2, 0.3), Vec::Constant(1, -0.2), 1.5);
  const NAPoint q = inverse(alg, p);
  std::cout << std::setprecision(12) << "d(p, e) = " << distance_to_origin(alg, p)
            << ", d(p p^-1, e) = " << distance_to_origin(alg, multiply(alg, p, q)) << "\n";

  for (double r : {0.5, 1.0, 2.0}) {
    const cplx series = spherical_phi(alg, 2.0, r);
    const cplx koornwinder = koornwinder_phi(alg, 2.0, r);
    std::cout << "phi_2(" << r << ") = " << series.real() << "  (Koornwinder route differs by "
              << std::abs(series - koornwinder) << ")\n";
  }

  const auto f = RadialFunction::bump(1.0);
  const std::vector<cplx> lams{0.0, 2.0, 6.0};
  const auto sph = spherical_transform_radial(alg.dims(), f, lams);
  const auto ft = abel_fourier(alg.dims(), f, lams);
  for (std::size_t i = 0; i < lams.size(); ++i)
    std::cout << "lambda " << lams[i].real() << ": spherical " << sph[i].real() << ", via Abel " << ft[i].real() << "\n";

  QuadratureSpec spec;
  spec.sphere_nodes = 20000;
  const auto sphere = SphereRule::for_spec(alg.n(), spec);
  const auto g = mean_value_target(alg, f, 1.0, sphere);
  const auto res = solve(alg, DeconvolutionProblem::make(alg.dims(), g, 1.0), sphere);
  std::cout << "deconvolution of M_1: relative residual " << res.residual_rel << " using " << res.zeros
            << " zeros of phi_lambda(1) as panel breaks\n";
}
