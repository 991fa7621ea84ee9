#include "uam/core/errors.hpp"
#include "uam/model.hpp"
#include "uam/rouche.hpp"

#include <doctest.h>

#include <cmath>

using namespace uam;

TEST_CASE("closed disks count boundary points") {
  const DiskSpec d{0.0, 0.5, DiskLabel::Custom};
  ComplexVector v(3);
  v << 0.5, Complex(0.0, 0.49), 0.51;
  CHECK(d.count(v) == 2);
}

TEST_CASE("uniform disk radii") {
  const Complex w(1.3, -0.4);
  const Index n = 400;
  const double t = std::pow(400.0, -0.75), eps = 0.1;
  const DiskFamily f = uniform_disks(w, n, t, eps);
  const Complex zt = expected_outlier_location(w, n, t);
  CHECK(std::abs(f.d1.center - zt) < 1e-15);
  CHECK(f.d1.radius == doctest::Approx(std::norm(zt) * std::pow(400.0, eps)));
  CHECK(f.d2.radius == doctest::Approx(std::pow(400.0, -eps)));
  CHECK(f.d3.radius == doctest::Approx(std::max(0.0, 1.0 - std::pow(400.0, eps) / std::abs(zt))));
  const DiskFamily g = theorem_disks(w, n, t, eps);
  CHECK(g.d1.radius == doctest::Approx(f.d1.radius / std::abs(w)));
  CHECK_THROWS_AS(uniform_disks(w, n, 1.0, eps), Error);
}

TEST_CASE("a Rouche certificate predicts the actual eigenvalue count") {
  std::size_t certified = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const UAModel m = UAModel::sample_cue(60, RngStream{61, s});
    for (double t : {0.002, 0.01, 0.05}) {
      const Complex zt = expected_outlier_location(m, t);
      const Complex w = omega1(m);
      if (std::abs(zt) > 0.9) continue;
      for (double scale : {0.5, 2.0, 4.0}) {
        const DiskSpec disk{zt, scale * std::norm(zt) / std::abs(w), DiskLabel::Custom};
        const RoucheCertificate c = rouche_certificate(m, t, disk);
        if (!c.holds) continue;
        ++certified;
        CHECK(c.predicted == 1);
        CHECK(disk.count(spectrum(m, t).eigenvalues) == c.predicted);
      }
    }
  }
  CHECK(certified > 20);
}

TEST_CASE("classification of a constructed snapshot") {
  const Complex w(1.0, 0.0);
  const Index n = 100;
  const double t = 1e-3;
  const DiskFamily f = uniform_disks(w, n, t, 0.1);
  SpectrumSnapshot s;
  s.t = t;
  s.eigenvalues = ComplexVector::Constant(n, std::polar(0.999, 0.3));
  s.eigenvalues(0) = f.d1.center;
  const SeparationReport r = classify_snapshot(s, f, 0.6);
  CHECK(r.counts.inside_d1 == 1);
  CHECK(r.counts.inside_d2 == 1);
  CHECK(r.subcritical_pass);
}

TEST_CASE("supercritical guard") {
  CHECK(supercritical_guard(1.0, 100, 0.5));
  CHECK_FALSE(supercritical_guard(1.0, 100, 0.1));
  CHECK_FALSE(supercritical_guard(6.0, 100, 0.9));
}
