#include <doctest.h>

#include "torus/maps.hpp"
#include "torus/random.hpp"

#include <cmath>
#include <stdexcept>

using namespace torus;

namespace {

Torus2Params<double> catalogue_at(int id, double eps, double w1, double w2) {
  return parameter_catalog(id).with(eps, Eigen::Vector2d(w1, w2));
}

}  // namespace

TEST_CASE("wrap_unit reduces into [0,1)") {
  CHECK(wrap_unit(0.25) == 0.25);
  CHECK(wrap_unit(1.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(wrap_unit(-0.25) == 0.75);
  CHECK(wrap_unit(3.0) == 0.0);
  CHECK(wrap_unit(-1e-300) < 1.0);
  const Eigen::Vector2d v = wrap_unit(Eigen::Vector2d(-0.5, 2.75));
  CHECK(v(0) == 0.5);
  CHECK(v(1) == 0.75);
}

TEST_CASE("circle map: displacement is periodic and the lift commutes with integer shifts") {
  const CircleMap<double> map({0.3, 0.8});
  UniformSampler rng(11);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.half_open_unit();
    for (int m : {-3, -1, 1, 5}) {
      const Eigen::Matrix<double, 1, 1> a(x), b(x + m);
      CHECK(std::abs(map.displacement(b)(0) - map.displacement(a)(0)) < 1e-14);
      CHECK(std::abs(map.lift_step(b)(0) - m - map.lift_step(a)(0)) < 1e-14);
    }
  }
}

TEST_CASE("circle map: derivative matches central differences") {
  const CircleMap<double> map({0.1, 1.7});
  const double h = 1e-6;
  UniformSampler rng(2);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.half_open_unit();
    const double fd = (map.lift_step(Eigen::Matrix<double, 1, 1>(x + h))(0) -
                       map.lift_step(Eigen::Matrix<double, 1, 1>(x - h))(0)) / (2 * h);
    CHECK(std::abs(fd - map.derivative(x)) < 1e-5);
  }
}

TEST_CASE("torus map: forcing written out term by term") {
  const auto p = catalogue_at(0, 1.3, 0.2, 0.7);
  const Torus2Map<double> map(p);
  UniformSampler rng(3);
  const double tp = 2 * M_PI;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d x(rng.half_open_unit(), rng.half_open_unit());
    const auto& a = p.amps;
    const auto& f = p.phases;
    const double g1 = p.eps / tp * (a(0) * std::cos(tp * (x(0) + f(0))) + a(1) * std::cos(tp * (x(1) + f(1))));
    const double g2 = p.eps / tp * (a(2) * std::cos(tp * (x(0) + f(2))) + a(3) * std::cos(tp * (x(1) + f(3))));
    const Eigen::Vector2d g = map.forcing(x);
    CHECK(std::abs(g(0) - g1) < 1e-14);
    CHECK(std::abs(g(1) - g2) < 1e-14);
  }
}

TEST_CASE("torus map: periodicity and lift consistency") {
  for (int id = 0; id < catalog_size; ++id) {
    const Torus2Map<double> map(catalogue_at(id, 2.0, 0.31, 0.77));
    UniformSampler rng(static_cast<std::uint64_t>(id) + 100);
    for (int i = 0; i < 50; ++i) {
      const Eigen::Vector2d x(rng.half_open_unit(), rng.half_open_unit());
      const Eigen::Vector2d m(2.0, -3.0);
      CHECK((map.displacement(x + m) - map.displacement(x)).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((map.lift_step(x + m) - m - map.lift_step(x)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("torus map: Jacobian matches central differences for every catalogue case") {
  const double h = 1e-6;
  for (int id = 0; id < catalog_size; ++id) {
    const Torus2Map<double> map(catalogue_at(id, 1.7, 0.4, 0.9));
    UniformSampler rng(static_cast<std::uint64_t>(id) + 1);
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d x(rng.half_open_unit(), rng.half_open_unit());
      Eigen::Matrix2d fd;
      for (int j = 0; j < 2; ++j) {
        const Eigen::Vector2d e = Eigen::Vector2d::Unit(j) * h;
        fd.col(j) = (map.lift_step(x + e) - map.lift_step(x - e)) / (2 * h);
      }
      const Eigen::Matrix2d jac = map.jacobian(x);
      CHECK((fd - jac).cwiseAbs().maxCoeff() < 1e-5);
      CHECK(std::abs(map.jacobian_determinant(x) - jac.determinant()) < 1e-13);
    }
  }
}

TEST_CASE("torus map: eps = 0 is a rigid rotation") {
  const Torus2Map<double> map(catalogue_at(3, 0.0, 0.25, 0.5));
  const Eigen::Vector2d x(0.9, 0.1);
  CHECK(map.forcing(x).isZero(0.0));
  CHECK(map.jacobian(x) == Eigen::Matrix2d::Identity());
}

TEST_CASE("orbit iteration telescopes on the universal cover") {
  const Torus2Map<double> map(catalogue_at(0, 0.8, 0.84, 0.835));
  Eigen::Vector2d lifted(0.3, 0.6);
  Eigen::Vector2d x = lifted;
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for_each_displacement(map, x, 1000, [&](std::size_t, const Eigen::Vector2d& d) { total += d; });
  for (int t = 0; t < 1000; ++t) lifted = map.lift_step(lifted);
  CHECK((total - (lifted - Eigen::Vector2d(0.3, 0.6))).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((x - wrap_unit(lifted)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("iterate_displacements skips the transient and yields exactly T values") {
  const CircleMap<double> map({0.2, 0.5});
  OrbitSpec<double, 1> spec;
  spec.transient = 7;
  spec.length = 13;
  std::size_t calls = 0;
  const auto start = iterate_displacements(map, spec, [&](std::size_t t, const auto&) { CHECK(t == calls++); });
  CHECK(calls == 13);
  CHECK(start(0) == advance(map, spec.x0, 7)(0));
}

TEST_CASE("catalogue: unit l1 amplitudes, reduced phases, unknown ids rejected") {
  for (int id = 0; id < catalog_size; ++id) {
    const auto p = parameter_catalog(id);
    CHECK(std::abs(p.amps.lpNorm<1>() - 1.0) < 1e-12);
    CHECK((p.amps.array() >= 0.0).all());
    CHECK_NOTHROW(p.validate());
  }
  CHECK(parameter_catalog(4).amps(1) == 0.0);
  CHECK(parameter_catalog(5).amps(0) == 0.0);
  CHECK(parameter_catalog(7).amps(2) == 0.0);
  CHECK_THROWS_AS(parameter_catalog(-1), std::invalid_argument);
  CHECK_THROWS_AS(parameter_catalog(catalog_size), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  auto p = catalogue_at(0, 1.0, 0.5, 0.5);
  CHECK_NOTHROW(p.validate());
  p.omega(0) = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = catalogue_at(0, -0.1, 0.5, 0.5);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = catalogue_at(0, 1.0, 0.5, 0.5);
  p.amps(0) += 0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.normalize_amplitudes();
  CHECK_NOTHROW(p.validate());
  p.phases(2) = 1.25;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.reduce_phases();
  CHECK(p.phases(2) == 0.25);
  CHECK_THROWS_AS((CircleParams<double>{0.5, -1.0}.validate()), std::invalid_argument);
  OrbitSpec<double, 2> spec;
  spec.length = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("plain-text parameters round-trip exactly") {
  for (int id = 0; id < catalog_size; ++id) {
    const auto p = catalogue_at(id, 2.345678901234567, 0.1, 0.987654321);
    const auto q = torus_params_from_config(to_config(p));
    CHECK(q.omega == p.omega);
    CHECK(q.eps == p.eps);
    CHECK(q.amps == p.amps);
    CHECK(q.phases == p.phases);
  }
  const CircleParams<double> c{0.123456789, 0.8};
  const auto d = circle_params_from_config(to_config(c));
  CHECK(d.omega == c.omega);
  CHECK(d.a == c.a);

  CHECK_THROWS_AS(torus_params_from_config("bogus = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(torus_params_from_config("eps = abc\n"), std::invalid_argument);
  const auto r = torus_params_from_config("# comment\neps = 0.5\nphi1 = 1.5\n");
  CHECK(r.eps == 0.5);
  CHECK(r.phases(0) == 0.5);
  CHECK(format_real(0.1) == "0.10000000000000001");
}
