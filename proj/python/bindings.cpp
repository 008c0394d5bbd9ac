#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "mhdrelax/dynamics.hpp"
#include "mhdrelax/experiments.hpp"
#include "mhdrelax/init.hpp"
#include "mhdrelax/lorentz.hpp"
#include "mhdrelax/operators.hpp"
#include "mhdrelax/stokes.hpp"
#include "mhdrelax/verify.hpp"

namespace py = pybind11;
using namespace mhdrelax;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v, int n) {
  Array out({n, n});
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

py::tuple to_arrays(const VectorField& v) {
  return py::make_tuple(to_array(v.x.to_physical(), v.n()), to_array(v.y.to_physical(), v.n()));
}

int side_of(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square 2-D array");
  return static_cast<int>(a.shape(0));
}

SpectralField scalar_from(const Array& a) {
  const int n = side_of(a);
  return SpectralField::from_physical(TorusGrid(n), std::span<const double>(a.data(), a.size()));
}

VectorField field_from(const Array& bx, const Array& by) {
  if (side_of(bx) != side_of(by)) throw std::invalid_argument("component shapes differ");
  return VectorField(scalar_from(bx), scalar_from(by));
}

py::dict ratio_dict(const lorentz::InequalityRatioReport& r) {
  py::dict d;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["ratio"] = r.ratio;
  return d;
}

}  // namespace

PYBIND11_MODULE(mhdrelax, m) {
  m.doc() = "Spectral Stokes-MHD relaxation on the unit torus. Fields are (n, n) arrays indexed [x, y].";

  py::register_exception<dynamics::CflViolation>(m, "CflViolation", PyExc_RuntimeError);
  py::register_exception<dynamics::NonFiniteState>(m, "NonFiniteState", PyExc_FloatingPointError);
  py::register_exception<lorentz::DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);

  m.def("taylor_green", [](int n) { return to_arrays(taylor_green(TorusGrid(n))); }, py::arg("n"));
  m.def(
      "random_sobolev",
      [](int n, std::uint64_t seed, double exponent, double amplitude) {
        return to_arrays(random_sobolev(TorusGrid(n), seed, exponent, amplitude));
      },
      py::arg("n"), py::arg("seed"), py::arg("exponent") = 1.5, py::arg("amplitude") = 1.0);

  m.def(
      "leray_project", [](const Array& bx, const Array& by) { return to_arrays(leray_project(field_from(bx, by))); },
      py::arg("bx"), py::arg("by"));
  m.def(
      "is_divergence_free", [](const Array& bx, const Array& by) { return is_divergence_free(field_from(bx, by)); },
      py::arg("bx"), py::arg("by"));
  m.def(
      "sobolev_norm",
      [](const Array& bx, const Array& by, double s) { return sobolev_norm(field_from(bx, by), SobolevIndex(s)); },
      py::arg("bx"), py::arg("by"), py::arg("s") = 0.0);

  m.def(
      "velocity_from_B",
      [](const Array& bx, const Array& by, double nu) {
        return to_arrays(stokes::velocity_from_B(field_from(bx, by), nu).u);
      },
      py::arg("bx"), py::arg("by"), py::arg("nu") = 1.0, "Stokes velocity driven by the Lorentz force (B.grad)B.");

  m.def(
      "weak_lp_quasinorm",
      [](const Array& f, double p) {
        const int n = side_of(f);
        return lorentz::weak_lp_quasinorm(std::span<const double>(f.data(), f.size()), 1.0 / (double(n) * n), p)
            .value;
      },
      py::arg("f"), py::arg("p"));
  m.def(
      "inverse_radius_samples", [](int n) { return to_array(lorentz::inverse_radius_samples(n), n); },
      py::arg("n"));
  m.def(
      "check_ladyzhenskaya", [](const Array& f) { return ratio_dict(lorentz::check_ladyzhenskaya(scalar_from(f))); },
      py::arg("f"));

  m.def(
      "greens_bound_sweep",
      [](double nu, std::size_t points, std::uint64_t seed) {
        const auto r = verify::greens_bound_sweep(nu, points, seed);
        py::dict d;
        d["worst_scaled"] = r.worst_scaled;
        d["violations"] = r.violations;
        d["evaluated"] = r.evaluated;
        return d;
      },
      py::arg("nu"), py::arg("points") = 10000, py::arg("seed") = 1);

  m.def(
      "integrate",
      [](const Array& bx, const Array& by, double nu, double eta, double dt, double t_end, int ledger_every) {
        const VectorField B = field_from(bx, by);
        dynamics::GalerkinConfig cfg;
        cfg.n = B.n();
        cfg.nu = nu;
        cfg.eta = eta;
        cfg.dt = dt;
        cfg.t_end = t_end;
        cfg.ledger_every = ledger_every;
        std::optional<dynamics::IntegrationResult> result;
        {
          py::gil_scoped_release release;
          result = dynamics::integrate(FlowState(0.0, B, nu, eta), cfg);
        }
        const auto& r = *result;
        py::dict ledger;
        ledger["t"] = r.ledger.t;
        ledger["energy_B"] = r.ledger.energy_B;
        ledger["dissipation_u"] = r.ledger.dissipation_u;
        ledger["dissipation_B"] = r.ledger.dissipation_B;
        ledger["balance_residual"] = r.ledger.balance_residual;
        ledger["max_u"] = r.ledger.max_u;
        ledger["dt"] = r.ledger.dt;
        auto fields = to_arrays(r.state.B);
        return py::make_tuple(fields[0], fields[1], ledger);
      },
      py::arg("bx"), py::arg("by"), py::arg("nu"), py::arg("eta"), py::arg("dt"), py::arg("t_end"),
      py::arg("ledger_every") = 1, "Evolves B from t = 0 to t_end; returns (bx, by, ledger).");

  m.def(
      "dBdt_bound_ratio",
      [](const Array& bx, const Array& by, double nu, double eta) {
        return dynamics::dBdt_hminus1_bound_check(FlowState(0.0, field_from(bx, by), nu, eta));
      },
      py::arg("bx"), py::arg("by"), py::arg("nu") = 1.0, py::arg("eta") = 0.1);

  m.def(
      "hs_product_ratio",
      [](const Array& ux, const Array& uy, const Array& vx, const Array& vy, int s) {
        return ratio_dict(experiments::check_hs_product_inequality(field_from(ux, uy), field_from(vx, vy), s));
      },
      py::arg("ux"), py::arg("uy"), py::arg("vx"), py::arg("vy"), py::arg("s") = 2);

  m.def(
      "verify_suite",
      [](const std::string& suite, int n, std::uint64_t first, std::uint64_t last) {
        verify::SuiteResult r;
        {
          py::gil_scoped_release release;
          r = verify::run_suite(suite, n, verify::SeedRange{first, last});
        }
        return py::make_tuple(r.maxima, r.residuals, r.hard_failures);
      },
      py::arg("suite"), py::arg("n"), py::arg("first"), py::arg("last"),
      "(ratio maxima, exactness-defect maxima, violated invariants) over the seed range.");
}
