#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "relaxcat/config.hpp"
#include "relaxcat/errors.hpp"
#include "relaxcat/harness.hpp"
#include "relaxcat/stability.hpp"

namespace py = pybind11;
using namespace relaxcat;

namespace {

py::dict field_to_dict(const CellField& field, const Model& model) {
  const int n = field.size();
  py::array_t<double> x(n);
  auto xs = x.mutable_unchecked<1>();
  for (int i = 0; i < n; ++i) xs(i) = field.grid().center(i);
  py::dict out;
  out["x"] = x;
  const auto names = model.component_names();
  for (int k = 0; k < field.dim(); ++k) {
    py::array_t<double> col(n);
    auto c = col.mutable_unchecked<1>();
    for (int i = 0; i < n; ++i) c(i) = field[i][k];
    out[py::str(names[static_cast<std::size_t>(k)])] = col;
  }
  out["t"] = field.time;
  return out;
}

SchemeConfig make_scheme(const TestCase& tc, const std::string& scheme, std::optional<double> cfl,
                         std::optional<double> mood_eps1, std::optional<double> mood_eps2) {
  RunConfig cfg;
  cfg.cfl = cfl;
  cfg.mood_eps1 = mood_eps1;
  cfg.mood_eps2 = mood_eps2;
  return resolve_scheme(cfg, scheme, tc);
}

}  // namespace

PYBIND11_MODULE(_relaxcat, m) {
  m.doc() = "Semi-implicit CAT2, MOOD and IMEX-RK2 finite-volume solvers for relaxation systems";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<RunError>(m, "RunError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("list_cases", [] {
    std::vector<std::string> names;
    for (const auto& tc : registry()) names.push_back(tc.name);
    return names;
  });

  m.def(
      "initial_field",
      [](const std::string& case_name, int n_cells) {
        const TestCase& tc = find_case(case_name);
        return field_to_dict(initial_field(tc, n_cells), *tc.make_model());
      },
      py::arg("case"), py::arg("n_cells"));

  m.def(
      "run",
      [](const std::string& case_name, const std::string& scheme, int n_cells, double eps,
         std::optional<double> cfl, std::optional<double> t_final,
         std::optional<double> mood_eps1, std::optional<double> mood_eps2) {
        const TestCase& tc = find_case(case_name);
        const SchemeConfig s = make_scheme(tc, scheme, cfl, mood_eps1, mood_eps2);
        RunOptions opt;
        opt.n_cells = n_cells;
        opt.eps = eps;
        opt.t_final = t_final;
        RunReport rep;
        {
          py::gil_scoped_release release;
          rep = run(tc, s, opt);
        }
        py::dict out = field_to_dict(rep.final_field, *tc.make_model());
        out["steps"] = rep.step_count();
        out["mood_steps"] = rep.mood_activations();
        out["flagged_cells"] = rep.flagged_cells();
        out["wall_seconds"] = rep.wall_seconds;
        std::vector<double> dts;
        for (const auto& r : rep.steps) dts.push_back(r.dt);
        out["dt"] = dts;
        return out;
      },
      py::arg("case"), py::arg("scheme"), py::arg("n_cells"), py::arg("eps"),
      py::arg("cfl") = py::none(), py::arg("t_final") = py::none(),
      py::arg("mood_eps1") = py::none(), py::arg("mood_eps2") = py::none());

  m.def(
      "convergence",
      [](const std::string& case_name, const std::vector<std::string>& schemes,
         const std::vector<int>& grids, const std::vector<double>& eps, int n_fine,
         bool self_reference, std::optional<double> cfl, bool use_cache) {
        const TestCase& tc = find_case(case_name);
        std::vector<SchemeConfig> cfgs;
        for (const auto& s : schemes) cfgs.push_back(make_scheme(tc, s, cfl, {}, {}));
        ReferenceSpec ref;
        ref.n_fine = n_fine;
        ref.self_reference = self_reference;
        ref.use_cache = use_cache;
        EocTable table;
        {
          py::gil_scoped_release release;
          table = eoc_study(tc, cfgs, grids, eps, ref);
        }
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict d;
          d["scheme"] = r.scheme;
          d["eps"] = r.eps;
          d["N"] = r.n_cells;
          d["l1_error"] = r.l1_error;
          d["eoc"] = r.eoc ? py::object(py::float_(*r.eoc)) : py::object(py::none());
          rows.append(d);
        }
        return rows;
      },
      py::arg("case"), py::arg("schemes"), py::arg("grids"), py::arg("eps"),
      py::arg("n_fine") = 4096, py::arg("self_reference") = false, py::arg("cfl") = py::none(),
      py::arg("use_cache") = true);

  m.def(
      "ode_amplification",
      [](const std::string& scheme, double z) {
        return ode_amplification(analysis_scheme_from_string(scheme), z);
      },
      py::arg("scheme"), py::arg("z"));

  m.def(
      "fourier_symbol",
      [](const std::string& scheme, double mu, double a, double eps, double k_dx, double dx) {
        const Symbol g = fourier_symbol({analysis_scheme_from_string(scheme), mu, a, eps, k_dx}, dx);
        return std::vector<std::vector<std::complex<double>>>{{g[0][0], g[0][1]}, {g[1][0], g[1][1]}};
      },
      py::arg("scheme"), py::arg("mu"), py::arg("a"), py::arg("eps"), py::arg("k_dx"),
      py::arg("dx") = 1.0 / 16.0);

  m.def(
      "stability_region",
      [](const std::string& scheme, const std::vector<double>& a_values, double eps, int k_samples,
         double mu_tol) {
        RegionOptions opt;
        opt.k_samples = k_samples;
        opt.mu_tol = mu_tol;
        StabilityRegion region;
        {
          py::gil_scoped_release release;
          region = stability_region(analysis_scheme_from_string(scheme), a_values, eps, opt);
        }
        std::vector<std::pair<double, double>> out;
        for (const auto& p : region.points) out.emplace_back(p.a, p.mu_max);
        return out;
      },
      py::arg("scheme"), py::arg("a_values"), py::arg("eps"), py::arg("k_samples") = 256,
      py::arg("mu_tol") = 1e-3);
}
