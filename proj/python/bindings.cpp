#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magic_bullet/cli.hpp"
#include "magic_bullet/counting.hpp"
#include "magic_bullet/epr_core.hpp"
#include "magic_bullet/errors.hpp"
#include "magic_bullet/fock_oracle.hpp"
#include "magic_bullet/opa_model.hpp"
#include "magic_bullet/pair_projection.hpp"
#include "magic_bullet/quadrature.hpp"

namespace py = pybind11;
using namespace magic_bullet;

namespace {

py::dict count_dict(const counting::CountStatistics& s) {
  py::dict d;
  d["n_s"] = s.n_s;
  d["n_i"] = s.n_i;
  d["q2"] = s.q2;
  d["sigma2"] = s.sigma2;
  d["transient_bound"] = s.transient_bound ? py::cast(*s.transient_bound) : py::none();
  return d;
}

MeasurementConfig make_kernel(const std::string& kind, double width, int k_order, double dx) {
  if (kind == "cavity") return CavityConfig{.gc_over_g = width, .dx = dx};
  if (kind == "filter") return FilterConfig{k_order, width, dx};
  throw ValidationError("kernel must be 'cavity' or 'filter', got '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entangled-pair correlations, OPA spectra and photocount statistics";
  m.attr("__version__") = cli::kVersion;

  // ValueError / RuntimeError subclasses so callers can catch either way.
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
  py::register_exception<CoverageError>(m, "CoverageError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  // Spectra
  m.def("fluorescence_spectrum",
        py::vectorize([](double g2, double x) { return opa::fluorescence_spectrum(opa::OpaParams(g2), x); }),
        py::arg("g2"), py::arg("x"));
  m.def("phase_sensitive_spectrum",
        py::vectorize([](double g2, double x) { return opa::phase_sensitive_spectrum(opa::OpaParams(g2), x); }),
        py::arg("g2"), py::arg("x"));
  m.def("fluorescence_fwhm", [](double g2) { return opa::fluorescence_fwhm(opa::OpaParams(g2)); },
        py::arg("g2"));
  m.def("schmidt_coefficients",
        [](double nbar, int n_max) {
          return opa::schmidt_coefficients(opa::TwoModeSqueezedState::with_nbar(nbar), n_max);
        },
        py::arg("nbar"), py::arg("n_max"));

  // Quadratures
  m.def("conditional_stats",
        [](double nbar) {
          const auto s = quadrature::conditional_stats(opa::TwoModeSqueezedState::with_nbar(nbar));
          py::dict d;
          d["mean_coeff"] = s.mean_coeff;
          d["cond_var"] = s.cond_var;
          d["marg_var"] = s.marg_var;
          d["cross_cov"] = s.cross_cov();
          return d;
        },
        py::arg("nbar"));
  m.def("sample_homodyne",
        [](double nbar, std::size_t trials, std::uint64_t seed) {
          const auto xs = quadrature::sample_homodyne(opa::TwoModeSqueezedState::with_nbar(nbar), trials, seed);
          py::array_t<double> out({static_cast<py::ssize_t>(xs.size()), py::ssize_t{2}});
          auto v = out.mutable_unchecked<2>();
          for (std::size_t i = 0; i < xs.size(); ++i) {
            v(i, 0) = xs[i].a_s1;
            v(i, 1) = xs[i].a_i1;
          }
          return out;
        },
        py::arg("nbar"), py::arg("trials"), py::arg("seed") = 0,
        "Rows of (a_s1, a_i1) homodyne outcomes.");
  m.def("normalization_integral",
        [](double nbar) {
          return quadrature::normalization_integral(opa::TwoModeSqueezedState::with_nbar(nbar));
        },
        py::arg("nbar"));
  m.def("homodyne_moments",
        [](double nbar) {
          const auto f = fock::homodyne_moments(fock::make_tmss(nbar));
          py::dict d;
          d["marg_var"] = f.var_s;
          d["cross_cov"] = f.cross_cov;
          d["mean_coeff"] = f.mean_coeff();
          d["cond_var"] = f.cond_var();
          return d;
        },
        py::arg("nbar"), "Quadrature moments from the truncated Fock representation.");

  // Finite-dimensional pairs
  m.def("haar_unitary", &epr::haar_unitary, py::arg("d"), py::arg("seed"));
  m.def("magic_bullet_trials",
        [](const Eigen::MatrixXcd& scattering, const Eigen::MatrixXcd& basis, std::size_t trials,
           std::uint64_t seed) {
          const int d = static_cast<int>(scattering.rows());
          const auto pair = epr::apply_bilateral_scattering(epr::make_maximally_entangled(d),
                                                            epr::ScatteringMatrix(scattering));
          return epr::measure_correlated(pair, epr::ProjectiveMeasurement(basis), trials, seed);
        },
        py::arg("scattering"), py::arg("basis"), py::arg("trials"), py::arg("seed") = 0,
        "Joint outcomes for a maximally entangled pair after bilateral scattering.");

  // Single-pair conjugate projection
  m.def("conjugate_projection",
        [](double g2, double gamma_t, int modes, const std::string& shape, double width, double centre) {
          const auto pair = pairs::build_pair_state(opa::OpaParams(g2), gamma_t, modes);
          if (shape != "gaussian" && shape != "flat") {
            throw ValidationError("phi must be 'gaussian' or 'flat', got '" + shape + "'");
          }
          const auto phi = shape == "flat" ? pairs::flat_wavepacket(pair, centre, width)
                                           : pairs::gaussian_wavepacket(pair, centre, width);
          const auto proj = pairs::project_signal(pair, phi);
          return py::make_tuple(proj.prob, pairs::conjugate_fidelity(proj.idler, phi));
        },
        py::arg("g2"), py::arg("gamma_t"), py::arg("modes"), py::arg("phi") = "gaussian",
        py::arg("width") = 0.05, py::arg("centre") = 0.0,
        "(projection probability, conjugate fidelity)");

  // Photocount statistics
  m.def("cavity_moments",
        [](double g2, double gc_over_g, double dx) {
          return count_dict(counting::cavity_moments(opa::OpaParams(g2),
                                                     CavityConfig{.gc_over_g = gc_over_g, .dx = dx}));
        },
        py::arg("g2"), py::arg("gc_over_g"), py::arg("dx") = 0.0);
  m.def("filter_moments",
        [](double g2, int k_order, double wc_over_g, double dx) {
          return count_dict(counting::filter_moments(opa::OpaParams(g2), FilterConfig{k_order, wc_over_g, dx}));
        },
        py::arg("g2"), py::arg("k_order"), py::arg("wc_over_g"), py::arg("dx") = 0.0);
  m.def("fig3_sweep",
        [](double g2, const std::vector<double>& dx_list, const std::vector<double>& gc_grid) {
          std::vector<std::tuple<double, double, double>> out;
          py::gil_scoped_release release;
          for (const auto& r : counting::fig3_sweep(opa::OpaParams(g2), dx_list, gc_grid)) {
            out.emplace_back(r.dx, r.gc_over_g, r.sigma2);
          }
          return out;
        },
        py::arg("g2"), py::arg("dx_list"), py::arg("gc_grid"), "Rows of (dx, gc_over_g, sigma2).");
  m.def("log_grid", &counting::log_grid, py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("bin_sigma2",
        [](double g2, const std::string& kind, double width, int k_order, double dx, int n_bins,
           double span) {
          const auto kernel = make_kernel(kind, width, k_order, dx);
          if (n_bins == 0) std::tie(n_bins, span) = fock::default_discretization(kernel);
          return fock::bin_sigma2(opa::OpaParams(g2), kernel, n_bins, span);
        },
        py::arg("g2"), py::arg("kind"), py::arg("width"), py::arg("k_order") = 1,
        py::arg("dx") = 0.0, py::arg("n_bins") = 0, py::arg("span") = 0.0,
        "Independent-bin Fock oracle; n_bins = 0 picks a default discretization.");

  // Command-line entry point without the process boundary
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          const auto cfg = cli::parse_config(args);
          std::ostringstream out, info;
          cli::run(cfg, out, info);
          return py::make_tuple(out.str(), info.str());
        },
        py::arg("args"), "(primary output, summary) for a command line such as ['fig3', '--g2', '0.01'].");
}
