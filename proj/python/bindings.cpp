#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cca/automaton.hpp"
#include "cca/cesaro.hpp"
#include "cca/commands.hpp"
#include "cca/config.hpp"
#include "cca/digits.hpp"
#include "cca/error.hpp"
#include "cca/kernel.hpp"
#include "cca/regeneration.hpp"
#include "cca/renewal.hpp"
#include "cca/rtilde.hpp"
#include "cca/system_s.hpp"

namespace py = pybind11;
using namespace cca;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cesaro convergence of additive group automata started from chains with complete connections";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<CapacityError>(m, "CapacityError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<IneligibleError>(m, "IneligibleError", error);
  py::register_exception<ValidationError>(m, "ValidationError", error);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", error);

  py::class_<GroupSpec>(m, "GroupSpec")
      .def(py::init<std::uint64_t, std::vector<int>>(), py::arg("p"), py::arg("exponents"))
      .def_property_readonly("prime", &GroupSpec::prime)
      .def_property_readonly("order", &GroupSpec::order)
      .def_property_readonly("exponents", &GroupSpec::exponents)
      .def("add", &GroupSpec::add)
      .def("scale", &GroupSpec::scale)
      .def("neg", &GroupSpec::neg)
      .def("label", &GroupSpec::label)
      .def("__repr__", &GroupSpec::describe);

  py::class_<AutomatonParams>(m, "AutomatonParams")
      .def(py::init([](std::int64_t mu, std::int64_t nu, const GroupSpec& g, bool allow) {
             return AutomatonParams(mu, nu, g, allow ? Coprimality::allow : Coprimality::enforce);
           }),
           py::arg("mu"), py::arg("nu"), py::arg("group"), py::arg("allow_noncoprime") = false)
      .def_property_readonly("mu", &AutomatonParams::mu)
      .def_property_readonly("nu", &AutomatonParams::nu);

  m.def("iterate", [](std::vector<Elem> w, std::uint64_t steps, const AutomatonParams& p) {
    return iterate(Word{0, std::move(w)}, steps, p).elems;
  }, py::arg("word"), py::arg("m"), py::arg("params"));
  m.def("apply_closed_form", [](std::vector<Elem> w, std::uint64_t steps, std::int64_t i,
                                const AutomatonParams& p) {
    return apply_closed_form(Word{0, std::move(w)}, steps, i, p);
  }, py::arg("word"), py::arg("m"), py::arg("i"), py::arg("params"));
  m.def("coefficients", [](std::uint64_t steps, const AutomatonParams& p) {
    return coefficients(steps, p).coeffs;
  });
  m.def("lucas_binomial", &lucas_binomial, py::arg("m"), py::arg("k"), py::arg("p"));
  m.def("check_system_s", [](const IntMatrix& a, const GroupSpec& g) { return check_system_s(a, g); });
  m.def("density_set", [](std::uint64_t M, double alpha, std::uint64_t p) {
    const auto d = density_set(M, alpha, p);
    return py::make_tuple(d.size, d.density);
  });

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("product", &KernelSpec::product, py::arg("group"), py::arg("pi"))
      .def_static("markov", &KernelSpec::markov, py::arg("group"), py::arg("order"),
                  py::arg("transition"), py::arg("initial_past") = std::vector<Elem>{})
      .def_static("markov_stay", &KernelSpec::markov_stay, py::arg("group"), py::arg("stay"))
      .def_static("mixture", &KernelSpec::mixture, py::arg("group"), py::arg("weights"),
                  py::arg("rho"), py::arg("tables"), py::arg("floor") = 0.05,
                  py::arg("default_tail") = 0)
      .def_property_readonly("family", &KernelSpec::family_name)
      .def("eval", [](const KernelSpec& k, Elem g, std::vector<Elem> past) {
        return k.eval(g, PastView(past));
      }, py::arg("g"), py::arg("past"))
      .def("a_scalar", &KernelSpec::a_scalar)
      .def("gamma", &KernelSpec::gamma)
      .def("beta", &KernelSpec::beta);

  m.def("sample_path", [](const KernelSpec& k, std::vector<Elem> past, std::size_t N,
                          std::uint64_t seed, double tol) {
    const auto s = sample_path(k, past, N, seed, tol);
    py::dict d;
    d["x"] = s.xs;
    d["regenerations"] = s.regens;
    d["tail_bounds"] = s.tail_bounds;
    d["candidates"] = s.candidates;
    return d;
  }, py::arg("kernel"), py::arg("past"), py::arg("N"), py::arg("seed"),
        py::arg("tail_tol") = kDefaultTailTol);

  py::class_<InterarrivalLaw>(m, "InterarrivalLaw")
      .def_static("geometric", &InterarrivalLaw::geometric)
      .def_static("two_point", &InterarrivalLaw::two_point)
      .def_static("pmf", &InterarrivalLaw::pmf)
      .def_static("from_kernel", &InterarrivalLaw::from_kernel)
      .def("mass", &InterarrivalLaw::mass)
      .def("survival", &InterarrivalLaw::survival)
      .def("mean", &InterarrivalLaw::mean);
  m.def("epsilon", [](const InterarrivalLaw& law, std::uint64_t n) { return epsilon(law, n); });
  m.def("miss_probability", [](const InterarrivalLaw& law, std::vector<std::uint64_t> A,
                               std::uint64_t trials, std::uint64_t seed) {
    const auto e = miss_probability(law, A, trials, seed);
    return py::make_tuple(e.value, e.std_error);
  });

  m.def("cesaro_scan", [](const KernelSpec& k, std::vector<Elem> past, const AutomatonParams& p,
                          std::vector<std::uint64_t> grid, std::vector<std::uint64_t> J,
                          const std::string& mode, std::uint64_t trials, std::uint64_t seed) {
    ScanOptions o;
    o.mode = mode == "mc" ? ScanMode::monte_carlo : ScanMode::exact;
    o.grid = std::move(grid);
    o.J = std::move(J);
    o.trials = trials;
    o.seed = seed;
    const auto r = cesaro_scan(k, past, p, o);
    py::dict d;
    d["grid"] = r.grid;
    d["averaged"] = r.averaged;
    d["stderrs"] = r.stderrs;
    d["tv"] = r.tv;
    return d;
  }, py::arg("kernel"), py::arg("past"), py::arg("params"), py::arg("grid"),
        py::arg("J") = std::vector<std::uint64_t>{0}, py::arg("mode") = "exact",
        py::arg("trials") = 2000, py::arg("seed") = 1);

  m.def("build_rtilde", [](std::uint64_t mm, std::vector<std::uint64_t> J, std::uint64_t M,
                           std::uint64_t p) {
    RtildeParams rp;
    rp.M = M;
    rp.p = p;
    return build_rtilde(mm, J, rp).sets;
  }, py::arg("m"), py::arg("J"), py::arg("M"), py::arg("p") = 2);
  m.def("validate_rtilde", &validate_rtilde);

  m.def("run", [](const std::string& command, const std::string& config_text,
                  std::optional<std::uint64_t> seed) {
    CommandOptions opts;
    opts.seed = seed;
    std::ostringstream out, log;
    const int code = run_command(command, Config::parse(config_text), opts, out, log);
    return py::make_tuple(code, out.str(), log.str());
  }, py::arg("command"), py::arg("config") = "", py::arg("seed") = py::none());
}
