#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdl/empirical.hpp"
#include "qdl/errors.hpp"
#include "qdl/expansion.hpp"
#include "qdl/parallel.hpp"
#include "qdl/ratios.hpp"
#include "qdl/verify.hpp"
#include "qdl/zeros.hpp"

namespace py = pybind11;
using namespace qdl;

namespace {

py::dict to_dict(const DensityReport& r) {
    py::dict d, terms, errs, params;
    for (const auto& [k, v] : r.terms) terms[py::str(k)] = v;
    for (const auto& [k, v] : r.term_errors) errs[py::str(k)] = v;
    for (const auto& [k, v] : r.params) std::visit([&](const auto& x) { params[py::str(k)] = x; }, v);
    d["value"] = r.value;
    d["method"] = r.method;
    d["terms"] = terms;
    d["error_budget"] = r.error_budget;
    d["term_errors"] = errs;
    d["params"] = params;
    d["diagnostics"] = r.diagnostics;
    return d;
}

ratios::FamilyParams fam(double X, const testfn::WeightFunction& w, double c_prime) {
    return ratios::FamilyParams::make(X, w, c_prime);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = QDL_VERSION;

    auto base = py::register_exception<Error>(m, "QdlError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<DataQualityError>(m, "DataQualityError", base.ptr());

    m.def("set_threads", &par::set_threads, py::arg("n"));
    m.def("kronecker", &arith::kronecker, py::arg("m"), py::arg("n"));

    m.def("katz_sarnak", [](const std::string& phi) { return expansion::katz_sarnak(testfn::make_testfn(phi)); },
          py::arg("phi"));
    m.def("predict", [](double X, const std::string& phi, const std::string& w, double c_prime) {
              const auto wf = testfn::make_weight(w);
              py::gil_scoped_release nogil;
              auto r = ratios::predict_density(testfn::make_testfn(phi), wf, fam(X, wf, c_prime));
              py::gil_scoped_acquire gil;
              return to_dict(r);
          },
          py::arg("X"), py::arg("phi") = "fejer:1.5", py::arg("w") = "gaussian", py::arg("c_prime") = 0.0);
    m.def("expand", [](double X, const std::string& phi, const std::string& w, const std::string& j) {
              if (j != "exact" && j != "asym") throw ConfigError("j must be exact or asym");
              const auto wf = testfn::make_weight(w);
              const auto mode = j == "exact" ? expansion::JMode::exact : expansion::JMode::asymptotic;
              return to_dict(expansion::expansion_density(testfn::make_testfn(phi), wf, fam(X, wf, 0.0), mode));
          },
          py::arg("X"), py::arg("phi") = "fejer:1.5", py::arg("w") = "gaussian", py::arg("j") = "exact");
    m.def("empirical", [](double X, const std::string& phi, const std::string& w, double T, int bootstrap,
                          std::uint64_t seed, const std::string& cache_dir) {
              const auto wf = testfn::make_weight(w);
              const zeros::ZeroCache cache(cache_dir.empty() ? zeros::ZeroCache::default_dir() : std::filesystem::path(cache_dir));
              return to_dict(empirical::empirical_density(testfn::make_testfn(phi), wf, fam(X, wf, 0.0),
                                                          {T, &cache, bootstrap, seed}));
          },
          py::arg("X"), py::arg("phi") = "bump2:0.8", py::arg("w") = "gaussian", py::arg("T") = 40.0,
          py::arg("bootstrap") = 20, py::arg("seed") = 1, py::arg("cache_dir") = "");
    m.def("char_average", [](std::uint64_t n, double X, const std::string& w) {
              const auto wf = testfn::make_weight(w);
              return empirical::char_average(n, wf, fam(X, wf, 0.0));
          },
          py::arg("n"), py::arg("X"), py::arg("w") = "gaussian");
    m.def("find_zeros", [](std::int64_t d, double T) {
              const auto z = zeros::find_zeros(arith::QuadraticCharacter(d), T);
              py::dict r;
              r["d"] = z.d;
              r["T"] = z.height;
              r["zeros"] = z.ordinates;
              r["count_estimate"] = z.count_estimate;
              r["complete"] = z.complete;
              return r;
          },
          py::arg("d"), py::arg("T"));

    m.def("verify_names", &verify::names);
    m.def("verify", [](const std::string& name, double X, const std::string& phi) {
              const auto r = verify::run(name, {X, phi});
              py::dict d;
              py::list res;
              for (const auto& x : r.residuals) {
                  py::dict e;
                  e["label"] = x.label;
                  e["value"] = x.value;
                  e["tol"] = x.tol;
                  e["ok"] = x.ok();
                  res.append(e);
              }
              d["name"] = r.name;
              d["passed"] = r.passed;
              d["residuals"] = res;
              d["diagnostics"] = r.diagnostics;
              return d;
          },
          py::arg("name"), py::arg("X") = 0.0, py::arg("phi") = "");
}
