// Copyright 2026 The citeinfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "citeinfl/analytics.hpp"
#include "citeinfl/disruption.hpp"
#include "citeinfl/errors.hpp"
#include "citeinfl/generator.hpp"
#include "citeinfl/io.hpp"
#include "citeinfl/regress.hpp"
#include "citeinfl/scenario.hpp"

namespace py = pybind11;
using namespace citeinfl;

namespace {

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["family"] = family_name(f.family);
  d["location"] = f.location;
  d["scale"] = f.scale;
  d["ks_stat"] = f.ks_stat;
  d["log_likelihood"] = f.log_likelihood;
  d["n"] = f.n;
  return d;
}

// Column-oriented records, one list per field; undefined values become None.
py::dict records_dict(const std::vector<DisruptionRecord>& recs) {
  py::list focal, cohort, n_i, n_j, n_k, cd, nok, r_k;
  for (const auto& r : recs) {
    focal.append(r.focal);
    cohort.append(r.cohort);
    n_i.append(r.n_i);
    n_j.append(r.n_j);
    n_k.append(r.n_k);
    cd.append(r.cd ? py::object(py::float_(*r.cd)) : py::none());
    nok.append(r.cd_nok ? py::object(py::float_(*r.cd_nok)) : py::none());
    r_k.append(r.r_k ? py::object(py::float_(*r.r_k)) : py::none());
  }
  py::dict d;
  d["focal_id"] = focal;
  d["cohort"] = cohort;
  d["N_i"] = n_i;
  d["N_j"] = n_j;
  d["N_k"] = n_k;
  d["cd"] = cd;
  d["cd_nok"] = nok;
  d["r_k"] = r_k;
  return d;
}

RunConfig config_arg(const py::object& config) {
  if (py::isinstance<py::int_>(config)) return scenario_spec(config.cast<int>()).config;
  return parse_config(config.cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_citeinfl, m) {
  m.doc() = "Citation-network growth simulator and disruption-index toolkit";
  m.attr("__version__") = CITEINFL_VERSION;

  // Translators run newest first, so the narrower I/O error is registered last.
  py::register_exception<Error>(m, "CiteinflError", PyExc_ValueError);
  py::register_exception<IoError>(m, "CiteinflIoError", PyExc_OSError);

  py::class_<CitationNetwork>(m, "Network")
      .def_property_readonly("num_nodes", &CitationNetwork::num_nodes)
      .def_property_readonly("num_edges", &CitationNetwork::num_edges)
      .def_property_readonly("last_period", &CitationNetwork::last_period)
      .def("cohort", &CitationNetwork::cohort, py::arg("node"))
      .def("cohort_size", &CitationNetwork::cohort_size, py::arg("period"))
      .def("cohort_nodes",
           [](const CitationNetwork& n, Period t) {
             const NodeRange r = n.cohort_nodes(t);
             return py::make_tuple(r.first, r.last);
           },
           py::arg("period"), "Half-open id range [first, last) of a cohort.")
      .def("references",
           [](const CitationNetwork& n, NodeId v) {
             const auto s = n.references(v);
             return std::vector<NodeId>(s.begin(), s.end());
           },
           py::arg("node"))
      .def("citers",
           [](const CitationNetwork& n, NodeId v) {
             const auto s = n.citers(v);
             return std::vector<NodeId>(s.begin(), s.end());
           },
           py::arg("node"))
      .def("citations_before", &CitationNetwork::citations_before, py::arg("node"),
           py::arg("period"))
      .def("__eq__", [](const CitationNetwork& a, const CitationNetwork& b) { return a == b; })
      .def("__repr__", [](const CitationNetwork& n) {
        return "<Network nodes=" + std::to_string(n.num_nodes()) +
               " edges=" + std::to_string(n.num_edges()) + ">";
      });

  m.def("schedule_n",
        [](double n0, double g_n, Period t) {
          GrowthSchedule s;
          s.n0 = n0;
          s.g_n = g_n;
          s.T = t;
          return schedule_n(s, t);
        },
        py::arg("n0"), py::arg("g_n"), py::arg("t"));
  m.def("config_text", [](int id) { return config_to_text(scenario_spec(id).config); },
        py::arg("scenario"), "key=value text of a built-in scenario.");
  m.def("lambda_of_beta", &lambda_of_beta, py::arg("beta"));

  m.def("generate",
        [](const py::object& config, std::optional<std::uint64_t> seed, unsigned threads) {
          RunConfig rc = config_arg(config);
          if (seed) rc.generator.seed = *seed;
          py::gil_scoped_release release;
          return generate(rc.generator, {.threads = threads});
        },
        py::arg("config"), py::arg("seed") = py::none(), py::arg("threads") = 1,
        "Grow a network from a scenario id (1-6) or key=value config text.");
  m.def("save_network",
        [](const CitationNetwork& net, const std::filesystem::path& dir) { save_network(net, dir); },
        py::arg("network"), py::arg("directory"));
  m.def("load_network", &load_network, py::arg("directory"));

  m.def("measure",
        [](const CitationNetwork& net, Period cw, std::optional<Period> first,
           std::optional<Period> last, bool same_cohort, unsigned threads) {
          const Period last_ok = last_uncensored_cohort(net, cw);
          if (!last && last_ok < 1) {
            throw CensoringError("CW=" + std::to_string(cw) +
                                 " leaves no uncensored focal cohort");
          }
          std::vector<DisruptionRecord> recs;
          {
            py::gil_scoped_release release;
            MeasureOptions opts{.window = {.cw = cw, .include_same_cohort = same_cohort},
                                .threads = threads};
            recs = measure_all(net, first.value_or(1),
                               last.value_or(last_ok), opts);
          }
          return records_dict(recs);
        },
        py::arg("network"), py::arg("cw") = 5, py::arg("first") = py::none(),
        py::arg("last") = py::none(), py::arg("same_cohort") = false, py::arg("threads") = 1);

  m.def("cd_index",
        [](std::int64_t i, std::int64_t j, std::int64_t k) { return cd_index({i, j, k}); },
        py::arg("n_i"), py::arg("n_j"), py::arg("n_k"));
  m.def("cd_nok", &cd_nok, py::arg("n_i"), py::arg("n_j"));
  m.def("rk", &rk, py::arg("n_i"), py::arg("n_j"), py::arg("n_k"));

  m.def("fit_extreme_value",
        [](const std::vector<double>& xs) { return fit_dict(fit_extreme_value(xs)); },
        py::arg("samples"));
  m.def("fit_normal", [](const std::vector<double>& xs) { return fit_dict(fit_normal(xs)); },
        py::arg("samples"));

  m.def("ols_fixed_effects",
        [](const std::vector<double>& y, const std::vector<std::int64_t>& period,
           const std::map<std::string, std::vector<double>>& covariates,
           std::optional<std::int64_t> baseline) {
          ObservationTable t;
          for (const auto& [name, values] : covariates) {
            t.covariate_names.push_back(name);
            t.covariates.push_back(values);
          }
          t.y = y;
          t.period = period;
          const FixedEffectsModel model = ols_fixed_effects(t, {.baseline = baseline});
          py::dict terms;
          for (const auto& c : model.terms) {
            py::dict d;
            d["estimate"] = c.estimate;
            d["std_error"] = c.std_error;
            d["t_stat"] = c.t_stat;
            d["p_value"] = c.p_value;
            terms[py::str(c.term)] = d;
          }
          py::dict out;
          out["terms"] = terms;
          out["n"] = model.n;
          out["r2"] = model.r2;
          out["residuals"] = model.residuals;
          return out;
        },
        py::arg("y"), py::arg("period"), py::arg("covariates"), py::arg("baseline") = py::none());

  m.def("run_scenario",
        [](int id, const std::filesystem::path& out, unsigned threads, bool save_networks,
           std::uint64_t seed) {
          py::gil_scoped_release release;
          const RunManifest man = run_scenario(
              id, out, {.threads = threads, .save_networks = save_networks, .base_seed = seed});
          return man.outputs;
        },
        py::arg("scenario"), py::arg("out_dir"), py::arg("threads") = 1,
        py::arg("save_networks") = false, py::arg("seed") = kDefaultBaseSeed,
        "Run a scenario ensemble and return the written file names.");
}
