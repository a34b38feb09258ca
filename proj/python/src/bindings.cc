// Copyright 2026 The Chanprune Authors.
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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <string>
#include <vector>

#include "chanprune/arch_model.h"
#include "chanprune/benchmark.h"
#include "chanprune/error.h"
#include "chanprune/fitness.h"
#include "chanprune/ide_engine.h"
#include "chanprune/search_space.h"

namespace py = pybind11;

namespace chanprune {
namespace {

using Ints = std::vector<std::int64_t>;

StructureVector sv(const Ints& v) { return StructureVector(v); }

py::int_ to_py_int(const BigInt& value) {
  return py::int_(py::reinterpret_steal<py::object>(
      PyLong_FromString(value.str().c_str(), nullptr, 10)));
}

// A space plus the architecture it was built from, if any.
struct PySpace {
  CompressedSpace space;
  std::shared_ptr<const ArchitectureSpec> arch;
};

StepVector resolve_steps(const ArchitectureSpec& spec, const py::object& steps) {
  if (steps.is_none()) return eighth_steps(spec.base_structure());
  if (py::isinstance<py::int_>(steps)) {
    return multiple_steps(spec.base_structure(), steps.cast<std::int64_t>());
  }
  return StepVector{steps.cast<Ints>()};
}

std::shared_ptr<Evaluator> make_evaluator(const PySpace& s, const py::object& evaluator,
                                          bool deterministic) {
  if (py::isinstance<py::str>(evaluator)) {
    const std::string name = evaluator.cast<std::string>();
    if (name == "toy") return std::make_shared<ToyEvaluator>();
    if (name == "surrogate") {
      if (!s.arch) throw ValidationError("the surrogate evaluator needs an architecture space");
      return std::make_shared<SurrogateEvaluator>(s.arch);
    }
    throw ValidationError("unknown evaluator '" + name + "' (toy, surrogate, or a callable)");
  }
  if (!PyCallable_Check(evaluator.ptr())) {
    throw ValidationError("evaluator must be 'toy', 'surrogate' or a callable");
  }
  EvaluatorDescriptor desc;
  desc.name = "python";
  desc.deterministic = deterministic;
  desc.expected_vector_length = static_cast<std::int64_t>(s.space.dimension());
  py::function fn = evaluator;
  std::shared_ptr<Evaluator> e = std::make_shared<FunctionEvaluator>(
      desc, [fn](const StructureVector& v) { return fn(v.vec()).cast<double>(); });
  return deterministic ? cached(e) : e;
}

py::dict record_dict(const HistoryRecord& r) {
  py::dict d;
  d["generation"] = r.generation;
  d["best_fitness"] = r.best_fitness;
  d["best_vector"] = r.best_vector.vec();
  d["evaluations"] = r.evaluations;
  d["reinitializations"] = r.reinitializations;
  return d;
}

PYBIND11_MODULE(_chanprune, m) {
  m.doc() = "Constrained channel-count search by improved differential evolution";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", error.ptr());
  static py::exception<MinimumReached> minimum(m, "MinimumReached", error.ptr());
  static py::exception<EvaluatorError> evaluator_error(m, "EvaluatorError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      validation(e.what());
    } catch (const MinimumReached& e) {
      minimum(e.what());
    } catch (const EvaluatorError& e) {
      evaluator_error(e.what());
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<ArchitectureSpec, std::shared_ptr<ArchitectureSpec>>(m, "Architecture")
      .def_property_readonly("name", &ArchitectureSpec::name)
      .def_property_readonly("base_structure",
                             [](const ArchitectureSpec& a) { return a.base_structure().vec(); })
      .def_property_readonly("num_variables", &ArchitectureSpec::num_variables)
      .def_property_readonly("base_flops", [](const ArchitectureSpec& a) { return a.base_cost().flops; })
      .def_property_readonly("base_params",
                             [](const ArchitectureSpec& a) { return a.base_cost().params; })
      .def("__repr__", [](const ArchitectureSpec& a) {
        return "<Architecture " + a.name() + " variables=" + std::to_string(a.num_variables()) + ">";
      });

  m.def("parse_architecture",
        [](const std::string& text) { return std::make_shared<ArchitectureSpec>(parse_arch_spec(text)); },
        py::arg("text"));
  m.def("load_architecture",
        [](const std::filesystem::path& p) { return std::make_shared<ArchitectureSpec>(load_arch_spec(p)); },
        py::arg("path"));

  m.def("cost",
        [](const ArchitectureSpec& a, const Ints& s) {
          const CostReport c = compute_cost(a, sv(s));
          return py::make_tuple(c.flops, c.params);
        },
        py::arg("arch"), py::arg("structure"), "(flops, params) of a structure, FLOPs as MACs.");
  m.def("pruning_rates",
        [](const ArchitectureSpec& a, const Ints& s) {
          const PruningRates r = pruning_rates(a, sv(s));
          return py::make_tuple(r.flops_rate, r.params_rate);
        },
        py::arg("arch"), py::arg("structure"));
  m.def("is_feasible",
        [](const ArchitectureSpec& a, const Ints& s, double rf, double rp) {
          return is_feasible(a, sv(s), SparsityTargets(rf, rp));
        },
        py::arg("arch"), py::arg("structure"), py::arg("flops_rate") = 0.0,
        py::arg("params_rate") = 0.0);

  py::class_<Rng>(m, "Random")
      .def(py::init<std::uint64_t>(), py::arg("seed") = 0);

  py::class_<PySpace>(m, "Space")
      .def_property_readonly("dimension", [](const PySpace& s) { return s.space.dimension(); })
      .def_property_readonly("size", [](const PySpace& s) { return to_py_int(space_size(s.space)); })
      .def_property_readonly("minimum", [](const PySpace& s) { return s.space.minimum().vec(); })
      .def_property_readonly("lower", [](const PySpace& s) {
        Ints v;
        for (const auto& d : s.space.box().dims()) v.push_back(d.lo);
        return v;
      })
      .def_property_readonly("upper", [](const PySpace& s) {
        Ints v;
        for (const auto& d : s.space.box().dims()) v.push_back(d.max_admissible());
        return v;
      })
      .def("contains", [](const PySpace& s, const Ints& v) { return s.space.contains(sv(v)); })
      .def("feasible", [](const PySpace& s, const Ints& v) { return s.space.feasible(sv(v)); })
      .def("sample", [](const PySpace& s, Rng& rng) { return sample_uniform(s.space, rng).vec(); },
           py::arg("rng"))
      .def("snap", [](const PySpace& s, const Ints& v) { return snap_and_clamp(sv(v), s.space).vec(); })
      .def("rescale",
           [](const PySpace& s, const Ints& v, Rng& rng) { return rescale(sv(v), s.space, rng).vec(); },
           py::arg("structure"), py::arg("rng"));

  m.def("box_space",
        [](const Ints& base, const Ints& steps) {
          return PySpace{build_space(sv(base), StepVector{steps}), nullptr};
        },
        py::arg("base"), py::arg("steps"));
  m.def("arch_space",
        [](std::shared_ptr<ArchitectureSpec> a, const py::object& steps, double rf, double rp) {
          const StepVector e = resolve_steps(*a, steps);
          return PySpace{build_space(a, e, SparsityTargets(rf, rp)), a};
        },
        py::arg("arch"), py::arg("steps") = py::none(), py::arg("flops_rate") = 0.0,
        py::arg("params_rate") = 0.0,
        "Pruning space of an architecture. steps: None (one eighth of each base count), "
        "an int k (multiples of k), or an explicit list.");
  m.def("toy_space", [] { return PySpace{toy_space(), nullptr}; });

  m.def("toy_fitness", [](const Ints& x) { return toy_fitness(sv(x)).value(); }, py::arg("x"));
  m.def("surrogate_fitness",
        [](const ArchitectureSpec& a, const Ints& s) { return surrogate_fitness(a, sv(s)).value(); },
        py::arg("arch"), py::arg("structure"));

  py::class_<IdeConfig>(m, "SearchConfig")
      .def(py::init([](int population_size, int iterations, double f, double cr, int stagnation,
                       std::uint64_t seed, const std::string& mode, bool force_mutant_gene) {
             IdeConfig c;
             c.population_size = population_size;
             c.iterations = iterations;
             c.differential_weight = f;
             c.crossover_prob = cr;
             c.stagnation_limit = stagnation;
             c.seed = seed;
             c.mode = parse_search_mode(mode);
             c.force_mutant_gene = force_mutant_gene;
             c.validate();
             return c;
           }),
           py::arg("population_size") = 10, py::arg("iterations") = 100,
           py::arg("differential_weight") = 0.5, py::arg("crossover_prob") = 0.8,
           py::arg("stagnation_limit") = 4, py::arg("seed") = 0, py::arg("mode") = "ide",
           py::arg("force_mutant_gene") = false)
      .def_readwrite("population_size", &IdeConfig::population_size)
      .def_readwrite("iterations", &IdeConfig::iterations)
      .def_readwrite("differential_weight", &IdeConfig::differential_weight)
      .def_readwrite("crossover_prob", &IdeConfig::crossover_prob)
      .def_readwrite("stagnation_limit", &IdeConfig::stagnation_limit)
      .def_readwrite("seed", &IdeConfig::seed)
      .def_readwrite("force_mutant_gene", &IdeConfig::force_mutant_gene)
      .def_property(
          "mode", [](const IdeConfig& c) { return std::string(to_string(c.mode)); },
          [](IdeConfig& c, const std::string& mode) { c.mode = parse_search_mode(mode); });

  m.def("search",
        [](const PySpace& s, const py::object& evaluator, const IdeConfig& config,
           bool deterministic) {
          std::shared_ptr<Evaluator> e = make_evaluator(s, evaluator, deterministic);
          const SearchResult r = run(s.space, *e, config);
          py::list history;
          for (const auto& rec : r.history.records) history.append(record_dict(rec));
          py::dict out;
          out["best"] = r.best.vector.vec();
          out["fitness"] = r.best.fitness->value();
          out["history"] = history;
          return out;
        },
        py::arg("space"), py::arg("evaluator"), py::arg("config") = IdeConfig{},
        py::arg("deterministic") = true,
        "Run the search. evaluator: 'toy', 'surrogate' or a callable list[int] -> float "
        "(higher is better). Deterministic callables are memoized.");

  m.def("toy_benchmark",
        [](const IdeConfig& config, const std::vector<std::uint64_t>& seeds) {
          const BenchmarkSummary s = run_toy_benchmark(config, seeds);
          py::list runs;
          for (const auto& r : s.runs) {
            py::dict d;
            d["seed"] = r.seed;
            d["first_hit"] = r.first_hit ? py::object(py::int_(*r.first_hit)) : py::object(py::none());
            d["final_best"] = r.final_best;
            runs.append(d);
          }
          py::dict out;
          out["mode"] = std::string(to_string(s.mode));
          out["successes"] = s.successes;
          out["median_first_hit"] = s.median_first_hit ? py::object(py::float_(*s.median_first_hit))
                                                       : py::object(py::none());
          out["runs"] = runs;
          return out;
        },
        py::arg("config"), py::arg("seeds"));
}

}  // namespace
}  // namespace chanprune
