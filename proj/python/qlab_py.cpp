#include <map>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlab/adiabatic.hpp"
#include "qlab/error.hpp"
#include "qlab/hamiltonian.hpp"
#include "qlab/ledger.hpp"
#include "qlab/reality_oracle.hpp"
#include "qlab/spectral.hpp"
#include "qlab/tomography.hpp"

namespace py = pybind11;
using namespace qlab;

namespace {

py::dict gap_profile_py(const std::vector<double>& weights, std::size_t grid, const std::string& sector,
                        const std::string& refine) {
  GapOptions opts;
  opts.grid_size = grid;
  opts.sector = parse_sector(sector);
  opts.refinement = parse_refinement(refine);
  const GapProfile p = gap_profile(PartitionInstance(weights), opts);
  py::dict d;
  d["s"] = p.s_grid;
  d["e0"] = p.e0;
  d["e1"] = p.e1;
  d["min_gap"] = p.min_gap;
  d["argmin_s"] = p.argmin_s;
  d["sector"] = std::string(to_string(p.sector));
  return d;
}

py::dict propagate_py(const std::vector<double>& weights, double total_time, std::size_t steps,
                      std::uint64_t seed, const std::string& method) {
  const PartitionInstance inst(weights);
  if (steps == 0) steps = default_steps(inst, total_time);
  PropagationOptions opts;
  if (method == "eigen") {
    opts.method = ExpMethod::kEigen;
  } else if (method == "krylov") {
    opts.method = ExpMethod::kKrylov;
  } else if (method != "auto") {
    throw Error(ErrorCode::kInvalidArgument, "python", "unknown method '" + method + "'");
  }
  const EvolutionResult r = propagate(inst, ScheduleSpec(total_time, steps), seed, opts);
  py::dict d;
  d["success_probability"] = r.success_probability;
  d["norm_drift"] = r.norm_drift;
  d["steps"] = r.steps;
  d["valid"] = r.valid;
  d["trace"] = r.ground_overlap_trace;
  d["final_state"] = Amplitudes(r.final_state.amplitudes().begin(), r.final_state.amplitudes().end());
  return d;
}

py::dict threshold_py(const std::vector<double>& weights, double target, double initial_time, double cap) {
  ThresholdOptions opts;
  opts.initial_time = initial_time;
  opts.cap = cap;
  const ThresholdResult r = scan_threshold_time(PartitionInstance(weights), target, opts);
  py::dict d;
  d["time"] = r.time;
  d["success"] = r.success;
  d["at_floor"] = r.at_floor;
  d["capped"] = r.capped;
  return d;
}

py::dict brute_force_py(const std::vector<double>& weights) {
  const PartitionSolution s = brute_force(PartitionInstance(weights));
  std::vector<std::vector<int>> assignments;
  for (const auto& a : s.optimal_assignments) assignments.push_back(a.values);
  py::dict d;
  d["min_value"] = s.min_value;
  d["is_perfect"] = s.is_perfect;
  d["assignments"] = assignments;
  d["indices"] = s.optimal_indices();
  return d;
}

std::string classify_py(const std::map<int, std::vector<double>>& times) {
  std::vector<MorphismCost> costs;
  for (const auto& [n, ts] : times) {
    for (double t : ts) {
      MorphismCost c;
      c.label = CostLabel::kTEvolution;
      c.n = n;
      c.threshold_time = t;
      costs.push_back(c);
    }
  }
  return std::string(to_string(assemble(costs, std::nullopt).verdict));
}

}  // namespace

PYBIND11_MODULE(_qlab, m) {
  m.doc() = "Adiabatic number-partitioning laboratory";
  py::register_exception<Error>(m, "QlabError", PyExc_RuntimeError);

  m.def("generate_instance",
        [](const std::string& dist, int n, std::uint64_t seed, std::int64_t max_weight) {
          const auto inst = generate_instance({parse_distribution(dist), n, seed, max_weight});
          return std::vector<double>(inst.weights().begin(), inst.weights().end());
        },
        py::arg("distribution"), py::arg("n"), py::arg("seed") = 0, py::arg("max_weight") = 0);
  m.def("ising_diagonal",
        [](const std::vector<double>& weights) { return build_ising(PartitionInstance(weights)).diagonal_values(); },
        py::arg("weights"));
  m.def("gap_profile", &gap_profile_py, py::arg("weights"), py::arg("grid") = 64,
        py::arg("sector") = "flip_symmetric", py::arg("refine") = "brent");
  m.def("propagate", &propagate_py, py::arg("weights"), py::arg("total_time"), py::arg("steps") = 0,
        py::arg("seed") = 0, py::arg("method") = "auto");
  m.def("threshold_time", &threshold_py, py::arg("weights"), py::arg("target") = 0.99,
        py::arg("initial_time") = 1.0, py::arg("cap") = 1e6);
  m.def("criterion_ratio", &criterion_ratio, py::arg("total_time"), py::arg("min_gap"));
  m.def("brute_force", &brute_force_py, py::arg("weights"));
  m.def("evaluate_ising",
        [](const std::vector<int>& spins, const std::vector<double>& weights) {
          return evaluate_ising(SpinAssignment{spins}, PartitionInstance(weights));
        },
        py::arg("spins"), py::arg("weights"));
  m.def("verify_zero_ground",
        [](const std::vector<int>& spins, const std::vector<double>& weights) {
          return verify_zero_ground(SpinAssignment{spins}, PartitionInstance(weights));
        },
        py::arg("spins"), py::arg("weights"));
  m.def("budget",
        [](const std::string& mode, int n) { return budget(parse_tomography_mode(mode), n).operation_count; },
        py::arg("mode"), py::arg("n"));
  m.def("reconstruct_product_state",
        [](const std::vector<std::array<double, 3>>& bloch) {
          const QuantumState s = reconstruct_product_state(bloch);
          return Amplitudes(s.amplitudes().begin(), s.amplitudes().end());
        },
        py::arg("bloch_vectors"));
  m.def("classify_threshold_times", &classify_py, py::arg("times_by_n"));
}
