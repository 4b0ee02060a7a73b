#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcommit/attacks.hpp"
#include "qcommit/commit.hpp"
#include "qcommit/serialize.hpp"
#include "qcommit/zk.hpp"

namespace py = pybind11;
using namespace qcommit;

namespace {

RegisterLayout layout_from_pairs(const std::vector<std::pair<std::string, int>>& regs) {
  std::vector<RegisterLayout::Entry> entries;
  for (const auto& [name, qubits] : regs) entries.push_back({name, qubits});
  return RegisterLayout(std::move(entries));
}

SchemeParams make_params(int lambda, int n_out, int m, int t, std::optional<int> k) {
  SchemeParams p{lambda, n_out, m, t, k};
  p.check();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "exact simulator for keyed quantum bit commitments";

  py::register_exception<cap_exceeded>(mod, "CapExceeded");

  py::class_<RegisterLayout>(mod, "RegisterLayout")
      .def(py::init(&layout_from_pairs), py::arg("registers"))
      .def_property_readonly("total_qubits", &RegisterLayout::total_qubits)
      .def_property_readonly("dim", &RegisterLayout::dim)
      .def("registers", [](const RegisterLayout& l) {
        std::vector<std::pair<std::string, int>> out;
        for (const auto& e : l.entries()) out.emplace_back(e.name, e.qubits);
        return out;
      });

  py::class_<PureState>(mod, "PureState")
      .def(py::init([](const Vec& amps, const RegisterLayout& l) {
             PureState s(amps, l);
             s.check();
             return s;
           }),
           py::arg("amplitudes"), py::arg("layout"))
      .def_readonly("amplitudes", &PureState::amps)
      .def_readonly("layout", &PureState::layout)
      .def_readonly("subnormalized", &PureState::subnormalized);

  py::class_<DensityOp>(mod, "DensityOp")
      .def(py::init([](const Mat& m, const RegisterLayout& l) {
             DensityOp d(m, l);
             d.check();
             return d;
           }),
           py::arg("matrix"), py::arg("layout"))
      .def_static("from_pure", &DensityOp::from_pure)
      .def_static("maximally_mixed", &DensityOp::maximally_mixed)
      .def_readonly("matrix", &DensityOp::mat)
      .def_readonly("layout", &DensityOp::layout)
      .def_property_readonly("trace", &DensityOp::trace);

  py::class_<Unitary>(mod, "Unitary")
      .def(py::init([](const Mat& m, const std::vector<std::string>& acts_on) {
             Unitary u{m, acts_on};
             u.check();
             return u;
           }),
           py::arg("matrix"), py::arg("acts_on"))
      .def_readonly("matrix", &Unitary::mat)
      .def_readonly("acts_on", &Unitary::acts_on);

  py::class_<ThreeOutcomeMeasurement>(mod, "ThreeOutcomeMeasurement")
      .def_readonly("pi0", &ThreeOutcomeMeasurement::pi0)
      .def_readonly("pi1", &ThreeOutcomeMeasurement::pi1)
      .def_readonly("pi_bot", &ThreeOutcomeMeasurement::pi_bot);

  mod.def("tensor", py::overload_cast<const PureState&, const PureState&>(&qla::tensor));
  mod.def("tensor_density", py::overload_cast<const DensityOp&, const DensityOp&>(&qla::tensor));
  mod.def("partial_trace",
          [](const PureState& s, const std::vector<std::string>& keep) {
            return qla::partial_trace(s, keep);
          });
  mod.def("partial_trace_density",
          [](const DensityOp& s, const std::vector<std::string>& keep) {
            return qla::partial_trace(s, keep);
          });
  mod.def("fidelity", py::overload_cast<const DensityOp&, const DensityOp&>(&qla::fidelity));
  mod.def("trace_distance",
          py::overload_cast<const DensityOp&, const DensityOp&>(&qla::trace_distance));
  mod.def("purify", &qla::purify, py::arg("rho"), py::arg("purifier_name") = "P");
  mod.def("uhlmann_unitary",
          [](const PureState& a, const PureState& b, const std::vector<std::string>& act_on) {
            auto res = qla::uhlmann_unitary(a, b, act_on);
            return py::make_tuple(res.unitary, res.achieved_overlap);
          });
  mod.def("helstrom_three_outcome", &qla::helstrom_three_outcome);
  mod.def("apply", &qla::apply);
  mod.def("measure_prob",
          [](const Mat& projector, const std::vector<std::string>& acts_on, const PureState& s) {
            Projector p{projector, acts_on};
            p.check();
            auto res = qla::measure_prob(p, s);
            return py::make_tuple(res.probability, res.branch);
          },
          py::arg("projector"), py::arg("acts_on"), py::arg("state"));

  py::class_<KWiseFamily>(mod, "KWiseFamily")
      .def(py::init<int, int, int>(), py::arg("lambda_in"), py::arg("n_out"), py::arg("k"))
      .def_property_readonly("key_count",
                             [](const KWiseFamily& f) { return f.key_count().value_or(0); })
      .def_property_readonly("field_width", &KWiseFamily::field_width)
      .def("eval",
           [](const KWiseFamily& f, std::uint64_t key_index, std::uint32_t x) {
             return f.eval(f.key_from_index(key_index), x);
           })
      .def("table", [](const KWiseFamily& f, std::uint64_t key_index) {
        return f.materialize(f.key_from_index(key_index)).table;
      });
  mod.def("verify_kwise", [](int lambda_in, int n_out, int k) {
    auto rep = verify_kwise(KWiseFamily(lambda_in, n_out, k));
    return py::make_tuple(rep.pass, rep.keys_checked, rep.subsets_checked);
  });

  mod.def("hash_distribution", [](int lambda_in, int n_out, const std::vector<std::uint32_t>& table) {
    return efi::dist_from_hash(FunctionTable{lambda_in, n_out, table}).p;
  });
  mod.def("protocol_state",
          [](int lambda_in, int n_out, const std::vector<std::uint32_t>& table, int b) {
            return efi::protocol_state(FunctionTable{lambda_in, n_out, table}, b);
          });
  mod.def("efi_metrics", [](int lambda_in, int n_out, const std::vector<std::uint32_t>& table) {
    auto m = efi::metrics_from_dist(efi::dist_from_hash(FunctionTable{lambda_in, n_out, table}));
    return py::make_tuple(m.td, m.fidelity);
  });

  py::class_<SchemeParams>(mod, "SchemeParams")
      .def(py::init(&make_params), py::arg("lambda_in"), py::arg("n_out"), py::arg("m") = 1,
           py::arg("t") = 0, py::arg("k") = std::nullopt)
      .def_readonly("lambda_in", &SchemeParams::lambda)
      .def_readonly("n_out", &SchemeParams::n_out)
      .def_readonly("m", &SchemeParams::m)
      .def_readonly("t", &SchemeParams::t)
      .def_property_readonly("k", &SchemeParams::k);

  py::class_<SchemeInstance>(mod, "SchemeInstance")
      .def_readonly("psi0", &SchemeInstance::psi0)
      .def_readonly("psi1", &SchemeInstance::psi1)
      .def_readonly("xi0", &SchemeInstance::xi0)
      .def_readonly("xi1", &SchemeInstance::xi1)
      .def_readonly("m", &SchemeInstance::m)
      .def_readonly("epsilon", &SchemeInstance::epsilon);

  mod.def("crqs_instance", [](const SchemeParams& p, std::uint64_t key_index) {
    return crqs_instance(p, p.family().key_from_index(key_index));
  });
  mod.def("aux_input_instance", [](const PureState& psi0, const PureState& psi1, int m) {
    return aux_input_mode(psi0, psi1, m);
  });
  mod.def("honest_commit_state", &honest_commit_state);
  mod.def("verify_prob", &verify_prob, py::arg("chi"), py::arg("b"), py::arg("scheme"));
  mod.def("extractor_probs", [](const PureState& commitment, const SchemeInstance& s) {
    return run_extractor(commitment, s).prob;
  });

  py::class_<CommitterStrategy>(mod, "CommitterStrategy")
      .def(py::init([](const PureState& initial, int announced_bit, const Unitary& reveal) {
             return CommitterStrategy{initial, announced_bit, reveal};
           }),
           py::arg("initial"), py::arg("announced_bit"), py::arg("reveal"))
      .def_readonly("initial", &CommitterStrategy::initial)
      .def_readonly("announced_bit", &CommitterStrategy::announced_bit);
  mod.def("honest_strategy", &honest_strategy);
  mod.def("uhlmann_strategy", &uhlmann_strategy);

  py::class_<BindingReport>(mod, "BindingReport")
      .def_readonly("gap", &BindingReport::gap)
      .def_readonly("fail_mass", &BindingReport::fail_mass)
      .def_readonly("epsilon", &BindingReport::epsilon)
      .def_readonly("bound", &BindingReport::bound)
      .def_property_readonly("real_probs", [](const BindingReport& r) { return r.real.prob; })
      .def_property_readonly("ideal_probs", [](const BindingReport& r) { return r.ideal.prob; });
  mod.def("binding_report", &binding_report);
  mod.def("sum_binding_probe", [](const CommitterStrategy& c0, const CommitterStrategy& c1,
                                  const SchemeInstance& s) {
    auto probe = sum_binding_probe(c0, c1, s);
    return py::make_tuple(probe.p0, probe.p1);
  });

  py::enum_<Averaging>(mod, "Averaging")
      .value("family", Averaging::family)
      .value("all_functions", Averaging::all_functions);
  mod.def("hiding_advantage", &hiding_advantage);
  mod.def("zhandry_check", [](const SchemeParams& p, int b, double tol) {
    auto rep = zhandry_check(p, b, tol);
    return py::make_tuple(rep.pass, rep.exact_td ? *rep.exact_td : rep.td_upper, rep.family_keys,
                          rep.tables);
  });
  mod.def("prg_reference_bound", &prg_reference_bound);

  mod.def("unbounded_copy_attack", [](const SchemeParams& p) {
    auto r = attacks::unbounded_copy_attack(p);
    py::dict out;
    out["avg_td"] = r.avg_td;
    out["p0"] = r.p0;
    out["p1"] = r.p1;
    out["hiding_advantage"] = r.hiding_advantage;
    out["binding_broken"] = r.binding_broken;
    out["hiding_attacked"] = r.hiding_attacked;
    return out;
  });
  mod.def("correlated_threshold", &attacks::correlated_threshold);

  py::class_<Graph>(mod, "Graph")
      .def_static("complete", &Graph::complete)
      .def_static("from_edges", &Graph::from_edges)
      .def_readonly("n", &Graph::n)
      .def("edge", &Graph::edge)
      .def_property_readonly("bit_count", &Graph::bit_count);
  mod.def("has_hamiltonian_cycle", &has_hamiltonian_cycle);
  mod.def("zk_completeness",
          [](const Graph& g, const std::vector<int>& witness, const SchemeInstance& s) {
            return completeness(g, HamiltonianCycle{witness}, s);
          });
  mod.def("zk_simulate",
          [](const Graph& g, const std::vector<int>& witness, const SchemeInstance& s, int loops) {
            VerifierModel v;
            auto rep = simulate(g, HamiltonianCycle{witness}, s, v, loops);
            py::dict out;
            out["halt_probability"] = rep.halt_probability;
            out["fail_probability"] = rep.fail_probability;
            out["real_sim_td"] = rep.real_sim_td;
            out["per_bit_td_sum"] = rep.per_bit_td_sum;
            return out;
          },
          py::arg("graph"), py::arg("witness"), py::arg("scheme"), py::arg("loops") = 20);
}
