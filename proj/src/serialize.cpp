#include "qcommit/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcommit::io {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double rounded12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

json layout_to_json(const RegisterLayout& l) {
  json out = json::array();
  for (const auto& e : l.entries()) out.push_back(json::array({e.name, e.qubits}));
  return out;
}

RegisterLayout layout_from_json(const json& j) {
  std::vector<RegisterLayout::Entry> regs;
  for (const auto& e : j) regs.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
  return RegisterLayout(std::move(regs));
}

json amps_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json::array({v[i].real(), v[i].imag()}));
  return out;
}

Vec amps_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = cplx(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  return v;
}

json mat_to_json(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    out.push_back(std::move(row));
  }
  return out;
}

Mat mat_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

json strategy_to_json(const CommitterStrategy& c) {
  json out;
  out["layout"] = layout_to_json(c.initial.layout);
  out["state"] = amps_to_json(c.initial.amps);
  out["announced_bit"] = c.announced_bit;
  out["reveal"] = {{"acts_on", c.reveal.acts_on}, {"matrix", mat_to_json(c.reveal.mat)}};
  return out;
}

CommitterStrategy strategy_from_json(const json& j) {
  CommitterStrategy c;
  RegisterLayout l = layout_from_json(j.at("layout"));
  c.initial = PureState(amps_from_json(j.at("state")), std::move(l));
  c.initial.check();
  c.announced_bit = j.at("announced_bit").get<int>();
  c.reveal.acts_on = j.at("reveal").at("acts_on").get<std::vector<std::string>>();
  c.reveal.mat = mat_from_json(j.at("reveal").at("matrix"));
  c.reveal.check();
  return c;
}

json crs_scheme_to_json(const CrsScheme& s) {
  json out;
  out["layout"] = layout_to_json(s.psi0.at(0).layout);
  json keys = json::array();
  for (std::size_t k = 0; k < s.key_prob.size(); ++k)
    keys.push_back({{"prob", s.key_prob[k]},
                    {"psi0", amps_to_json(s.psi0[k].amps)},
                    {"psi1", amps_to_json(s.psi1[k].amps)}});
  out["keys"] = std::move(keys);
  return out;
}

CrsScheme crs_scheme_from_json(const json& j) {
  CrsScheme s;
  RegisterLayout l = layout_from_json(j.at("layout"));
  for (const auto& e : j.at("keys")) {
    s.key_prob.push_back(e.at("prob").get<double>());
    s.psi0.emplace_back(amps_from_json(e.at("psi0")), l);
    s.psi1.emplace_back(amps_from_json(e.at("psi1")), l);
  }
  s.check();
  return s;
}

json correlated_scheme_to_json(const CorrelatedScheme& s) {
  json out;
  out["layout"] = layout_to_json(s.psi0.at(0).layout);
  out["joint"] = s.joint;
  json p0 = json::array(), p1 = json::array();
  for (const auto& st : s.psi0) p0.push_back(amps_to_json(st.amps));
  for (const auto& st : s.psi1) p1.push_back(amps_to_json(st.amps));
  out["psi0"] = std::move(p0);
  out["psi1"] = std::move(p1);
  json l0 = json::array(), l1 = json::array();
  for (const auto& m : s.lambda0) l0.push_back(mat_to_json(m));
  for (const auto& m : s.lambda1) l1.push_back(mat_to_json(m));
  out["lambda0"] = std::move(l0);
  out["lambda1"] = std::move(l1);
  return out;
}

CorrelatedScheme correlated_scheme_from_json(const json& j) {
  CorrelatedScheme s;
  RegisterLayout l = layout_from_json(j.at("layout"));
  s.joint = j.at("joint").get<std::vector<std::vector<double>>>();
  for (const auto& e : j.at("psi0")) s.psi0.emplace_back(amps_from_json(e), l);
  for (const auto& e : j.at("psi1")) s.psi1.emplace_back(amps_from_json(e), l);
  for (const auto& e : j.at("lambda0")) s.lambda0.push_back(mat_from_json(e));
  for (const auto& e : j.at("lambda1")) s.lambda1.push_back(mat_from_json(e));
  s.check();
  return s;
}

json family_key_record(const KWiseFamily& family, const HashKey& key) {
  char modulus[16];
  std::snprintf(modulus, sizeof modulus, "0x%x", family.field().modulus());
  return json{{"w", family.field_width()},
              {"k", family.k()},
              {"key", family.key_hex(key)},
              {"modulus", modulus}};
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.edge(i, j)) edges.push_back(json::array({i, j}));
  return json{{"n", g.n}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return Graph::from_edges(j.at("n").get<int>(), edges);
}

Graph graph_from_edge_list(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  int n = 0;
  if (!(is >> tag >> n) || tag != "n") throw std::runtime_error("edge list must start with 'n <vertices>'");
  std::vector<std::pair<int, int>> edges;
  int a, b;
  while (is >> a >> b) edges.emplace_back(a, b);
  return Graph::from_edges(n, edges);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace qcommit::io
