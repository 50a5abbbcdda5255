#include "boundkey/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace boundkey {

namespace {

nlohmann::json matrix_to_json(const CMatrix& m, const std::vector<int>& dims) {
  nlohmann::json j;
  j["dims"] = dims;
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re_row.push_back(m(i, k).real());
      im_row.push_back(m(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

CMatrix matrix_from_json(const nlohmann::json& j, std::vector<int>* dims_out) {
  const auto dims = j.at("dims").get<std::vector<int>>();
  Eigen::Index n = 1;
  for (int d : dims) n *= d;
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != n ||
      static_cast<Eigen::Index>(im.size()) != n)
    throw std::invalid_argument("matrix JSON: row count does not match dims");
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& re_row = re.at(i);
    const auto& im_row = im.at(i);
    if (static_cast<Eigen::Index>(re_row.size()) != n ||
        static_cast<Eigen::Index>(im_row.size()) != n)
      throw std::invalid_argument("matrix JSON: column count does not match dims");
    for (Eigen::Index k = 0; k < n; ++k)
      m(i, k) = Complex(re_row.at(k).get<double>(), im_row.at(k).get<double>());
  }
  if (dims_out) *dims_out = dims;
  return m;
}

}  // namespace

nlohmann::json operator_to_json(const MultipartiteOperator& m) {
  return matrix_to_json(m.matrix(), m.dims());
}

MultipartiteOperator operator_from_json(const nlohmann::json& j) {
  std::vector<int> dims;
  CMatrix m = matrix_from_json(j, &dims);
  return MultipartiteOperator(std::move(dims), std::move(m));
}

nlohmann::json pdit_to_json(const PrivateState& p) {
  nlohmann::json j;
  j["d"] = p.d;
  j["shield_dims"] = {p.shield_dims.first, p.shield_dims.second};
  j["sigma"] = matrix_to_json(p.sigma, {p.shield_dims.first, p.shield_dims.second});
  nlohmann::json us = nlohmann::json::array();
  for (const CMatrix& u : p.unitaries)
    us.push_back(matrix_to_json(u, {p.shield_dims.first, p.shield_dims.second}));
  j["unitaries"] = std::move(us);
  j["basis"] = {{"alice", matrix_to_json(p.basis.alice, {p.d})},
                {"bob", matrix_to_json(p.basis.bob, {p.d})}};
  return j;
}

PrivateState pdit_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const auto sd = j.at("shield_dims").get<std::vector<int>>();
  if (sd.size() != 2)
    throw std::invalid_argument("pdit JSON: shield_dims must have two entries");
  ProductBasis basis;
  basis.d = d;
  basis.alice = matrix_from_json(j.at("basis").at("alice"), nullptr);
  basis.bob = matrix_from_json(j.at("basis").at("bob"), nullptr);
  const CMatrix sigma = matrix_from_json(j.at("sigma"), nullptr);
  std::vector<CMatrix> unitaries;
  for (const auto& u : j.at("unitaries"))
    unitaries.push_back(matrix_from_json(u, nullptr));
  return make_pdit(basis, {sd[0], sd[1]}, sigma, std::move(unitaries));
}

nlohmann::json ccq_report_json(const CcqState& c, double secure_tolerance) {
  nlohmann::json j;
  nlohmann::json p = nlohmann::json::array();
  for (int i = 0; i < c.d; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < c.d; ++k) row.push_back(c.p(i, k));
    p.push_back(std::move(row));
  }
  j["p"] = std::move(p);
  j["eve_pairwise_max_distance"] = max_pairwise_eve_distance(c, secure_tolerance);
  j["secure"] = is_secure(c, secure_tolerance);
  j["dw_rate"] = dw_rate(c);
  return j;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("failed to open output file: " + path);
  out << contents;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("failed to open input file: " + path);
  return nlohmann::json::parse(in);
}

}  // namespace boundkey
