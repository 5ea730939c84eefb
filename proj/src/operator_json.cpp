#include "munorm/operator_json.hpp"

#include <fstream>

namespace munorm {

namespace {

using nlohmann::json;

cplx parse_complex(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("operator spec: complex values must be [re, im]");
}

FiniteOperator parse_matrix(const json& spec) {
  const int J = spec.at("J").get<int>();
  if (J < 1) throw std::invalid_argument("operator spec: J must be >= 1");
  const std::string basis_name = spec.value("basis", "value");
  const Basis basis = basis_name == "value"         ? Basis::value
                      : basis_name == "coefficient" ? Basis::coefficient
                                                    : throw std::invalid_argument(
                                                          "operator spec: unknown basis");
  const json& entries = spec.at("entries");
  if (static_cast<int>(entries.size()) != J * J)
    throw std::invalid_argument("operator spec: entries must have J*J elements");
  Eigen::MatrixXcd m(J, J);
  for (int r = 0; r < J; ++r)
    for (int c = 0; c < J; ++c) m(r, c) = parse_complex(entries[r * J + c]);
  return FiniteOperator(std::move(m), basis);
}

LatticeOperator parse_lattice(const json& spec);

LatticeOperator parse_convolution(const json& spec) {
  const json& lam = spec.at("lambda");
  const std::string form = lam.at("form").get<std::string>();
  if (form == "quadratic_phase")
    return LatticeOperator::convolution(
        ConvolutionSymbol::quadratic_phase(lam.at("tau").get<double>()));
  if (form == "rotation")
    return LatticeOperator::convolution(
        ConvolutionSymbol::rotation(lam.at("alpha").get<double>()));
  if (form == "table") {
    std::vector<cplx> values;
    for (const auto& v : lam.at("values")) values.push_back(parse_complex(v));
    return LatticeOperator::convolution(
        ConvolutionSymbol::table(lam.value("offset", 0), std::move(values)));
  }
  throw std::invalid_argument("operator spec: unknown convolution form");
}

LatticeOperator parse_torus_multiplication(const json& spec) {
  FourierPolynomial g;
  for (const auto& [key, value] : spec.at("coeffs").items())
    g.set(std::stoll(key), parse_complex(value));
  return LatticeOperator::multiplication(std::move(g));
}

LatticeOperator parse_periodic(const json& spec) {
  const index_t tau = spec.at("tau").get<index_t>();
  std::map<std::pair<index_t, index_t>, cplx> block;
  for (const auto& e : spec.at("block").at("entries")) {
    block[{e.at("row").get<index_t>(), e.at("offset").get<index_t>()}] =
        parse_complex(e.at("value"));
  }
  return LatticeOperator::periodic(tau, std::move(block));
}

LatticeOperator parse_lattice(const json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "convolution") return parse_convolution(spec);
  if (kind == "multiplication") return parse_torus_multiplication(spec);
  if (kind == "periodic") return parse_periodic(spec);
  if (kind == "product") {
    const json& factors = spec.at("factors");
    if (factors.empty())
      throw std::invalid_argument("operator spec: product needs factors");
    LatticeOperator acc = parse_lattice(factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i)
      acc = acc * parse_lattice(factors[i]);
    return acc;
  }
  throw std::invalid_argument("operator spec: unknown circle kind '" + kind + "'");
}

}  // namespace

ParsedOperator parse_operator_spec(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw std::invalid_argument("operator spec: missing kind");
  const std::string kind = spec.at("kind").get<std::string>();
  ParsedOperator out;

  if (kind == "matrix") {
    out.domain = ParsedOperator::Domain::finite;
    out.finite_op = parse_matrix(spec);
    return out;
  }
  if (kind == "projector") {
    const int J = spec.at("J").get<int>();
    std::vector<int> subset = spec.at("subset").get<std::vector<int>>();
    out.domain = ParsedOperator::Domain::finite;
    out.finite_op = projector(FiniteSpace(J), SubsetMask(J, std::move(subset)));
    return out;
  }
  if (kind == "permutation") {
    out.domain = ParsedOperator::Domain::permutation;
    out.permutation = Permutation(spec.at("image").get<std::vector<int>>());
    return out;
  }
  if (kind == "multiplication" && spec.contains("J")) {
    const int J = spec.at("J").get<int>();
    const json& values = spec.at("values");
    if (static_cast<int>(values.size()) != J)
      throw std::invalid_argument("operator spec: values must have J elements");
    Eigen::VectorXcd g(J);
    for (int i = 0; i < J; ++i) g(i) = parse_complex(values[i]);
    out.domain = ParsedOperator::Domain::finite;
    out.finite_op = multiplication_operator(g);
    return out;
  }

  out.domain = ParsedOperator::Domain::torus;
  out.lattice_op = parse_lattice(spec);
  return out;
}

ParsedOperator parse_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("operator spec: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return parse_operator_spec(j);
}

ParsedOperator parse_operator_string(const std::string& text) {
  return parse_operator_spec(nlohmann::json::parse(text));
}

}  // namespace munorm
