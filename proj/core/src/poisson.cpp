#include "hamlat/poisson.hpp"

namespace hamlat {

GTensor to_gaussian(const Tensor& t) {
  GTensor out(t.space(), t.degree());
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i + 1; j < t.dim(); ++j) out.set(i, j, to_gaussian(t(i, j)));
  return out;
}

GField to_gaussian(const Field& f) {
  GField out(f.space());
  for (std::size_t i = 0; i < f.dim(); ++i) out[i] = to_gaussian(f[i]);
  return out;
}

Tensor real_exact(const GTensor& t) {
  Tensor out(t.space(), t.degree());
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i + 1; j < t.dim(); ++j) out.set(i, j, real_exact(t(i, j)));
  return out;
}

Field real_exact(const GField& f) {
  Field out(f.space());
  for (std::size_t i = 0; i < f.dim(); ++i) out[i] = real_exact(f[i]);
  return out;
}

namespace {

template <class K>
nlohmann::json tensor_json(const PoissonTensor<K>& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i + 1; j < t.dim(); ++j)
      if (!t(i, j).is_zero()) entries.push_back({{"i", i}, {"j", j}, {"poly", to_string(t(i, j))}});
  return {{"dim", t.dim()}, {"vars", t.space()->names()}, {"entries", std::move(entries)}};
}

template <class K>
nlohmann::json field_json(const VectorField<K>& f) {
  nlohmann::json comp = nlohmann::json::array();
  for (std::size_t i = 0; i < f.dim(); ++i) comp.push_back(to_string(f[i]));
  return {{"dim", f.dim()}, {"vars", f.space()->names()}, {"components", std::move(comp)}};
}

template <class K>
nlohmann::json jacobiator_json(const Jacobiator<K>& J) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [idx, p] : J.nonzero())
    entries.push_back({{"i", idx[0]}, {"j", idx[1]}, {"k", idx[2]}, {"poly", to_string(p)}});
  return {{"dim", J.dim()}, {"nonzero", std::move(entries)}};
}

}  // namespace

nlohmann::json to_json(const Tensor& t) { return tensor_json(t); }
nlohmann::json to_json(const GTensor& t) { return tensor_json(t); }
nlohmann::json to_json(const Field& f) { return field_json(f); }
nlohmann::json to_json(const GField& f) { return field_json(f); }
nlohmann::json to_json(const Jacobiator<Rational>& J) { return jacobiator_json(J); }
nlohmann::json to_json(const Jacobiator<Gaussian>& J) { return jacobiator_json(J); }

Tensor tensor_from_json(const nlohmann::json& j) {
  try {
    const auto vars = j.at("vars").get<std::vector<std::string>>();
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim != vars.size()) throw std::invalid_argument("tensor json: dim does not match vars");
    auto space = make_space(vars);
    Tensor t(space, j.value("degree", 0));
    for (const auto& e : j.at("entries")) {
      const auto i = e.at("i").get<std::size_t>();
      const auto k = e.at("j").get<std::size_t>();
      if (i >= dim || k >= dim || i == k) throw std::invalid_argument("tensor json: bad index");
      t.add(i, k, parse_poly(e.at("poly").get<std::string>(), space));
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("tensor json: ") + ex.what());
  }
}

}  // namespace hamlat
