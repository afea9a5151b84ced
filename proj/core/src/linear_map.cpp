#include "hamlat/linear_map.hpp"

namespace hamlat {

LinearMap<Gaussian> to_gaussian(const LinearMap<Rational>& A) {
  std::vector<std::size_t> src(A.dim());
  std::vector<Gaussian> sc(A.dim());
  for (std::size_t t = 0; t < A.dim(); ++t) {
    src[t] = A.source(t);
    sc[t] = Gaussian(A.scale(t));
  }
  return LinearMap<Gaussian>(A.space(), std::move(src), std::move(sc), A.order(), A.name());
}

}  // namespace hamlat
