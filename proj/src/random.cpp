#include "qmlab/random.hpp"

namespace qmlab {

Mat random_gaussian_matrix(Rng& rng, int dim) {
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.cnormal();
  return g;
}

Mat random_unitary(Rng& rng, int dim) {
  const Mat g = random_gaussian_matrix(rng, dim);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so Q is drawn from the Haar measure rather than from the
  // QR convention of the library.
  for (int c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    q.col(c) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

DensityMatrix random_density(Rng& rng, int dim) {
  const Mat g = random_gaussian_matrix(rng, dim);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + Mat(rho.adjoint()));
  return DensityMatrix(ComplexMatrix(std::move(rho)));
}

ComplexMatrix random_hermitian(Rng& rng, int dim) {
  const Mat g = random_gaussian_matrix(rng, dim);
  return ComplexMatrix(0.5 * (g + g.adjoint()));
}

SampledResolution random_resolution(Rng& rng, int dim, int blocks) {
  if (blocks < 1 || blocks > dim) throw Error("random_resolution: invalid block count");
  // Random composition of dim into `blocks` positive parts.
  std::vector<int> sizes(blocks, 1);
  for (int extra = dim - blocks; extra > 0; --extra)
    sizes[static_cast<size_t>(rng.integer(blocks))] += 1;

  const Mat basis = random_unitary(rng, dim);
  std::vector<Projection> projections;
  std::vector<std::string> labels;
  int offset = 0;
  for (int b = 0; b < blocks; ++b) {
    const Mat cols = basis.middleCols(offset, sizes[b]);
    projections.emplace_back(ComplexMatrix(cols * cols.adjoint()));
    labels.push_back("b" + std::to_string(b));
    offset += sizes[b];
  }
  return SampledResolution{ResolutionOfUnity(std::move(projections), std::move(labels)),
                           basis, std::move(sizes)};
}

ComplexMatrix random_commutant_element(Rng& rng, const SampledResolution& r) {
  const int dim = static_cast<int>(r.basis.rows());
  Mat block_diag = Mat::Zero(dim, dim);
  int offset = 0;
  for (int s : r.sizes) {
    block_diag.block(offset, offset, s, s) = random_hermitian(rng, s).mat();
    offset += s;
  }
  Mat a = r.basis * block_diag * r.basis.adjoint();
  a = 0.5 * (a + Mat(a.adjoint()));
  return ComplexMatrix(std::move(a));
}

}  // namespace qmlab
