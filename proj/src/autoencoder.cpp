#include "deeppm/autoencoder.hpp"

#include <cmath>

#include "deeppm/rng.hpp"

namespace deeppm {

namespace {

MatrixX glorot_block(Index rows, Index cols, Rng& rng) {
  const Scalar limit = std::sqrt(6.0 / static_cast<Scalar>(rows + cols));
  MatrixX m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-limit, limit);
  return m;
}

MatrixX affine(const MatrixX& w, const VectorX& b, const MatrixX& in) {
  MatrixX out = w * in;
  out.colwise() += b;
  return out;
}

struct DecoderPass {
  MatrixX pre;     // dec_w1 z + dec_b1
  MatrixX hidden;  // ReLU(pre)
  MatrixX out;     // σ(dec_w2 hidden + dec_b2)
};

DecoderPass run_decoder(const AutoencoderParams& phi, const MatrixX& z) {
  require_shape(z.rows() == phi.latent(), "decode: code length must equal latent dimension");
  DecoderPass pass;
  pass.pre = affine(phi.dec_w1, phi.dec_b1, z);
  pass.hidden = relu(pass.pre);
  pass.out = sigmoid(affine(phi.dec_w2, phi.dec_b2, pass.hidden));
  return pass;
}

// Back through the decoder from dL/dlogits; accumulates into grad (if any) and returns dL/dz.
MatrixX decoder_backward(const AutoencoderParams& phi, const MatrixX& z, const DecoderPass& pass,
                         const MatrixX& dlogits, AutoencoderParams* grad) {
  MatrixX dhidden = phi.dec_w2.transpose() * dlogits;
  dhidden = dhidden.cwiseProduct((pass.pre.array() > 0).cast<Scalar>().matrix());
  if (grad) {
    grad->dec_w2.noalias() = dlogits * pass.hidden.transpose();
    grad->dec_b2 = dlogits.rowwise().sum();
    grad->dec_w1.noalias() = dhidden * z.transpose();
    grad->dec_b1 = dhidden.rowwise().sum();
  }
  return phi.dec_w1.transpose() * dhidden;
}

}  // namespace

AutoencoderParams AutoencoderParams::zeros(Index node_count, Index hidden, Index latent) {
  return AutoencoderParams{MatrixX::Zero(hidden, node_count), VectorX::Zero(hidden),
                           MatrixX::Zero(latent, hidden),     VectorX::Zero(latent),
                           MatrixX::Zero(hidden, latent),     VectorX::Zero(hidden),
                           MatrixX::Zero(node_count, hidden), VectorX::Zero(node_count)};
}

AutoencoderParams AutoencoderParams::glorot(Index node_count, Index hidden, Index latent, std::uint64_t rng_seed) {
  require(node_count >= 1 && hidden >= 1 && latent >= 1, "autoencoder dimensions must be positive");
  Rng rng(rng_seed);
  AutoencoderParams phi = zeros(node_count, hidden, latent);
  phi.enc_w1 = glorot_block(hidden, node_count, rng);
  phi.enc_w2 = glorot_block(latent, hidden, rng);
  phi.dec_w1 = glorot_block(hidden, latent, rng);
  phi.dec_w2 = glorot_block(node_count, hidden, rng);
  return phi;
}

MatrixX encode(const AutoencoderParams& phi, const MatrixX& x) {
  require_shape(x.rows() == phi.node_count(), "encode: mask length must equal node count");
  return affine(phi.enc_w2, phi.enc_b2, relu(affine(phi.enc_w1, phi.enc_b1, x)));
}

MatrixX decode(const AutoencoderParams& phi, const MatrixX& z) { return run_decoder(phi, z).out; }

AutoencoderLoss recon_loss_and_grads(const AutoencoderParams& phi, const MatrixX& x) {
  require(x.cols() >= 1, "reconstruction loss: empty batch");
  require_shape(x.rows() == phi.node_count(), "reconstruction loss: mask length must equal node count");

  const MatrixX enc_pre = affine(phi.enc_w1, phi.enc_b1, x);
  const MatrixX enc_hidden = relu(enc_pre);
  const MatrixX z = affine(phi.enc_w2, phi.enc_b2, enc_hidden);
  const DecoderPass pass = run_decoder(phi, z);

  AutoencoderLoss out;
  out.loss = bce(pass.out, x);
  out.grad = AutoencoderParams::zeros(phi.node_count(), phi.hidden(), phi.latent());

  const MatrixX dlogits = (pass.out - x) / static_cast<Scalar>(x.size());
  const MatrixX dz = decoder_backward(phi, z, pass, dlogits, &out.grad);

  out.grad.enc_w2.noalias() = dz * enc_hidden.transpose();
  out.grad.enc_b2 = dz.rowwise().sum();
  MatrixX dhidden = phi.enc_w2.transpose() * dz;
  dhidden = dhidden.cwiseProduct((enc_pre.array() > 0).cast<Scalar>().matrix());
  out.grad.enc_w1.noalias() = dhidden * x.transpose();
  out.grad.enc_b1 = dhidden.rowwise().sum();
  return out;
}

VectorX decode_vjp(const AutoencoderParams& phi, const VectorX& z, const VectorX& upstream) {
  require_shape(upstream.size() == phi.node_count(), "decode_vjp: upstream length must equal node count");
  const MatrixX zm = z;
  const DecoderPass pass = run_decoder(phi, zm);
  const MatrixX dlogits = upstream.cwiseProduct(pass.out.col(0).cwiseProduct((1.0 - pass.out.col(0).array()).matrix()));
  return decoder_backward(phi, zm, pass, dlogits, nullptr).col(0);
}

}  // namespace deeppm
