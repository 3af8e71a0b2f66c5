#pragma once

#include <cstdint>

#include "deeppm/numerics.hpp"
#include "deeppm/types.hpp"

namespace deeppm {

/// Seed-mask autoencoder.
///   encoder: N -> H_ae (ReLU) -> Z (linear)
///   decoder: Z -> H_ae (ReLU) -> N logits -> sigmoid
/// Masks and codes are stored one per column.
struct AutoencoderParams {
  MatrixX enc_w1;  // H_ae x N
  VectorX enc_b1;
  MatrixX enc_w2;  // Z x H_ae
  VectorX enc_b2;
  MatrixX dec_w1;  // H_ae x Z
  VectorX dec_b1;
  MatrixX dec_w2;  // N x H_ae
  VectorX dec_b2;

  Index node_count() const { return enc_w1.cols(); }
  Index hidden() const { return enc_w1.rows(); }
  Index latent() const { return enc_w2.rows(); }

  static AutoencoderParams zeros(Index node_count, Index hidden, Index latent);
  static AutoencoderParams glorot(Index node_count, Index hidden, Index latent, std::uint64_t rng_seed);

  template <typename Fn>
  void for_each_block(Fn&& fn) {
    fn(enc_w1);
    fn(enc_b1);
    fn(enc_w2);
    fn(enc_b2);
    fn(dec_w1);
    fn(dec_b1);
    fn(dec_w2);
    fn(dec_b2);
  }
  template <typename Fn>
  void for_each_block(Fn&& fn) const {
    fn(enc_w1);
    fn(enc_b1);
    fn(enc_w2);
    fn(enc_b2);
    fn(dec_w1);
    fn(dec_b1);
    fn(dec_w2);
    fn(dec_b2);
  }
};

MatrixX encode(const AutoencoderParams& phi, const MatrixX& x);
MatrixX decode(const AutoencoderParams& phi, const MatrixX& z);

struct AutoencoderLoss {
  Scalar loss = 0;
  AutoencoderParams grad;
};

/// Mean reconstruction BCE over every entry of the batch, and its gradient.
AutoencoderLoss recon_loss_and_grads(const AutoencoderParams& phi, const MatrixX& x);

/// Given dL/dx̃ at x̃ = decode(z), returns dL/dz.
VectorX decode_vjp(const AutoencoderParams& phi, const VectorX& z, const VectorX& upstream);

}  // namespace deeppm
