#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "deeppm/autoencoder.hpp"
#include "deeppm/surrogate.hpp"

namespace deeppm {

/// Trained student: surrogate θ and autoencoder φ plus the metadata needed
/// to refuse use on an incompatible graph.
struct Checkpoint {
  SurrogateParams theta;
  AutoencoderParams phi;
  std::size_t node_count = 0;
  Scalar budget = 0;
  std::uint64_t rng_seed = 0;
  std::string config_fingerprint;
};

/// Text format, version 1:
///
///   deeppm-checkpoint 1
///   node_count <N>
///   budget <B>
///   rng_seed <seed>
///   fingerprint <hex>
///   surrogate_bias <0|1>
///   seed_passthrough <0|1>
///   block <name> <rows> <cols>
///   <rows*cols values, column-major, shortest round-trip decimal>
///   ...
///   end
///
/// Blocks appear in the order w1 b1 w2 b2 enc_w1 enc_b1 enc_w2 enc_b2 dec_w1 dec_b1 dec_w2 dec_b2.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace deeppm
