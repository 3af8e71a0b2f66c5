#include "deeppm/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "deeppm/config.hpp"

namespace deeppm {

namespace {

constexpr const char* kMagic = "deeppm-checkpoint";
constexpr int kVersion = 1;

template <typename Block>
void write_block(std::ostream& out, const char* name, const Block& m) {
  out << "block " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.size(); ++i) out << format_number(m.data()[i]) << (i + 1 == m.size() ? '\n' : ' ');
}

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw ParseError("checkpoint: expected '" + word + "', got '" + got + "'");
}

template <typename Block>
void read_block(std::istream& in, const char* name, Block& m) {
  expect(in, "block");
  expect(in, name);
  Index rows = 0;
  Index cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) throw ParseError(std::string("checkpoint: bad shape for ") + name);
  if constexpr (Block::ColsAtCompileTime == 1) {
    if (cols != 1) throw ParseError(std::string("checkpoint: ") + name + " must be a column");
    m.resize(rows);
  } else {
    m.resize(rows, cols);
  }
  for (Index i = 0; i < m.size(); ++i) {
    std::string token;
    if (!(in >> token)) throw ParseError(std::string("checkpoint: truncated block ") + name);
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw ParseError(std::string("checkpoint: bad value in block ") + name);
    m.data()[i] = v;
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << kMagic << ' ' << kVersion << '\n'
      << "node_count " << ckpt.node_count << '\n'
      << "budget " << format_number(ckpt.budget) << '\n'
      << "rng_seed " << ckpt.rng_seed << '\n'
      << "fingerprint " << (ckpt.config_fingerprint.empty() ? "-" : ckpt.config_fingerprint) << '\n'
      << "surrogate_bias " << (ckpt.theta.use_bias ? 1 : 0) << '\n'
      << "seed_passthrough " << (ckpt.theta.seed_passthrough ? 1 : 0) << '\n';
  write_block(out, "w1", ckpt.theta.w1);
  write_block(out, "b1", ckpt.theta.b1);
  write_block(out, "w2", ckpt.theta.w2);
  write_block(out, "b2", ckpt.theta.b2);
  write_block(out, "enc_w1", ckpt.phi.enc_w1);
  write_block(out, "enc_b1", ckpt.phi.enc_b1);
  write_block(out, "enc_w2", ckpt.phi.enc_w2);
  write_block(out, "enc_b2", ckpt.phi.enc_b2);
  write_block(out, "dec_w1", ckpt.phi.dec_w1);
  write_block(out, "dec_b1", ckpt.phi.dec_b1);
  write_block(out, "dec_w2", ckpt.phi.dec_w2);
  write_block(out, "dec_b2", ckpt.phi.dec_b2);
  out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in) {
  expect(in, kMagic);
  int version = 0;
  if (!(in >> version) || version != kVersion) throw ParseError("checkpoint: unsupported version");
  Checkpoint ckpt;
  std::string budget;
  int bias = 0;
  int passthrough = 0;
  expect(in, "node_count");
  in >> ckpt.node_count;
  expect(in, "budget");
  in >> budget;
  expect(in, "rng_seed");
  in >> ckpt.rng_seed;
  expect(in, "fingerprint");
  in >> ckpt.config_fingerprint;
  expect(in, "surrogate_bias");
  in >> bias;
  expect(in, "seed_passthrough");
  in >> passthrough;
  if (!in) throw ParseError("checkpoint: malformed header");
  auto [ptr, ec] = std::from_chars(budget.data(), budget.data() + budget.size(), ckpt.budget);
  if (ec != std::errc{}) throw ParseError("checkpoint: bad budget");
  if (ckpt.config_fingerprint == "-") ckpt.config_fingerprint.clear();
  ckpt.theta.use_bias = bias != 0;
  ckpt.theta.seed_passthrough = passthrough != 0;

  read_block(in, "w1", ckpt.theta.w1);
  read_block(in, "b1", ckpt.theta.b1);
  read_block(in, "w2", ckpt.theta.w2);
  read_block(in, "b2", ckpt.theta.b2);
  read_block(in, "enc_w1", ckpt.phi.enc_w1);
  read_block(in, "enc_b1", ckpt.phi.enc_b1);
  read_block(in, "enc_w2", ckpt.phi.enc_w2);
  read_block(in, "enc_b2", ckpt.phi.enc_b2);
  read_block(in, "dec_w1", ckpt.phi.dec_w1);
  read_block(in, "dec_b1", ckpt.phi.dec_b1);
  read_block(in, "dec_w2", ckpt.phi.dec_w2);
  read_block(in, "dec_b2", ckpt.phi.dec_b2);
  expect(in, "end");

  const Index n = static_cast<Index>(ckpt.node_count);
  const Index h = ckpt.theta.w1.cols();
  require_shape(ckpt.theta.w1.rows() == 1 && ckpt.theta.w2.rows() == h && ckpt.theta.w2.cols() == 1 &&
                    ckpt.theta.b1.size() == h && ckpt.theta.b2.size() == 1,
                "checkpoint: inconsistent surrogate shapes");
  const auto& phi = ckpt.phi;
  require_shape(phi.enc_w1.cols() == n && phi.dec_w2.rows() == n && phi.dec_b2.size() == n &&
                    phi.enc_w2.cols() == phi.hidden() && phi.dec_w1.rows() == phi.hidden() &&
                    phi.dec_w1.cols() == phi.latent() && phi.enc_b1.size() == phi.hidden() &&
                    phi.enc_b2.size() == phi.latent() && phi.dec_b1.size() == phi.hidden() &&
                    phi.dec_w2.cols() == phi.hidden(),
                "checkpoint: inconsistent autoencoder shapes");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace deeppm
