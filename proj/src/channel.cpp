#include "rishp/channel.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace rishp {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

cd draw_gain(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

double draw_angle(Rng& rng) {
  std::uniform_real_distribution<double> uniform(-kHalfPi, kHalfPi);
  return uniform(rng);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void write_matrix(std::ostream& out, const char* name, const CMatrixXd& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << fmt::format("{:.17g},{:.17g}", m(i, j).real(), m(i, j).imag());
    }
    out << '\n';
  }
}

CMatrixXd read_matrix(std::istream& in, const std::string& expected_name) {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> name >> rows >> cols) || name != expected_name || rows < 0 || cols < 0) {
    throw std::runtime_error(fmt::format("channel file: bad header for {}", expected_name));
  }
  CMatrixXd m(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> token)) throw std::runtime_error("channel file: truncated matrix data");
      const auto comma = token.find(',');
      if (comma == std::string::npos) throw std::runtime_error("channel file: expected re,im");
      m(i, j) = cd(std::stod(token.substr(0, comma)), std::stod(token.substr(comma + 1)));
    }
  }
  return m;
}

}  // namespace

CMatrixXd bs_ris_channel(int M, int R, double d_over_lambda, std::span<const PathParams> paths) {
  CMatrixXd H = CMatrixXd::Zero(R, M);
  for (const auto& path : paths) {
    const CVectorXd rx = upa_response<double>(R, d_over_lambda, path.aoa_azimuth, path.aoa_elevation);
    const CVectorXd tx = ula_response<double>(M, d_over_lambda, path.aod_azimuth);
    H.noalias() += path.gain * rx * tx.adjoint();
  }
  H *= std::sqrt(static_cast<double>(M) * R / static_cast<double>(paths.size()));
  return H;
}

CMatrixXd ris_ue_channel(int R, double d_over_lambda,
                         std::span<const std::vector<PathParams>> per_user_paths) {
  const auto K = static_cast<Eigen::Index>(per_user_paths.size());
  CMatrixXd H(K, R);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& paths = per_user_paths[k];
    CVectorXd h = CVectorXd::Zero(R);
    for (const auto& path : paths) {
      h += path.gain * upa_response<double>(R, d_over_lambda, path.aod_azimuth, path.aod_elevation);
    }
    h *= std::sqrt(static_cast<double>(R) / static_cast<double>(paths.size()));
    H.row(k) = h.adjoint();
  }
  return H;
}

CMatrixXd direct_channel(int M, double d_over_lambda,
                         std::span<const std::vector<PathParams>> per_user_paths) {
  const auto K = static_cast<Eigen::Index>(per_user_paths.size());
  CMatrixXd H(K, M);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& paths = per_user_paths[k];
    CVectorXd h = CVectorXd::Zero(M);
    for (const auto& path : paths) {
      h += path.gain * ula_response<double>(M, d_over_lambda, path.aod_azimuth);
    }
    h *= std::sqrt(static_cast<double>(M) / static_cast<double>(paths.size()));
    H.row(k) = h.adjoint();
  }
  return H;
}

std::vector<PathParams> draw_bs_ris_paths(int L_B, Rng& rng) {
  std::vector<PathParams> paths(L_B);
  for (auto& p : paths) p.gain = draw_gain(rng);
  for (auto& p : paths) {
    p.aoa_azimuth = draw_angle(rng);
    p.aoa_elevation = draw_angle(rng);
    p.aod_azimuth = draw_angle(rng);
  }
  return paths;
}

std::vector<std::vector<PathParams>> draw_ris_ue_paths(int K, int L_I, Rng& rng) {
  std::vector<double> shared_elevation(L_I);
  for (auto& phi : shared_elevation) phi = draw_angle(rng);
  std::vector<std::vector<PathParams>> users(K, std::vector<PathParams>(L_I));
  for (auto& paths : users) {
    for (auto& p : paths) p.gain = draw_gain(rng);
    for (int l = 0; l < L_I; ++l) {
      paths[l].aod_azimuth = draw_angle(rng);
      paths[l].aod_elevation = shared_elevation[l];
    }
  }
  return users;
}

std::vector<std::vector<PathParams>> draw_direct_paths(int K, int L_I, Rng& rng) {
  std::vector<std::vector<PathParams>> users(K, std::vector<PathParams>(L_I));
  for (auto& paths : users) {
    for (auto& p : paths) p.gain = draw_gain(rng);
    for (auto& p : paths) p.aod_azimuth = draw_angle(rng);
  }
  return users;
}

CMatrixXd synth_bs_ris(const SystemConfig& cfg, Rng& rng) {
  const auto paths = draw_bs_ris_paths(cfg.L_B, rng);
  return bs_ris_channel(cfg.M, cfg.R, cfg.d_over_lambda, paths);
}

CMatrixXd synth_ris_ue(const SystemConfig& cfg, Rng& rng) {
  const auto paths = draw_ris_ue_paths(cfg.K, cfg.L_I, rng);
  return ris_ue_channel(cfg.R, cfg.d_over_lambda, paths);
}

CMatrixXd synth_direct(const SystemConfig& cfg, Rng& rng) {
  const auto paths = draw_direct_paths(cfg.K, cfg.L_I, rng);
  return direct_channel(cfg.M, cfg.d_over_lambda, paths);
}

ChannelSet synthesize_channels(const SystemConfig& cfg, Rng& rng, bool with_direct) {
  ChannelSet set;
  set.H_B = synth_bs_ris(cfg, rng);
  set.H_I = synth_ris_ue(cfg, rng);
  if (with_direct) set.H_D = synth_direct(cfg, rng);
  return set;
}

void write_channels(std::ostream& out, const ChannelSet& channels) {
  out << "channelset 1\n";
  write_matrix(out, "H_B", channels.H_B);
  write_matrix(out, "H_I", channels.H_I);
  if (channels.H_D) write_matrix(out, "H_D", *channels.H_D);
}

ChannelSet read_channels(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "channelset" || version != 1) {
    throw std::runtime_error("channel file: missing 'channelset 1' header");
  }
  ChannelSet set;
  set.H_B = read_matrix(in, "H_B");
  set.H_I = read_matrix(in, "H_I");
  in >> std::ws;
  if (in.peek() != std::char_traits<char>::eof()) set.H_D = read_matrix(in, "H_D");
  if (set.H_I.cols() != set.H_B.rows()) throw std::runtime_error("channel file: H_I/H_B shape mismatch");
  if (set.H_D && (set.H_D->rows() != set.H_I.rows() || set.H_D->cols() != set.H_B.cols())) {
    throw std::runtime_error("channel file: H_D shape mismatch");
  }
  return set;
}

std::uint64_t fingerprint(const ChannelSet& channels) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const CMatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double parts[2] = {m.data()[i].real(), m.data()[i].imag()};
      unsigned char bytes[sizeof parts];
      std::memcpy(bytes, parts, sizeof parts);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  };
  mix(channels.H_B);
  mix(channels.H_I);
  if (channels.H_D) mix(*channels.H_D);
  return h;
}

Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t purpose) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
  const std::uint64_t c = splitmix64(b ^ splitmix64(purpose + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace rishp
