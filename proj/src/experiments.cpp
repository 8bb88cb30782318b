// SPDX-License-Identifier: Apache-2.0
//
// cothp - coordinated Tomlinson-Harashima precoding simulator for overloaded
// multi-user MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "experiments.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace cothp {

namespace {

// Sub-stream roles of one (grid point, channel draw) cell. The id layout
// (point << 44 | draw << 4 | purpose) keeps every cell's streams disjoint
// and independent of the algorithm under test, so channel/bit/noise draws
// are shared across algorithms for paired comparison.
enum class Purpose : uint64_t { Channel = 0, WInit = 1, Bits = 2, Noise = 3 };

uint64_t sub_stream(size_t point, int draw, Purpose p) {
  return (static_cast<uint64_t>(point) << 44) | (static_cast<uint64_t>(draw) << 4) |
         static_cast<uint64_t>(p);
}

std::vector<Matrix> split_users(const Matrix& h_full, const ScenarioConfig& sc) {
  std::vector<Matrix> h_users;
  h_users.reserve(sc.users());
  int r0 = 0;
  for (int k = 0; k < sc.users(); ++k) {
    Matrix hk(sc.n_rx[k], sc.n_tx);
    for (int i = 0; i < hk.rows(); ++i)
      for (int j = 0; j < hk.cols(); ++j) hk(i, j) = h_full(r0 + i, j);
    h_users.push_back(std::move(hk));
    r0 += sc.n_rx[k];
  }
  return h_users;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& what) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("malformed " + what + " '" + tok + "'");
  return v;
}

}  // namespace

NoiseModel ebn0_to_noise_var(double ebn0_db, const ScenarioConfig& sc,
                             const Constellation& c) {
  const double es = 1.0;  // unit-energy constellations
  const double lin = std::pow(10.0, ebn0_db / 10.0);
  return NoiseModel(sc.total_rx() * es / (sc.n_tx * c.bits_per_symbol * lin));
}

std::vector<double> parse_ebn0_grid(const std::string& text) {
  std::vector<std::string> toks;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) toks.push_back(tok);
  if (toks.size() == 1) return {parse_double(toks[0], "Eb/N0 value")};
  if (toks.size() != 3)
    throw ConfigError("malformed Eb/N0 grid '" + text + "' (expected start:step:stop)");
  const double start = parse_double(toks[0], "Eb/N0 start");
  const double step = parse_double(toks[1], "Eb/N0 step");
  const double stop = parse_double(toks[2], "Eb/N0 stop");
  if (step <= 0.0) throw ConfigError("Eb/N0 grid step must be > 0");
  if (stop < start) throw ConfigError("Eb/N0 grid stop must be >= start");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
  return grid;
}

double cooperative_bound(const Matrix& h, double xi, double sigma_n_sq) {
  if (!(sigma_n_sq > 0.0) || !(xi > 0.0))
    throw ConfigError("cooperative_bound: xi and sigma_n^2 must be > 0");
  const int nr = h.rows(), nt = h.cols();
  const double s = std::sqrt(xi / (nt * sigma_n_sq));
  // A = [s H^H | I]; A A^H = I + s^2 H^H H, whose determinant equals
  // det(I + s^2 H H^H) and factors through the LQ diagonal.
  Matrix a(nt, nr + nt);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nr; ++j) a(i, j) = s * std::conj(h(j, i));
    a(i, nr + i) = 1.0;
  }
  const LqResult lq = lq_decompose(a);
  double bits = 0.0;
  for (int i = 0; i < nt; ++i) bits += 2.0 * std::log2(lq.L(i, i).real());
  return bits;
}

double sum_rate_bits(const CoordinateState& st, double sigma_n_sq, double sigma_s_sq) {
  if (!(sigma_n_sq > 0.0)) throw ConfigError("sum_rate_bits: sigma_n^2 must be > 0");
  switch (st.algo) {
    case CoordAlgo::dTHP: {
      double rate = 0.0;
      for (double g : st.filters->g) rate += std::log2(1.0 + sigma_s_sq / (g * g * sigma_n_sq));
      return rate;
    }
    case CoordAlgo::cTHP: {
      const double beta = st.filters->beta;
      return st.filters->streams() *
             std::log2(1.0 + sigma_s_sq / (beta * beta * sigma_n_sq));
    }
    case CoordAlgo::ZfCbf: {
      const Matrix m = st.H_e * st.P_e;
      double rate = 0.0;
      for (int i = 0; i < m.rows(); ++i) {
        double interf = 0.0;
        for (int j = 0; j < m.cols(); ++j)
          if (j != i) interf += std::norm(m(i, j));
        const double sinr =
            sigma_s_sq * std::norm(m(i, i)) / (sigma_s_sq * interf + sigma_n_sq);
        rate += std::log2(1.0 + sinr);
      }
      return rate;
    }
  }
  return 0.0;
}

std::vector<SweepResult> run_sweep(const SweepRequest& req) {
  ScenarioConfig sc = req.scenario;
  sc.validate();
  req.coord.validate();
  if (req.trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (req.frames < 0) throw ConfigError("sweep: frames must be >= 0");
  if (req.ebn0_grid.empty()) throw ConfigError("sweep: Eb/N0 grid is empty");
  if (req.algos.empty()) throw ConfigError("sweep: no algorithm selected");

  const Constellation c = sc.modulation == ModulationScheme::QPSK
                              ? Constellation::qpsk(req.tau_override)
                              : Constellation::qam16(req.tau_override);
  const int r = sc.total_streams();
  const int bits_per_frame = r * c.bits_per_symbol;

  std::vector<SweepResult> rows;
  rows.reserve(req.algos.size() * req.ebn0_grid.size());
  for (CoordAlgo algo : req.algos) {
    for (size_t pi = 0; pi < req.ebn0_grid.size(); ++pi) {
      const double ebn0 = req.ebn0_grid[pi];
      const double sigma_n_sq = ebn0_to_noise_var(ebn0, sc, c).sigma_n_sq;

      long long bit_errors = 0, bits_total = 0;
      double rate_acc = 0.0, iter_acc = 0.0;
      int converged_count = 0;

      for (int draw = 0; draw < req.trials; ++draw) {
        RngStream rng_ch(req.seed, sub_stream(pi, draw, Purpose::Channel));
        const Matrix h_full = generate_channel(sc.total_rx(), sc.n_tx, rng_ch);
        const std::vector<Matrix> h_users = split_users(h_full, sc);

        RngStream rng_w(req.seed, sub_stream(pi, draw, Purpose::WInit));
        const CoordinateState st =
            algo == CoordAlgo::ZfCbf
                ? run_coordination_zf(h_users, req.coord, sc, rng_w)
                : run_coordination(h_users, req.coord,
                                   algo == CoordAlgo::dTHP ? ThpVariant::dTHP
                                                           : ThpVariant::cTHP,
                                   sc, rng_w);
        iter_acc += st.iterations_used;
        converged_count += st.converged ? 1 : 0;
        rate_acc += sum_rate_bits(st, sigma_n_sq);

        if (req.frames > 0) {
          RngStream rng_bits(req.seed, sub_stream(pi, draw, Purpose::Bits));
          RngStream rng_noise(req.seed, sub_stream(pi, draw, Purpose::Noise));
          for (int f = 0; f < req.frames; ++f) {
            std::vector<uint8_t> payload(static_cast<size_t>(bits_per_frame));
            for (uint8_t& b : payload) b = rng_bits.next_bit();
            const SymbolFrame sent = map_bits(payload, c);
            const SymbolFrame detected =
                end_to_end_transmit(st, h_users, sent, c, sigma_n_sq, rng_noise);
            for (int b = 0; b < bits_per_frame; ++b)
              bit_errors += payload[static_cast<size_t>(b)] != detected.bits[static_cast<size_t>(b)];
            bits_total += bits_per_frame;
          }
        }
      }

      SweepResult row;
      row.algo = algo;
      row.ebn0_db = ebn0;
      row.ber = bits_total > 0 ? static_cast<double>(bit_errors) / bits_total : 0.0;
      row.sum_rate_bits = rate_acc / req.trials;
      row.avg_iterations = iter_acc / req.trials;
      row.convergence_rate = static_cast<double>(converged_count) / req.trials;
      row.trials = req.trials;
      row.seed = req.seed;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<SweepResult> ber_sweep(const ScenarioConfig& sc, CoordAlgo algo,
                                   const std::vector<double>& ebn0_grid, int trials,
                                   int frames, const CoordinateConfig& cfg, uint64_t seed) {
  SweepRequest req;
  req.scenario = sc;
  req.algos = {algo};
  req.ebn0_grid = ebn0_grid;
  req.trials = trials;
  req.frames = frames;
  req.coord = cfg;
  req.seed = seed;
  return run_sweep(req);
}

std::vector<SweepResult> sumrate_sweep(const ScenarioConfig& sc, CoordAlgo algo,
                                       const std::vector<double>& ebn0_grid, int trials,
                                       const CoordinateConfig& cfg, uint64_t seed) {
  return ber_sweep(sc, algo, ebn0_grid, trials, SweepRequest{}.frames, cfg, seed);
}

std::string to_csv(const std::vector<SweepResult>& rows) {
  std::string out = "algo,ebn0_db,ber,sum_rate_bits,avg_iterations,convergence_rate,trials,seed\n";
  for (const SweepResult& r : rows) {
    out += to_string(r.algo);
    out += ',';
    out += fmt(r.ebn0_db);
    out += ',';
    out += fmt(r.ber);
    out += ',';
    out += fmt(r.sum_rate_bits);
    out += ',';
    out += fmt(r.avg_iterations);
    out += ',';
    out += fmt(r.convergence_rate);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::string to_json(const std::vector<SweepResult>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepResult& r : rows) {
    nlohmann::ordered_json obj;
    obj["algo"] = to_string(r.algo);
    obj["ebn0_db"] = r.ebn0_db;
    obj["ber"] = r.ber;
    obj["sum_rate_bits"] = r.sum_rate_bits;
    obj["avg_iterations"] = r.avg_iterations;
    obj["convergence_rate"] = r.convergence_rate;
    obj["trials"] = r.trials;
    obj["seed"] = r.seed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace cothp
