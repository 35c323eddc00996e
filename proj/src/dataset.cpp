// Copyright 2026 The srsik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "srsik/dataset.hpp"

#include "binary_io.hpp"
#include "srsik/kinematics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

namespace srsik {
namespace {

constexpr char kMagic[4] = {'R', 'D', 'I', 'K'};
constexpr int kMaxAttempts = 1000;
constexpr std::uint64_t kChunk = 1U << 16;
constexpr std::uint64_t kSplitStream = 0x5eedc0de5eedc0deULL;

void encode_sample(std::string& b, const Sample& s) {
  for (double v : s.zeta) detail::put_f64(b, v);
  detail::put_u8(b, s.label_class);
  detail::put_u8(b, s.label_bin);
}

Sample decode_sample(const char* p) {
  Sample s;
  for (int i = 0; i < kFeatureDim; ++i) s.zeta[i] = detail::get_f64(p + 8 * i);
  s.label_class = static_cast<std::uint8_t>(p[8 * kFeatureDim]);
  s.label_bin = static_cast<std::uint8_t>(p[8 * kFeatureDim + 1]);
  return s;
}

std::string header_bytes(const DatasetHeader& h) {
  std::string b(kMagic, 4);
  detail::put_uint(b, h.version);
  detail::put_uint(b, h.sample_count);
  detail::put_uint(b, h.n_b);
  detail::put_uint(b, h.n_phi);
  detail::put_f64(b, h.omega_m);
  detail::put_f64(b, h.omega_c);
  detail::put_uint(b, h.geometry_hash);
  detail::put_uint(b, h.seed);
  return b;
}

DatasetHeader parse_header(const char* p, const std::filesystem::path& path) {
  if (std::memcmp(p, kMagic, 4) != 0) throw Error(ErrorCode::kParse, path.string() + ": not a dataset file");
  DatasetHeader h;
  h.version = detail::get_uint<std::uint32_t>(p + 4);
  if (h.version != kDatasetVersion) {
    throw Error(ErrorCode::kParse, path.string() + ": unsupported dataset version " + std::to_string(h.version));
  }
  h.sample_count = detail::get_uint<std::uint64_t>(p + 8);
  h.n_b = detail::get_uint<std::uint32_t>(p + 16);
  h.n_phi = detail::get_uint<std::uint32_t>(p + 20);
  h.omega_m = detail::get_f64(p + 24);
  h.omega_c = detail::get_f64(p + 32);
  h.geometry_hash = detail::get_uint<std::uint64_t>(p + 40);
  h.seed = detail::get_uint<std::uint64_t>(p + 48);
  return h;
}

DatasetHeader make_header(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t count,
                          std::uint64_t seed) {
  DatasetHeader h;
  h.sample_count = count;
  h.n_b = static_cast<std::uint32_t>(cfg.n_b);
  h.n_phi = static_cast<std::uint32_t>(cfg.n_phi);
  h.omega_m = cfg.weights.omega_m;
  h.omega_c = cfg.weights.omega_c;
  h.geometry_hash = geom.hash();
  h.seed = seed;
  return h;
}

// Fills out[first, first + n) in parallel; element i is sample first + i.
std::uint64_t fill_range(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t seed,
                         std::uint64_t first, std::uint64_t n, int workers, Sample* out) {
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> discarded{0};
  auto work = [&] {
    std::uint64_t local = 0;
    for (std::uint64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      int d = 0;
      out[i] = generate_sample(geom, cfg, seed, first + i, &d);
      local += static_cast<std::uint64_t>(d);
    }
    discarded += local;
  };
  const int nt = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(n, 1024))));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return discarded.load();
}

void check_generate_args(const SelectionConfig& cfg, std::uint64_t count, int workers) {
  cfg.validate();
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  if (cfg.n_b > 255) throw Error(ErrorCode::kInvalidArgument, "n_b must fit in one byte");
}

}  // namespace

Features encode_features(const JointVector& q0, const Pose& target) {
  Features z;
  z.segment<7>(0) = q0;
  z.segment<3>(7) = target.R.col(0);
  z.segment<3>(10) = target.R.col(1);
  z.segment<3>(13) = target.R.col(2);
  z.segment<3>(16) = target.p;
  return z;
}

JointVector Sample::q0() const {
  JointVector q;
  for (int i = 0; i < kDof; ++i) q[i] = zeta[i];
  return q;
}

Pose Sample::target() const {
  Pose t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) t.R(r, c) = zeta[7 + 3 * c + r];
    t.p[r] = zeta[16 + r];
  }
  return t;
}

SelectionConfig DatasetHeader::selection() const {
  return SelectionConfig{SelectionWeights{omega_m, omega_c}, static_cast<int>(n_phi), static_cast<int>(n_b)};
}

std::uint64_t DatasetHeader::hash() const {
  const std::string b = header_bytes(*this);
  return detail::fnv1a(b.data(), b.size());
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ index)) {}

double SampleRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Pair sample_pair(const RobotGeometry& geom, SampleRng& rng) {
  Pair p;
  JointVector qt;
  for (int i = 0; i < kDof; ++i) p.q0[i] = rng.uniform(-geom.q_max[i], geom.q_max[i]);
  for (int i = 0; i < kDof; ++i) qt[i] = rng.uniform(-geom.q_max[i], geom.q_max[i]);
  p.target = forward_kinematics(geom, qt);
  return p;
}

Sample label_pair(const RobotGeometry& geom, const SelectionConfig& cfg, const JointVector& q0,
                  const Pose& target) {
  const SelectionResult r = exhaustive_select(geom, cfg.weights, q0, target, cfg.n_phi);
  Sample s;
  const Features z = encode_features(q0, target);
  std::copy(z.data(), z.data() + kFeatureDim, s.zeta.begin());
  s.label_class = static_cast<std::uint8_t>(r.branch.index);
  s.label_bin = static_cast<std::uint8_t>(r.bin(cfg.n_phi, cfg.n_b));
  return s;
}

Sample generate_sample(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t seed,
                       std::uint64_t index, int* discarded) {
  SampleRng rng(seed, index);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Pair p = sample_pair(geom, rng);
    try {
      Sample s = label_pair(geom, cfg, p.q0, p.target);
      if (discarded != nullptr) *discarded = attempt;
      return s;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoFeasibleTarget && e.code() != ErrorCode::kUnreachable) throw;
    }
  }
  throw Error(ErrorCode::kNoFeasibleTarget,
              "sample " + std::to_string(index) + ": no feasible pair in " + std::to_string(kMaxAttempts) + " draws");
}

Dataset generate_samples(const RobotGeometry& geom, const SelectionConfig& cfg, std::uint64_t count,
                         std::uint64_t seed, int workers, GenerateStats* stats) {
  check_generate_args(cfg, count, workers);
  const auto t0 = std::chrono::steady_clock::now();
  Dataset d;
  d.header = make_header(geom, cfg, count, seed);
  d.samples.resize(count);
  const std::uint64_t discarded = fill_range(geom, cfg, seed, 0, count, workers, d.samples.data());
  if (stats != nullptr) {
    *stats = GenerateStats{};
    stats->count = count;
    stats->discarded = discarded;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const Sample& s : d.samples) ++stats->class_histogram[s.label_class];
  }
  return d;
}

GenerateStats generate_dataset(const RobotGeometry& geom, const SelectionConfig& cfg,
                               std::uint64_t count, std::uint64_t seed, int workers,
                               const std::filesystem::path& path, const ProgressFn& progress) {
  check_generate_args(cfg, count, workers);
  const auto t0 = std::chrono::steady_clock::now();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  const std::string hb = header_bytes(make_header(geom, cfg, count, seed));
  out.write(hb.data(), static_cast<std::streamsize>(hb.size()));

  GenerateStats stats;
  stats.count = count;
  std::vector<Sample> chunk;
  std::string buf;
  for (std::uint64_t first = 0; first < count; first += kChunk) {
    const std::uint64_t n = std::min(kChunk, count - first);
    chunk.resize(n);
    stats.discarded += fill_range(geom, cfg, seed, first, n, workers, chunk.data());
    buf.clear();
    buf.reserve(n * kSampleBytes);
    for (const Sample& s : chunk) {
      encode_sample(buf, s);
      ++stats.class_histogram[s.label_class];
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
    if (progress) progress(first + n, count);
  }
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return stats;
}

void write_header_bytes(std::ostream& out, const DatasetHeader& h) {
  const std::string b = header_bytes(h);
  out.write(b.data(), static_cast<std::streamsize>(b.size()));
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  if (data.header.sample_count != data.samples.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset header count does not match the samples");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  std::string buf = header_bytes(data.header);
  buf.reserve(kDatasetHeaderBytes + data.samples.size() * kSampleBytes);
  for (const Sample& s : data.samples) encode_sample(buf, s);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

DatasetHeader read_dataset_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char raw[kDatasetHeaderBytes];
  if (!in.read(raw, kDatasetHeaderBytes)) throw Error(ErrorCode::kParse, path.string() + ": truncated header");
  return parse_header(raw, path);
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char raw[kDatasetHeaderBytes];
  if (!in.read(raw, kDatasetHeaderBytes)) throw Error(ErrorCode::kParse, path.string() + ": truncated header");
  Dataset d;
  d.header = parse_header(raw, path);
  const std::uint64_t n = d.header.sample_count;
  std::string buf(n * kSampleBytes, '\0');
  if (!in.read(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw Error(ErrorCode::kParse, path.string() + ": truncated sample payload");
  }
  d.samples.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    d.samples[i] = decode_sample(buf.data() + i * kSampleBytes);
    if (d.samples[i].label_class >= kBranchCount || d.samples[i].label_bin >= d.header.n_b) {
      throw Error(ErrorCode::kParse, path.string() + ": label out of range at sample " + std::to_string(i));
    }
  }
  return d;
}

Split split_indices(std::uint64_t count, std::uint64_t seed, double train, double val) {
  if (!(train >= 0.0) || !(val >= 0.0) || train + val > 1.0 + 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "split fractions must be nonnegative and sum to at most 1");
  }
  std::vector<std::uint32_t> idx(count);
  for (std::uint64_t i = 0; i < count; ++i) idx[i] = static_cast<std::uint32_t>(i);
  SampleRng rng(seed, kSplitStream);
  for (std::uint64_t i = count; i > 1; --i) {
    const auto j = static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
  const auto n_train = static_cast<std::uint64_t>(std::llround(train * static_cast<double>(count)));
  const auto n_val = std::min(count - n_train, static_cast<std::uint64_t>(std::llround(val * static_cast<double>(count))));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
               idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  return s;
}

void export_csv(std::ostream& out, const Dataset& data, std::uint64_t limit) {
  out << "index,q0_1,q0_2,q0_3,q0_4,q0_5,q0_6,q0_7,ex_x,ex_y,ex_z,ey_x,ey_y,ey_z,ez_x,ez_y,ez_z,"
         "p_x,p_y,p_z,class,bin\n";
  out << std::setprecision(17);
  const std::uint64_t n = std::min<std::uint64_t>(limit, data.samples.size());
  for (std::uint64_t i = 0; i < n; ++i) {
    const Sample& s = data.samples[i];
    out << i;
    for (double v : s.zeta) out << ',' << v;
    out << ',' << static_cast<int>(s.label_class) << ',' << static_cast<int>(s.label_bin) << '\n';
  }
}

}  // namespace srsik
