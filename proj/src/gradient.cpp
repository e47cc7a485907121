// SPDX-License-Identifier: Apache-2.0
#include "nfc/gradient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nfc {

namespace {

Matrix ones_column(const Field& f, size_t s) {
  Matrix t(f, s, 1);
  for (size_t i = 0; i < s; ++i) t.at(i, 0) = 1;
  return t;
}

}  // namespace

size_t DataAssignment::min_replication() const {
  std::vector<size_t> count(subset_count, 0);
  for (const auto& z : zeta)
    for (size_t j : z) {
      require(j < subset_count, "subset index out of range");
      ++count[j];
    }
  size_t m = size_t(-1);
  for (size_t c : count) m = std::min(m, c);
  return subset_count == 0 ? 0 : m;
}

std::vector<Rational> DataAssignment::load_vector() const {
  std::vector<Rational> mu;
  for (const auto& z : zeta) {
    Rational acc(0);
    for (size_t j : z) acc += sizes[j];
    mu.push_back(acc);
  }
  return mu;
}

Vec GradientCodingScheme::encoder_column(size_t worker) const {
  require(worker < assignment.worker_count(), "worker index out of range");
  const Matrix& f = code->matrices().f;
  Vec col(f.rows());
  for (size_t r = 0; r < f.rows(); ++r) col[r] = f.at(r, worker);
  return col;
}

NetworkPtr build_network(const DataAssignment& assignment) {
  require(assignment.subset_count >= 1, "assignment needs data subsets");
  require(assignment.worker_count() >= 1, "assignment needs workers");
  require(assignment.min_replication() >= 1,
          "some data subset is assigned to no worker");

  NetworkDescription nd;
  const size_t kk = assignment.subset_count;
  const size_t n = assignment.worker_count();
  for (size_t j = 0; j < kk; ++j) nd.vertices.push_back("D" + std::to_string(j));
  for (size_t i = 0; i < n; ++i) nd.vertices.push_back("W" + std::to_string(i));
  nd.vertices.push_back("master");
  for (size_t j = 0; j < kk; ++j)
    for (size_t i = 0; i < n; ++i)
      if (assignment.zeta[i].count(j))
        nd.edges.push_back({"D" + std::to_string(j) + "_W" + std::to_string(i),
                            "D" + std::to_string(j), "W" + std::to_string(i)});
  for (size_t i = 0; i < n; ++i)
    nd.edges.push_back(
        {"W" + std::to_string(i) + "_m", "W" + std::to_string(i), "master"});
  for (size_t j = 0; j < kk; ++j) nd.sources.push_back("D" + std::to_string(j));
  nd.sinks = {"master"};
  return std::make_shared<Network>(Network::validate(nd));
}

bool check_replication(const DataAssignment& assignment, size_t tau_s,
                       size_t m) {
  return assignment.min_replication() >= tau_s + m;
}

GradientCodingScheme build_scheme(const DataAssignment& assignment,
                                  size_t tau_s, size_t tau_b, size_t m,
                                  size_t p, Field field, std::uint64_t seed) {
  require(m >= 1, "communication reduction factor must be positive");
  require(p >= 1 && p % m == 0, "m must divide the gradient length p");
  require(check_replication(assignment, tau_s, m),
          "replication below tau_s + m");
  if (tau_b > 0)
    require(assignment.min_replication() >= 2 * tau_b + m,
            "replication below 2*tau_b + m");

  GradientCodingScheme scheme;
  scheme.assignment = assignment;
  scheme.net = build_network(assignment);
  SumCodeBundle bundle = three_layer_sum_code(scheme.net, m, field);
  scheme.code = bundle.code;
  scheme.cert = bundle.certificate;
  scheme.tau_s = tau_s;
  scheme.tau_b = tau_b;
  scheme.m = m;
  scheme.p = p;
  scheme.q = bundle.q;
  scheme.seed = seed;
  ensure(scheme.cert.d_min >= tau_s + 1, "scheme cannot absorb the stragglers");
  ensure(scheme.cert.d_min >= 2 * tau_b + 1,
         "scheme cannot absorb the Byzantine budget");
  return scheme;
}

Vec worker_encode(const GradientCodingScheme& scheme, size_t worker,
                  const std::map<size_t, Vec>& gradients) {
  const auto& z = scheme.assignment.zeta.at(worker);
  require(gradients.size() == z.size(),
          "provide gradients exactly for the assigned subsets");
  for (const auto& [j, g] : gradients) {
    require(z.count(j), "gradient for an unassigned subset");
    require(g.size() == scheme.p, "gradient length mismatch");
  }
  const Field& f = scheme.code->field();
  const size_t m = scheme.m;
  const size_t blocks = scheme.p / m;
  Vec fi = scheme.encoder_column(worker);
  Vec msg(blocks, 0);
  for (size_t l = 0; l < blocks; ++l) {
    fval acc = 0;
    for (const auto& [j, g] : gradients)
      for (size_t t = 0; t < m; ++t)
        acc = f->add(acc, f->mul(g[l * m + t], fi[j * m + t]));
    msg[l] = acc;
  }
  return msg;
}

Vec master_decode(const GradientCodingScheme& scheme,
                  const std::vector<std::optional<Vec>>& messages,
                  size_t tau_b) {
  const size_t n = scheme.assignment.worker_count();
  require(messages.size() == n, "one message slot per worker");
  const size_t m = scheme.m;
  const size_t blocks = scheme.p / m;

  std::vector<size_t> straggler_edges;
  size_t stars = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!messages[i]) {
      ++stars;
      straggler_edges.push_back(
          scheme.net->edge_index("W" + std::to_string(i) + "_m"));
    } else {
      require(messages[i]->size() == blocks, "message length mismatch");
    }
  }
  require(stars <= scheme.tau_s, "more stragglers than the scheme tolerates");
  require(tau_b <= scheme.tau_b, "Byzantine budget above the scheme's");
  require(stars + 2 * tau_b <= scheme.cert.d_min - 1,
          "stragglers plus corruptions exceed the distance budget");

  const Field& f = scheme.code->field();
  Matrix t = ones_column(f, scheme.assignment.subset_count);
  Vec out(scheme.p, 0);
  for (size_t l = 0; l < blocks; ++l) {
    ReceivedWord word;
    word.values.assign(n, 0);
    word.star.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
      if (messages[i])
        word.values[i] = (*messages[i])[l];
      else
        word.star[i] = 1;
    }
    DecodeResult res =
        tau_b == 0
            ? erasure_decode(*scheme.code, t, m, word)
            : decode_errors_and_erasures(*scheme.code, t, m, word,
                                         straggler_edges, tau_b);
    require(res.ok(), "block decode failed: adversary exceeded the budget");
    ensure(res.value.size() == m, "decoded block has wrong length");
    for (size_t tt = 0; tt < m; ++tt) out[l * m + tt] = res.value[tt];
  }
  return out;
}

std::vector<Rational> optimize_load(const std::vector<WorkerProfile>& profiles,
                                    size_t tau_s, size_t m) {
  require(!profiles.empty(), "no workers");
  const Rational need((long long)(tau_s + m));
  Rational total(0);
  for (const auto& w : profiles) {
    require(w.storage >= Rational(0) && w.storage <= Rational(1),
            "storage fraction must lie in [0,1]");
    require(w.speed > Rational(0), "speed must be positive");
    total += w.storage;
  }
  require(total >= need,
          "infeasible: total storage below tau_s + m = " + to_string(need));

  auto g = [&](const Rational& t) {
    Rational acc(0);
    for (const auto& w : profiles) acc += std::min(w.storage, t * w.speed);
    return acc;
  };

  // breakpoints where workers saturate
  std::vector<Rational> bps;
  for (const auto& w : profiles) bps.push_back(w.storage / w.speed);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  // first breakpoint meeting the demand (g is nondecreasing)
  size_t lo = 0, hi = bps.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (g(bps[mid]) >= need)
      hi = mid;
    else
      lo = mid + 1;
  }
  ensure(lo < bps.size(), "demand not met at the largest breakpoint");
  Rational seg_lo = lo == 0 ? Rational(0) : bps[lo - 1];

  // inside (seg_lo, bps[lo]] the unsaturated workers grow linearly
  Rational fixed(0), slope(0);
  for (const auto& w : profiles) {
    if (w.storage / w.speed <= seg_lo)
      fixed += w.storage;
    else
      slope += w.speed;
  }
  ensure(slope > Rational(0), "no worker active in the crossing segment");
  Rational t_star = (need - fixed) / slope;
  ensure(t_star > seg_lo && t_star <= bps[lo], "t* escaped its segment");

  std::vector<Rational> mu;
  for (const auto& w : profiles)
    mu.push_back(std::min(w.storage, t_star * w.speed));
  return mu;
}

DataAssignment load_to_assignment(const std::vector<Rational>& mu,
                                  size_t tau_s, size_t m) {
  const Rational need((long long)(tau_s + m));
  Rational total(0);
  for (const auto& x : mu) {
    require(x >= Rational(0) && x <= Rational(1),
            "loads must lie in [0,1]");
    total += x;
  }
  require(total >= need, "loads sum below tau_s + m");

  // place worker arcs consecutively around the unit circle
  const size_t n = mu.size();
  std::vector<Rational> start(n), end(n);
  Rational pos(0);
  auto frac = [](Rational x) {
    Rational one(1);
    while (x >= one) x -= one;
    return x;
  };
  for (size_t i = 0; i < n; ++i) {
    start[i] = frac(pos);
    pos += mu[i];
    end[i] = frac(pos);
  }

  // subset boundaries: all arc endpoints
  std::vector<Rational> cuts{Rational(0)};
  for (size_t i = 0; i < n; ++i) {
    cuts.push_back(start[i]);
    cuts.push_back(end[i]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(Rational(1));

  DataAssignment a;
  std::vector<Rational> reps;  // left endpoint of each subset
  for (size_t j = 0; j + 1 < cuts.size(); ++j) {
    if (cuts[j] == cuts[j + 1]) continue;
    a.sizes.push_back(cuts[j + 1] - cuts[j]);
    reps.push_back(cuts[j]);
  }
  a.subset_count = a.sizes.size();
  a.zeta.assign(n, {});
  auto covers = [&](size_t i, const Rational& x) {
    if (mu[i] == Rational(0)) return false;
    if (mu[i] == Rational(1)) return true;
    if (start[i] < end[i]) return start[i] <= x && x < end[i];
    return x >= start[i] || x < end[i];  // wrapped arc
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < a.subset_count; ++j)
      if (covers(i, reps[j])) a.zeta[i].insert(j);

  // exactness and cover count
  auto realized = a.load_vector();
  for (size_t i = 0; i < n; ++i)
    ensure(realized[i] == mu[i], "realized load differs from mu*");
  for (size_t j = 0; j < a.subset_count; ++j) {
    size_t c = 0;
    for (size_t i = 0; i < n; ++i) c += a.zeta[i].count(j);
    ensure(c >= tau_s + m, "a subset is covered fewer than tau_s + m times");
  }
  return a;
}

SimulationReport simulate(const GradientCodingScheme& scheme,
                          const std::vector<Vec>& gradients,
                          const std::set<size_t>& stragglers,
                          const std::map<size_t, std::optional<Vec>>& byzantine,
                          std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const Field& f = scheme.code->field();
  const size_t kk = scheme.assignment.subset_count;
  const size_t n = scheme.assignment.worker_count();
  require(gradients.size() == kk, "one gradient per data subset");
  for (const auto& g : gradients)
    require(g.size() == scheme.p, "gradient length mismatch");

  SimulationReport rep;
  rep.expected.assign(scheme.p, 0);
  for (const auto& g : gradients)
    rep.expected = vec_add(f, rep.expected, g);

  auto t0 = clock::now();
  std::vector<std::optional<Vec>> messages(n);
  for (size_t i = 0; i < n; ++i) {
    std::map<size_t, Vec> mine;
    for (size_t j : scheme.assignment.zeta[i]) mine[j] = gradients[j];
    messages[i] = worker_encode(scheme, i, mine);
  }
  auto t1 = clock::now();

  Rng rng(seed);
  for (size_t i : stragglers) {
    require(i < n, "straggler index out of range");
    messages[i] = std::nullopt;
    ++rep.stragglers;
  }
  for (const auto& [i, corr] : byzantine) {
    require(i < n, "byzantine index out of range");
    if (!messages[i]) continue;  // straggler already silent
    Vec delta;
    if (corr) {
      delta = *corr;
      require(delta.size() == scheme.p / scheme.m, "corruption length");
    } else {
      delta.assign(scheme.p / scheme.m, 0);
      for (auto& v : delta) v = fval(rng.below(f->order()));
      if (vec_is_zero(delta)) delta[0] = 1;
    }
    if (vec_is_zero(delta)) continue;
    *messages[i] = vec_add(f, *messages[i], delta);
    ++rep.corrupted;
  }
  auto t2 = clock::now();

  try {
    rep.decoded = master_decode(scheme, messages, scheme.tau_b);
    rep.success = rep.decoded == rep.expected;
    if (!rep.success) rep.failure = "decoded value differs from the true sum";
  } catch (const Error& e) {
    rep.success = false;
    rep.failure = e.what();
  }
  auto t3 = clock::now();
  auto us = [](auto a, auto b) {
    return std::chrono::duration_cast<std::chrono::microseconds>(b - a).count();
  };
  rep.encode_us = us(t0, t1);
  rep.attack_us = us(t1, t2);
  rep.decode_us = us(t2, t3);
  return rep;
}

FixedPointCodec::FixedPointCodec(Field prime_field, std::uint64_t scale)
    : f_(std::move(prime_field)), scale_(scale) {
  require(f_->degree() == 1, "quantization targets a prime field");
  require(scale_ >= 1, "scale must be positive");
}

Vec FixedPointCodec::encode(const std::vector<double>& xs) const {
  const std::uint64_t p = f_->order();
  Vec out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double scaled = std::round(xs[i] * double(scale_));
    require(std::abs(scaled) < double(p) / 2.0,
            "value overflows the field after scaling");
    long long v = (long long)scaled;
    out[i] = fval(v >= 0 ? v : (long long)p + v);
  }
  return out;
}

std::vector<double> FixedPointCodec::decode(const Vec& vs) const {
  const long long p = (long long)f_->order();
  std::vector<double> out(vs.size());
  for (size_t i = 0; i < vs.size(); ++i) {
    long long v = (long long)vs[i];
    if (v > p / 2) v -= p;
    out[i] = double(v) / double(scale_);
  }
  return out;
}

}  // namespace nfc
