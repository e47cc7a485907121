// SPDX-License-Identifier: Apache-2.0
#include "nfc/capacity.hpp"

#include <algorithm>

namespace nfc {

namespace {

size_t min_cut_size(const Network& net) {
  size_t h = size_t(-1);
  for (size_t s : net.sources())
    h = std::min(h, min_cut(net, {s}, net.sink()).size);
  return h;
}

// Network with the same graph but only the given sources (by ordinal).
NetworkPtr sub_network(const Network& net, const std::vector<size_t>& ords) {
  NetworkDescription nd = net.description();
  nd.sources.clear();
  for (size_t i : ords) nd.sources.push_back(net.vertex_name(net.sources()[i]));
  return std::make_shared<Network>(Network::validate(nd));
}

/* Sum bundle over the sub-network of sources with nonzero coefficients,
 * source matrices scaled so the sink computes sum_i t_i x_i. */
TimeSharingRound scaled_sum_round(const NetworkPtr& net, const Vec& column,
                                  size_t rate, Field field, std::uint64_t seed,
                                  const Matrix& full_t_col) {
  std::vector<size_t> ords;
  for (size_t i = 0; i < column.size(); ++i)
    if (column[i] != 0) ords.push_back(i);
  require(!ords.empty(), "target column is zero");
  NetworkPtr sub = sub_network(*net, ords);

  SumCodeBundle bundle = construct_sum_code(sub, rate, field, seed);
  const Field& f = bundle.code->field();

  if (std::any_of(ords.begin(), ords.end(),
                  [&](size_t i) { return column[i] != 1; })) {
    // rescale the source matrices; the distance is unchanged because the
    // scaled global matrix spans the same row space
    std::vector<Matrix> scaled;
    for (size_t i = 0; i < ords.size(); ++i)
      scaled.push_back(
          bundle.code->source_matrices()[i].scaled(column[ords[i]]));
    auto code = std::make_shared<LinearNetworkCode>(
        bundle.code->net_ptr(), f, rate, scaled, bundle.code->transfer());
    Matrix tcol(f, ords.size(), 1);
    for (size_t i = 0; i < ords.size(); ++i) tcol.at(i, 0) = column[ords[i]];
    ensure(computes_function(*code, tcol, rate),
           "scaled code lost the target function");
    DistanceCertificate cert = min_distance(*code, tcol, rate);
    ensure(cert.d_min == bundle.certificate.d_min,
           "scaling changed the distance");
    bundle.code = code;
    bundle.certificate = cert;
  }
  (void)full_t_col;
  return {std::move(bundle), std::move(ords), column};
}

}  // namespace

Rational robust_upper(const Network& net, const Matrix& t, size_t tau) {
  require(t.rows() == net.source_count(),
          "target matrix must have one row per source");
  require(2 * tau < min_cut_size(net),
          "tau too large: 2*tau must stay below the minimum cut");
  const auto& srcs = net.sources();
  const size_t s = srcs.size();
  size_t gamma = net.sink();
  bool have = false;
  Rational best(0);
  for (std::uint64_t mask = 1; mask < (1ull << s); ++mask) {
    std::vector<size_t> subset, rowidx;
    for (size_t i = 0; i < s; ++i)
      if (mask >> i & 1) {
        subset.push_back(srcs[i]);
        rowidx.push_back(i);
      }
    long long rk = (long long)t.rows_at(rowidx).rank();
    if (rk == 0) continue;
    long long cut = (long long)min_cut(net, subset, gamma).size;
    Rational r(cut - 2 * (long long)tau, rk);
    if (!have || r < best) {
      best = r;
      have = true;
    }
  }
  ensure(have, "target matrix has rank zero");
  return best;
}

TimeSharingScheme time_sharing_scheme(const NetworkPtr& net, const Matrix& t,
                                      size_t tau, Field field,
                                      std::uint64_t seed) {
  require(t.rows() == net->source_count(),
          "target matrix must have one row per source");
  require(t.rank() == t.cols(), "target matrix must have full column rank");
  const size_t h = min_cut_size(*net);
  require(2 * tau < h, "tau too large: w' would not be positive");
  const size_t w_prime = h - 2 * tau;

  TimeSharingScheme scheme;
  scheme.w_prime = w_prime;
  Rng rng(seed);
  for (size_t c = 0; c < t.cols(); ++c) {
    Vec column(t.rows());
    for (size_t r = 0; r < t.rows(); ++r) column[r] = t.at(r, c);
    Matrix tcol = t.cols_at({c});
    scheme.rounds.push_back(scaled_sum_round(net, column, w_prime, field,
                                             rng.next_u64(), tcol));
    ensure(scheme.rounds.back().bundle.certificate.d_min >= 2 * tau + 1,
           "round code is not robust to tau errors");
  }
  return scheme;
}

RobustLowerResult robust_lower(const NetworkPtr& net, const Matrix& t,
                               size_t tau, Field field, std::uint64_t seed) {
  require(t.rows() == net->source_count(),
          "target matrix must have one row per source");
  require(t.rank() == t.cols(), "target matrix must have full column rank");
  const size_t h = min_cut_size(*net);
  require(2 * tau < h, "tau too large: 2*tau must stay below the minimum cut");

  RobustLowerResult res;
  res.report.upper = robust_upper(*net, t, tau);

  const size_t s = net->source_count();
  const size_t l = t.cols();

  if (l == 1) {
    // scaled sum: achieves the cut-set bound
    Vec column(s);
    for (size_t i = 0; i < s; ++i) column[i] = t.at(i, 0);
    std::vector<size_t> ords;
    for (size_t i = 0; i < s; ++i)
      if (column[i] != 0) ords.push_back(i);
    NetworkPtr sub = sub_network(*net, ords);
    size_t h_sub = min_cut_size(*sub);
    size_t k = h_sub - 2 * tau;
    TimeSharingRound round =
        scaled_sum_round(net, column, k, field, seed, t);
    res.report.lower = Rational((long long)k);
    res.report.scheme = "sum";
    res.report.gap = res.report.lower != res.report.upper;
    res.sum_witness = std::move(round.bundle);
    return res;
  }

  if (l == s) {
    // invertible square target: recover x itself, post-compose T at the sink
    long long k = floor_div(res.report.upper);
    res.report.lower = Rational(k);
    res.report.scheme = "identity";
    res.report.gap = false;  // integral part of the cut-set bound is attained
    if (k >= 1) {
      res.identity_witness = construct_identity_code(
          net, size_t(k), field, seed, /*r_limit=*/20000, /*auto_grow=*/true);
      ensure(res.identity_witness->certificate.d_min >= 2 * tau + 1,
             "identity witness is not robust to tau errors");
    }
    return res;
  }

  res.time_sharing_witness = time_sharing_scheme(net, t, tau, field, seed);
  res.report.lower = Rational((long long)(h - 2 * tau), (long long)l);
  res.report.scheme = "time-sharing(l=" + std::to_string(l) + ")";
  res.report.gap = true;  // tightness of the time-sharing bound is open
  return res;
}

}  // namespace nfc
