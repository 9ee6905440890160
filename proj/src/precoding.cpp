// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/precoding.hpp"

#include <cmath>
#include <string>

#include "beamgrid/errors.hpp"

namespace beamgrid {

Scheme scheme_from_string(const std::string& s) {
  if (s == "mr") return Scheme::mr;
  if (s == "po") return Scheme::po;
  if (s == "zf") return Scheme::zf;
  throw ConfigError("unknown precoding scheme: " + s);
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::mr: return "mr";
    case Scheme::po: return "po";
    case Scheme::zf: return "zf";
  }
  throw ConfigError("invalid scheme value");
}

namespace {

void check_finite(const arma::cx_mat& h) {
  if (h.n_rows == 0 || h.n_cols == 0) throw ConfigError("empty channel matrix");
  if (!h.is_finite()) throw ConfigError("channel matrix has non-finite entries");
}

}  // namespace

PrecodingMatrix mr_precoder(const ChannelMatrix& H) {
  check_finite(H.h);
  for (arma::uword n = 0; n < H.h.n_rows; ++n) {
    if (arma::norm(H.h.row(n)) == 0.0)
      throw DegeneracyError("mr_precoder: user " + std::to_string(n) +
                            " has an all-zero channel row");
  }
  PrecodingMatrix P;
  P.scheme = Scheme::mr;
  P.p = H.h.t() / std::sqrt(static_cast<double>(H.h.n_cols));
  return P;
}

PrecodingMatrix po_precoder(const ChannelMatrix& H) {
  PrecodingMatrix P = mr_precoder(H);
  P.scheme = Scheme::po;
  for (arma::uword m = 0; m < P.p.n_rows; ++m) {
    for (arma::uword n = 0; n < P.p.n_cols; ++n) {
      const std::complex<double> v = P.p(m, n);
      const double mag = std::abs(v);
      if (mag == 0.0)
        throw DegeneracyError("po_precoder: zero entry at antenna " + std::to_string(m) +
                              ", user " + std::to_string(n) + " leaves the phase undefined");
      P.p(m, n) = v / mag;
    }
  }
  return P;
}

PrecodingMatrix zf_precoder(const ChannelMatrix& H) {
  check_finite(H.h);
  const arma::uword n_users = H.h.n_rows;
  const arma::uword n_ant = H.h.n_cols;
  if (n_users == n_ant)
    throw DegeneracyError("zf_precoder: M == N degenerates the sqrt(M - N) scaling");

  const arma::vec sv = arma::svd(H.h);
  const double smin = sv.min();
  const double smax = sv.max();
  // Gram condition number = cond(H)^2
  if (smin == 0.0 || (smax / smin) * (smax / smin) >= 1e12)
    throw DegeneracyError("zf_precoder: Gram matrix condition number >= 1e12");

  PrecodingMatrix P;
  P.scheme = Scheme::zf;
  const double scale = std::sqrt(std::abs(static_cast<double>(n_ant) -
                                          static_cast<double>(n_users)));
  P.p = scale * arma::pinv(H.h);
  return P;
}

arma::cx_vec apply(const ChannelMatrix& H, const PrecodingMatrix& P, const arma::cx_vec& s) {
  if (H.h.n_cols != P.p.n_rows || P.p.n_cols != s.n_elem)
    throw ConfigError("apply: dimension mismatch");
  return H.h * (P.p * s);
}

arma::vec antenna_energy(const PrecodingMatrix& P) {
  arma::vec energy(P.p.n_rows, arma::fill::zeros);
  for (arma::uword m = 0; m < P.p.n_rows; ++m)
    for (arma::uword n = 0; n < P.p.n_cols; ++n) energy(m) += std::norm(P.p(m, n));
  const double total = arma::accu(energy);
  if (total > 0.0) energy /= total;
  return energy;
}

}  // namespace beamgrid
