// SPDX-License-Identifier: Apache-2.0
//
// Maximum-Ratio, Phase-Only and Zero-Forcing precoders and the linear
// received-signal map y = H P s.

#pragma once

#include <armadillo>
#include <cstddef>
#include <string>

#include "beamgrid/scene.hpp"

namespace beamgrid {

enum class Scheme { mr, po, zf };

Scheme scheme_from_string(const std::string& s);  // exact lowercase: mr, po, zf
std::string to_string(Scheme scheme);

// antennas (M) x users (N); column n is user n's beamforming vector
struct PrecodingMatrix {
  arma::cx_mat p;
  Scheme scheme = Scheme::mr;
};

// P = H^H / sqrt(M); errors on an all-zero user row
PrecodingMatrix mr_precoder(const ChannelMatrix& H);

// element-wise e^{j arg(P_MR)}; every entry has unit modulus
PrecodingMatrix po_precoder(const ChannelMatrix& H);

// sqrt(|M - N|) times the SVD pseudo-inverse of H. For M > N this nulls
// inter-user interference exactly (H P = sqrt(M - N) I); for M < N only the
// least-squares pseudo-inverse property holds. M = N is rejected (the
// sqrt(M - N) scaling degenerates to zero), as is a Gram condition number
// of 1e12 or worse.
PrecodingMatrix zf_precoder(const ChannelMatrix& H);

// y = H P s
arma::cx_vec apply(const ChannelMatrix& H, const PrecodingMatrix& P, const arma::cx_vec& s);

// per-antenna transmit power sum_n |p_{m,n}|^2, normalized to total 1
arma::vec antenna_energy(const PrecodingMatrix& P);

}  // namespace beamgrid
