#pragma once

#include <string>
#include <vector>

namespace msta {

// Physical aperture: M x N element lattice (row m=1 is the bottom row),
// spacings in wavelengths, and the two square subarray sides S < L.
// L must be an integer multiple of S (the large tile side in units of the
// small side is l_hat = L/S >= 2).
struct aperture_spec {
    int M = 0;          // element rows
    int N = 0;          // element columns
    int S = 1;          // small tile side, in elements
    int L = 2;          // large tile side, in elements
    double dx = 0.5;    // column pitch [lambda]
    double dy = 0.5;    // row pitch [lambda]
};

// throws errc::invalid_instance unless 1 <= S < L, L = l_hat*S with
// l_hat >= 2, M,N >= 1, dx,dy > 0
void validate(const aperture_spec& spec);

struct tileability_report {
    bool tileable = false;
    std::vector<std::string> reasons;   // one entry per checked condition
};

// Divisibility test (S | M and S | N) plus, when large tiles are required
// to be available, max(M,N) >= L.  A tileable instance may still be tiled
// with zero large tiles.
tileability_report check_tileability(const aperture_spec& spec, bool require_large = true);

// Aperture rescaled by 1/S.  Anchor coordinates (bottom-left corners of
// large tiles) live on an anchor_rows x anchor_cols grid; both can be
// nonpositive when the aperture is thinner than one large tile, in which
// case no anchor encoding exists.
struct virtual_grid {
    int m_hat = 0;          // M/S
    int n_hat = 0;          // N/S
    int l_hat = 0;          // L/S
    int anchor_rows = 0;    // m_hat - l_hat + 1
    int anchor_cols = 0;    // n_hat - l_hat + 1
};

// throws errc::invalid_instance when S does not divide both M and N
virtual_grid to_virtual(const aperture_spec& spec);

} // namespace msta
