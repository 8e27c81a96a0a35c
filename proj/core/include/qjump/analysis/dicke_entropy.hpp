#pragma once

#include <vector>

namespace qjump::analysis {

/// Closed form for the entanglement entropy (bits) of the Dicke
/// state |D_N^k> across the (l | N-l) cut. The Schmidt weights are
/// hypergeometric, p_q = C(l,q) C(N-l,k-q) / C(N,k); binomials are taken in
/// log space beyond N = 62 so N up to a few hundred is fine.
double dicke_entropy(int n_sites, int n_excitations, int cut);

/// Schmidt weights p_q for q = max(0, l+k-N) ... min(l, k).
std::vector<double> dicke_schmidt_weights(int n_sites, int n_excitations, int cut);

/// dicke_entropy for every cut 1..N-1.
std::vector<double> dicke_profile(int n_sites, int n_excitations);

/// Asymptotic bound (1/2) log2(N/2).
double dicke_entropy_max(int n_sites);

}  // namespace qjump::analysis
