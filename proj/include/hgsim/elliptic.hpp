#ifndef HGSIM_ELLIPTIC_HPP
#define HGSIM_ELLIPTIC_HPP

namespace hgsim {

/// Jacobi sn(u, k) with modulus k in [0, 1], evaluated by the descending
/// Landen (AGM) ladder. sn(u, 0) = sin u, sn(u, 1) = tanh u.
double jacobi_sn(double u, double k);

/// Complete elliptic integral K(k) of the first kind (modulus convention).
double complete_elliptic_k(double k);

/// Inverse of sn on the principal branch: inverse_sn(x, k) = u in [0, K(k)]
/// with sn(u, k) = x, for x in [0, 1].
double inverse_sn(double x, double k);

/// Carlson symmetric integral R_F(x, y, z).
double carlson_rf(double x, double y, double z);

}  // namespace hgsim

#endif
