#pragma once

// Closed-form probabilities and moments for increasing paths of i.i.d.
// uniform labels, plus a generic piecewise-polynomial volume oracle for
// per-coordinate lower-bound events.

#include <optional>
#include <vector>

namespace accper {

// Event {u_1 < ... < u_k, u_j >= lower[j-1], u_j <= upper_cap}. An
// infeasible profile has probability 0 (never an error): experiment sweeps
// legitimately generate such profiles.
struct path_bound_profile {
    std::vector<double> lower;
    std::optional<double> upper_cap;  // global cap; default 1
};

struct moment_summary {
    double log_mean = 0.0;
    double log_second_moment = 0.0;
    double normalized_second_moment = 0.0;  // E[Z^2]/E[Z]^2
};

// (J-k)/(k! J); requires 1 <= k < J.
double phi(int k, int j_cap);

// (1+1/J)^k (J+1-k) (1-eps)^k / (k! (J+1)); requires 1 <= k <= J, 0 <= eps < 1.
// The event form is u_j >= eps + (1-eps)(j-1)/J.
double psi(int k, int j_cap, double eps);

// Exact volume of the profile event via symbolic level-by-level integration
// of the running piecewise polynomial (double coefficients; well conditioned
// for lengths <= 12, cross-checked against a rational-arithmetic oracle in
// the test suite).
double increasing_path_prob(const path_bound_profile& profile);

// P[A_L(K)]: profile u_j >= (j-L)_+/(K+1), j = 1..K. Requires 0 <= L < K.
// A_0 gives exactly 1/(K+1)!; A_1 equals psi(K, K+1, 0).
double prob_A(int L, int K);

// Natural log of the closed upper bound for P(D_{i,k}),
// D_{i,k} = {u_1<...<u_k, u_j >= (j-i)/(k-i+1)}:
//   (k-i) + c1*sqrt(i-1) + 2 - k*log(k+1-i) - (3/2)*log(k), with c1 = 40.
double u_bound(int i, int k);

// Natural log of an upper bound for P[A_L(K)] assembled from the explicit
// chain: exact P[A_1(K)] plus sum over i<L, k<=K of q_{i,k} * pbar_{i,k},
//   q_{i,k} = ((K+2+i-k)/(K+1))^{K-k} (i+2) / ((K-k)! (K-k+i+2))   (exact)
//   pbar_{i,k} = ((k-i)/(K+1))^k / (k-i) * exp(u_bound(i, k-1)),
// accumulated in log scale.
double bound_A(int L, int K);

// log E_x[Z_{N,k}] = k ln N + k ln(1-x) - ln k!; x = 1 gives -infinity.
moment_summary mean_Z(int N, int k, double x);

// Uniform-root variant: log of N^k/(k+1)!.
double mean_Z_uniform_root(int N, int k);

// Full second-moment sum in log scale:
//   E_x[Z^2] = m + m^2 ((N-1)/N) sum_{q=0}^{k-1} a_k(q, x),
//   a_k(q,x) = (2k-2q)! k! k! / ([(1-x)N]^q (2k-q)! ((k-q)!)^2).
// Rejects x = 1.
moment_summary second_moment_Z(int N, int k, double x);

// Growth/decay exponent alpha (1 - ln alpha); zero at alpha = e, max 1 at 1.
double theta(double alpha);

// Integer-k conventions used throughout: k = floor(alpha*N) for ratio
// sweeps, k = round(e*N - beta*log N) for window scans.
int k_of_alpha(double alpha, int N);
int k_of_window(double beta, int N);

}  // namespace accper
