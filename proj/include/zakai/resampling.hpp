#ifndef ZAKAI_RESAMPLING_HPP
#define ZAKAI_RESAMPLING_HPP

#include <utility>
#include <vector>

#include "zakai/rng.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// log(sum(exp(lw))) with max subtraction. Returns -inf when every entry is
/// -inf.
double log_sum_exp(const Eigen::Ref<const Vector>& lw);

/// Probabilities p_i = exp(lw_i - logsumexp(lw)). Entries of -inf map to
/// probability zero; if all entries are -inf the weights have collapsed and a
/// degeneracy_error is thrown.
Vector normalize_log_weights(const Eigen::Ref<const Vector>& lw);

/// Effective sample size 1 / sum(p_i^2) of a normalized PMF.
double effective_sample_size(const Eigen::Ref<const Vector>& pmf);

/// One categorical draw by inverse CDF on a single uniform.
int categorical_index(RngStream& rng, const Eigen::Ref<const Vector>& pmf);

/// n i.i.d. categorical draws from pmf, one uniform consumed per draw.
std::vector<int> multinomial_indices(RngStream& rng, const Eigen::Ref<const Vector>& pmf, int n);

/// Maximal coupling of two PMFs of equal size: with probability
/// rbar = sum_i min(r1_i, r2_i) the indices meet (drawn from the min overlap),
/// otherwise they are drawn independently from the residuals. Marginally the
/// first index has PMF r1 and the second r2. Consumes one uniform for the
/// branch choice, then one (meet) or two (residual) uniforms for the draws.
std::pair<int, int> maximal_coupling_indices(RngStream& rng, const Eigen::Ref<const Vector>& r1,
                                             const Eigen::Ref<const Vector>& r2);

}  // namespace zakai

#endif
