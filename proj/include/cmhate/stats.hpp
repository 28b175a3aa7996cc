// SPDX-License-Identifier: Apache-2.0
//
// Welch's unequal-variance t-test with p-values from the regularized
// incomplete beta function.

#pragma once

#include <span>

namespace cmhate {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
};

// I_x(a, b) for a, b > 0 and x in [0, 1], via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_tailed_p(double t, double df);

// Sample variances (n - 1), Welch-Satterthwaite df. Requires |a|, |b| >= 2
// (std::invalid_argument); throws DegenerateVariance when both variances
// are zero.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace cmhate
